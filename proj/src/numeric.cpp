#include "ldgof/numeric.hpp"

#include <cctype>
#include <string>

#include "ldgof/error.hpp"

namespace ldgof {

BigInt factorial(unsigned k) {
  BigInt result = 1;
  for (unsigned i = 2; i <= k; ++i) result *= i;
  return result;
}

double factorial_double(unsigned k) { return std::tgamma(static_cast<double>(k) + 1.0); }

namespace {

BigInt parse_integer(std::string_view digits, std::string_view whole) {
  if (digits.empty()) throw ParseError("malformed number: '" + std::string(whole) + "'");
  BigInt value = 0;
  for (char c : digits) {
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw ParseError("malformed number: '" + std::string(whole) + "'");
    }
    value = value * 10 + (c - '0');
  }
  return value;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

Rational parse_decimal(std::string_view text, std::string_view whole) {
  bool negative = false;
  if (!text.empty() && (text.front() == '+' || text.front() == '-')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_part = text.substr(e + 1);
    bool exp_negative = false;
    if (!exp_part.empty() && (exp_part.front() == '+' || exp_part.front() == '-')) {
      exp_negative = exp_part.front() == '-';
      exp_part.remove_prefix(1);
    }
    if (exp_part.empty() || exp_part.size() > 6) {
      throw ParseError("malformed exponent: '" + std::string(whole) + "'");
    }
    exponent = static_cast<long>(parse_integer(exp_part, whole));
    if (exp_negative) exponent = -exponent;
    text = text.substr(0, e);
  }
  std::string digits;
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    digits = std::string(text.substr(0, dot)) + std::string(text.substr(dot + 1));
    exponent -= static_cast<long>(text.size() - dot - 1);
  } else {
    digits = std::string(text);
  }
  Rational value(parse_integer(digits, whole));
  BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(std::labs(exponent)));
  if (exponent >= 0) {
    value *= scale;
  } else {
    value /= scale;
  }
  return negative ? -value : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string_view whole = trim(text);
  if (whole.empty()) throw ParseError("empty number");
  if (auto slash = whole.find('/'); slash != std::string_view::npos) {
    const Rational num = parse_decimal(trim(whole.substr(0, slash)), whole);
    const Rational den = parse_decimal(trim(whole.substr(slash + 1)), whole);
    if (den == 0) throw ParseError("zero denominator: '" + std::string(whole) + "'");
    return num / den;
  }
  return parse_decimal(whole, whole);
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

long double to_long_double(const Rational& q) { return q.convert_to<long double>(); }

Rational rational_from_double(double value) {
  if (!std::isfinite(value)) throw RangeError("non-finite value has no rational form");
  if (value == 0.0) return Rational(0);
  int exp = 0;
  const double mantissa = std::frexp(value, &exp);
  // 53 significant bits fit exactly into an int64.
  const auto scaled = static_cast<std::int64_t>(std::ldexp(mantissa, 53));
  exp -= 53;
  Rational result{BigInt(scaled)};
  const BigInt power = BigInt(1) << std::abs(exp);
  if (exp >= 0) {
    result *= power;
  } else {
    result /= power;
  }
  return result;
}

}  // namespace ldgof
