#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace ldgof {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Neumaier-compensated accumulator. The result does not depend on the
/// magnitude ordering of the addends to within a couple of ulps.
template <class T>
class CompensatedSum {
 public:
  CompensatedSum() = default;
  explicit CompensatedSum(T init) : sum_(init) {}

  CompensatedSum& operator+=(T value) {
    const T t = sum_ + value;
    if (std::abs(sum_) >= std::abs(value)) {
      compensation_ += (sum_ - t) + value;
    } else {
      compensation_ += (value - t) + sum_;
    }
    sum_ = t;
    return *this;
  }

  T value() const { return sum_ + compensation_; }

 private:
  T sum_{0};
  T compensation_{0};
};

BigInt factorial(unsigned k);
double factorial_double(unsigned k);

/// Parses "a/b", an integer, or a decimal literal (optionally with an
/// exponent) into an exact rational. Throws ParseError on malformed input.
Rational parse_rational(std::string_view text);

double to_double(const Rational& q);
long double to_long_double(const Rational& q);

/// Exact rational equal to the given finite double.
Rational rational_from_double(double value);

}  // namespace ldgof
