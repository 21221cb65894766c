#include "ldgof/cumulants.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "ldgof/error.hpp"

namespace ldgof {

namespace {

// One integer partition of k, stored as (part size, multiplicity) pairs.
using Partition = std::vector<std::pair<int, int>>;

void collect_partitions(int remaining, int largest, Partition& current, std::vector<Partition>& out) {
  if (remaining == 0) {
    out.push_back(current);
    return;
  }
  for (int part = std::min(largest, remaining); part >= 1; --part) {
    for (int mult = remaining / part; mult >= 1; --mult) {
      current.emplace_back(part, mult);
      collect_partitions(remaining - part * mult, part - 1, current, out);
      current.pop_back();
    }
  }
}

std::vector<Partition> partitions_of(int k) {
  std::vector<Partition> out;
  Partition current;
  collect_partitions(k, k, current, out);
  return out;
}

template <class T>
T factorial_as(unsigned k);

template <>
Rational factorial_as<Rational>(unsigned k) {
  return Rational(factorial(k));
}

template <class T>
T power(const T& base, int exponent) {
  T result(1);
  for (int i = 0; i < exponent; ++i) result *= base;
  return result;
}

// C_k = k! sum (-1)^{M-1} (M-1)! prod_l (1/m_l!) (alpha_l / l!)^{m_l},
// summed over m_1 + 2 m_2 + ... + k m_k = k with M = sum m_l.
template <class T>
std::vector<T> partition_cumulants(std::span<const T> moments) {
  const int order = static_cast<int>(moments.size());
  std::vector<T> scaled(moments.size());
  for (int l = 1; l <= order; ++l) {
    scaled[static_cast<std::size_t>(l - 1)] =
        moments[static_cast<std::size_t>(l - 1)] / factorial_as<T>(static_cast<unsigned>(l));
  }
  std::vector<T> cumulants;
  cumulants.reserve(moments.size());
  for (int k = 1; k <= order; ++k) {
    T total(0);
    for (const auto& partition : partitions_of(k)) {
      int blocks = 0;
      T term(1);
      for (auto [part, mult] : partition) {
        blocks += mult;
        term *= power(scaled[static_cast<std::size_t>(part - 1)], mult) /
                factorial_as<T>(static_cast<unsigned>(mult));
      }
      term *= factorial_as<T>(static_cast<unsigned>(blocks - 1));
      if ((blocks - 1) % 2 == 1) term = -term;
      total += term;
    }
    cumulants.push_back(total * factorial_as<T>(static_cast<unsigned>(k)));
  }
  return cumulants;
}

// alpha_n = sum_{j=1}^{n} binom(n-1, j-1) C_j alpha_{n-j}, alpha_0 = 1.
std::vector<Rational> recursive_moments(std::span<const Rational> cumulants) {
  const std::size_t order = cumulants.size();
  std::vector<Rational> alpha(order + 1, Rational(0));
  alpha[0] = 1;
  for (std::size_t n = 1; n <= order; ++n) {
    Rational acc = 0;
    BigInt binom = 1;
    for (std::size_t j = 1; j <= n; ++j) {
      acc += Rational(binom) * cumulants[j - 1] * alpha[n - j];
      binom = binom * (n - j) / j;
    }
    alpha[n] = acc;
  }
  alpha.erase(alpha.begin());
  return alpha;
}

// Doubles are exact binary rationals, so the float transforms run exactly on
// their inputs and round once on the way out.
std::vector<Rational> exact_copy(std::span<const double> values) {
  std::vector<Rational> out;
  out.reserve(values.size());
  for (double v : values) out.push_back(rational_from_double(v));
  return out;
}

std::vector<double> rounded_copy(const std::vector<Rational>& values) {
  std::vector<double> out;
  out.reserve(values.size());
  for (const auto& v : values) out.push_back(to_double(v));
  return out;
}

void check_order(int order, int cap) {
  if (order < 2) throw RangeError("need at least two moments/cumulants");
  if (order > cap) {
    throw RangeError("order " + std::to_string(order) + " exceeds the supported maximum " +
                     std::to_string(cap));
  }
}

}  // namespace

MomentVector::MomentVector(std::vector<double> values) : values_(std::move(values)) {
  check_order(order(), kMaxFloatCumulantOrder);
  const double a1 = values_[0];
  const double a2 = values_[1];
  if (a2 - a1 * a1 < -1e-12 * std::max(1.0, std::abs(a2))) {
    throw RangeError("second moment is below the squared mean");
  }
}

CumulantVector::CumulantVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw RangeError("empty cumulant vector");
  if (values_.size() >= 2 && values_[1] < -1e-12 * std::max(1.0, std::abs(values_[0]))) {
    throw RangeError("second cumulant must be non-negative");
  }
}

CumulantVector moments_to_cumulants(const MomentVector& moments) {
  const auto exact = exact_copy(moments.values());
  return CumulantVector(rounded_copy(partition_cumulants<Rational>(exact)));
}

std::vector<Rational> moments_to_cumulants(std::span<const Rational> moments) {
  check_order(static_cast<int>(moments.size()), kMaxExactCumulantOrder);
  if (moments[1] < moments[0] * moments[0]) throw RangeError("second moment is below the squared mean");
  return partition_cumulants<Rational>(moments);
}

MomentVector cumulants_to_moments(const CumulantVector& cumulants) {
  check_order(cumulants.order(), kMaxFloatCumulantOrder);
  const auto exact = exact_copy(cumulants.values());
  return MomentVector(rounded_copy(recursive_moments(exact)));
}

std::vector<Rational> cumulants_to_moments(std::span<const Rational> cumulants) {
  check_order(static_cast<int>(cumulants.size()), kMaxExactCumulantOrder);
  return recursive_moments(cumulants);
}

CumulantVector sum_independent_cumulants(std::span<const CumulantVector> parts) {
  if (parts.empty()) throw ShapeError("no cumulant vectors to combine");
  const int order = parts.front().order();
  std::vector<CompensatedSum<double>> sums(static_cast<std::size_t>(order));
  for (const auto& part : parts) {
    if (part.order() != order) throw ShapeError("cumulant vectors have mismatched lengths");
    for (int k = 0; k < order; ++k) sums[static_cast<std::size_t>(k)] += part.values()[static_cast<std::size_t>(k)];
  }
  std::vector<double> out;
  out.reserve(sums.size());
  for (const auto& s : sums) out.push_back(s.value());
  return CumulantVector(std::move(out));
}

bool DeltaCertificate::holds_for(const CumulantVector& cumulants, double rel_tol) const {
  for (int k = 3; k <= std::min(max_order, cumulants.order()); ++k) {
    const double bound =
        std::pow(factorial_double(static_cast<unsigned>(k)), 1.0 + nu) * std::pow(delta, -(k - 2.0));
    if (std::abs(cumulants[k]) > bound * (1.0 + rel_tol)) return false;
  }
  return true;
}

DeltaCertificate statulevicius_delta(const CumulantVector& cumulants, double tol) {
  if (cumulants.order() < 3) throw RangeError("need cumulants up to order at least 3");
  if (std::abs(cumulants[1]) > tol || std::abs(cumulants[2] - 1.0) > tol) {
    throw ContractError("cumulants are not standardized (C1 = 0, C2 = 1 required)");
  }
  DeltaCertificate cert;
  cert.max_order = cumulants.order();
  for (int k = 3; k <= cumulants.order(); ++k) {
    const double c = std::abs(cumulants[k]);
    if (c == 0.0) continue;
    const double f = factorial_double(static_cast<unsigned>(k));
    cert.delta = std::min(cert.delta, std::pow(f * f / c, 1.0 / (k - 2.0)));
  }
  if (!cert.holds_for(cumulants, 1e-9)) {
    throw ContractError("internal: delta certificate failed re-verification");
  }
  return cert;
}

DeltaCertificate bernstein_to_delta(double bernstein_constant, int nu) {
  if (!(bernstein_constant > 0.0)) throw RangeError("Bernstein constant must be positive");
  if (nu < 0) throw RangeError("condition exponent must be non-negative");
  DeltaCertificate cert;
  cert.delta = 1.0 / (2.0 * bernstein_constant);
  cert.nu = nu;
  return cert;
}

double tail_validity_range(double delta, double k_tilde) {
  if (!(delta > 0.0)) throw RangeError("delta must be positive");
  if (!(k_tilde >= 3.0)) throw RangeError("usable cumulant order must be at least 3");
  return std::min(std::sqrt(k_tilde), std::cbrt(delta)) / 12.0;
}

}  // namespace ldgof
