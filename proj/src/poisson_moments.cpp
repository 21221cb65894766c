#include "ldgof/poisson_moments.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include "ldgof/error.hpp"

namespace ldgof {

PoissonRate::PoissonRate(double lambda) : lambda_(lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw RangeError("Poisson rate must be positive and finite, got " + std::to_string(lambda));
  }
}

MomentPolynomial::MomentPolynomial(int order, std::vector<Rational> coefficients)
    : order_(order), coefficients_(std::move(coefficients)) {
  if (order < 2) throw RangeError("moment order must be at least 2");
  if (static_cast<int>(coefficients_.size()) != order / 2) {
    throw ShapeError("moment polynomial of order " + std::to_string(order) + " needs " +
                     std::to_string(order / 2) + " coefficients");
  }
}

const Rational& MomentPolynomial::coefficient(int l) const {
  if (l < 1 || l > degree()) throw RangeError("coefficient index out of range");
  return coefficients_[static_cast<std::size_t>(l - 1)];
}

Rational MomentPolynomial::scaled_coefficient(int l) const {
  return coefficient(l) * Rational(factorial(static_cast<unsigned>(order_)));
}

double MomentPolynomial::evaluate(double lambda) const {
  long double acc = 0.0L;
  for (int l = degree(); l >= 1; --l) {
    acc = (acc + to_long_double(scaled_coefficient(l))) * static_cast<long double>(lambda);
  }
  return static_cast<double>(acc);
}

Rational MomentPolynomial::evaluate(const Rational& lambda) const {
  Rational acc = 0;
  for (int l = degree(); l >= 1; --l) acc = (acc + scaled_coefficient(l)) * lambda;
  return acc;
}

namespace {

void check_order(int order, int max_order) {
  if (order < 2 || order > max_order) {
    throw RangeError("moment order " + std::to_string(order) + " outside [2, " +
                     std::to_string(max_order) + "]");
  }
}

// Integer coefficients of mu_v(lambda) indexed by power of lambda, v = 0..up_to.
std::vector<std::vector<BigInt>> build_recursion_table(int up_to) {
  std::vector<std::vector<BigInt>> table(static_cast<std::size_t>(std::max(up_to, 3)) + 1);
  table[0] = {1};
  table[1] = {0};
  table[2] = {0, 1};
  table[3] = {0, 1};
  for (int v = 3; v < up_to; ++v) {
    const auto& prev = table[static_cast<std::size_t>(v - 1)];
    const auto& cur = table[static_cast<std::size_t>(v)];
    std::vector<BigInt> next(static_cast<std::size_t>((v + 1) / 2) + 1, BigInt(0));
    for (std::size_t l = 1; l < cur.size(); ++l) next[l] += BigInt(l) * cur[l];
    for (std::size_t l = 0; l < prev.size(); ++l) next[l + 1] += BigInt(v) * prev[l];
    table[static_cast<std::size_t>(v + 1)] = std::move(next);
  }
  return table;
}

MomentPolynomial from_scaled(int order, const std::vector<BigInt>& scaled) {
  const BigInt nu_factorial = factorial(static_cast<unsigned>(order));
  std::vector<Rational> c;
  c.reserve(static_cast<std::size_t>(order / 2));
  for (int l = 1; l <= order / 2; ++l) {
    c.emplace_back(scaled[static_cast<std::size_t>(l)], nu_factorial);
  }
  return MomentPolynomial(order, std::move(c));
}

const std::vector<std::vector<BigInt>>& default_table() {
  static const auto table = build_recursion_table(kDefaultMaxMomentOrder);
  return table;
}

// Sums prod_m 1 / (k_m! (m!)^{k_m}) over multiplicities of parts m <= largest,
// bucketed by the number of parts.
void bruno_partitions(int remaining, int largest, int parts, Rational term,
                      std::vector<Rational>& buckets) {
  if (remaining == 0) {
    buckets[static_cast<std::size_t>(parts - 1)] += term;
    return;
  }
  if (largest < 2) return;
  const Rational part_factorial(factorial(static_cast<unsigned>(largest)));
  Rational t = term;
  for (int k = 0; k * largest <= remaining; ++k) {
    if (k > 0) t /= part_factorial * k;
    bruno_partitions(remaining - k * largest, std::min(largest - 1, remaining - k * largest),
                     parts + k, t, buckets);
  }
}

}  // namespace

MomentPolynomial moment_coefficients(int order, int max_order) {
  check_order(order, max_order);
  if (order <= kDefaultMaxMomentOrder) {
    return from_scaled(order, default_table()[static_cast<std::size_t>(order)]);
  }
  return from_scaled(order, build_recursion_table(order)[static_cast<std::size_t>(order)]);
}

MomentPolynomial moment_coefficients_bruno(int order, int max_order) {
  check_order(order, max_order);
  std::vector<Rational> buckets(static_cast<std::size_t>(order / 2), Rational(0));
  bruno_partitions(order, order, 0, Rational(1), buckets);
  return MomentPolynomial(order, std::move(buckets));
}

double central_moment(int order, PoissonRate lambda) {
  return moment_coefficients(order).evaluate(lambda.value());
}

Rational central_moment_exact(int order, const Rational& lambda) {
  if (lambda <= 0) throw RangeError("Poisson rate must be positive");
  return moment_coefficients(order).evaluate(lambda);
}

double central_moment_oracle(int order, PoissonRate lambda, double mass_tol) {
  if (order < 0) throw RangeError("moment order must be non-negative");
  if (lambda.value() > 1e6) throw RangeError("oracle supports lambda <= 1e6");
  const long double rate = lambda.value();
  CompensatedSum<long double> sum;
  poisson_sweep(lambda.value(), mass_tol, [&](std::uint64_t j, long double pmf) {
    const long double term = std::pow(static_cast<long double>(j) - rate, order) * pmf;
    sum += term;
    return term;
  });
  return static_cast<double>(sum.value());
}

double standardized_moment(int order, PoissonRate lambda) {
  return central_moment(order, lambda) / std::pow(lambda.value(), 0.5 * order);
}

void write_coefficient_csv(std::ostream& out, std::span<const MomentPolynomial> polynomials) {
  out << "nu,l,numerator,denominator\n";
  for (const auto& poly : polynomials) {
    for (int l = 1; l <= poly.degree(); ++l) {
      const Rational& c = poly.coefficient(l);
      out << poly.order() << ',' << l << ',' << numerator(c) << ',' << denominator(c) << '\n';
    }
  }
}

}  // namespace ldgof
