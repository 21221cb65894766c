#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "ldgof/numeric.hpp"
#include "ldgof/poisson_sum.hpp"

namespace ldgof {

inline constexpr int kDefaultMaxMomentOrder = 40;

/// Expected count of a Poisson variable. Always positive and finite.
class PoissonRate {
 public:
  explicit PoissonRate(double lambda);
  double value() const { return lambda_; }

 private:
  double lambda_;
};

/// Central moment mu_nu(lambda) = nu! * sum_l c_l lambda^l of a Poisson
/// variable, held as exact rational coefficients c_1 .. c_{floor(nu/2)}.
class MomentPolynomial {
 public:
  MomentPolynomial(int order, std::vector<Rational> coefficients);

  int order() const { return order_; }
  int degree() const { return static_cast<int>(coefficients_.size()); }

  /// c_{l,nu} for 1 <= l <= degree().
  const Rational& coefficient(int l) const;
  /// nu! * c_{l,nu}; always an integer.
  Rational scaled_coefficient(int l) const;
  const std::vector<Rational>& coefficients() const { return coefficients_; }

  double evaluate(double lambda) const;
  Rational evaluate(const Rational& lambda) const;

  friend bool operator==(const MomentPolynomial&, const MomentPolynomial&) = default;

 private:
  int order_;
  std::vector<Rational> coefficients_;
};

/// Coefficients from the recursion mu_{v+1} = v lambda mu_{v-1} + lambda mu_v',
/// seeded by mu_2 = mu_3 = lambda. Orders up to kDefaultMaxMomentOrder come
/// from a table built once per process.
MomentPolynomial moment_coefficients(int order, int max_order = kDefaultMaxMomentOrder);

/// Independent recomputation by summing over partitions of `order` into parts
/// of size at least two (Faa di Bruno applied to exp(lambda(e^t - 1 - t))).
MomentPolynomial moment_coefficients_bruno(int order, int max_order = kDefaultMaxMomentOrder);

double central_moment(int order, PoissonRate lambda);
Rational central_moment_exact(int order, const Rational& lambda);

/// E (xi - lambda)^order by direct summation over the truncated Poisson pmf.
/// Accepts order >= 0. Test and cross-check use only.
double central_moment_oracle(int order, PoissonRate lambda, double mass_tol = kDefaultMassTolerance);

/// E ((xi - lambda) / sqrt(lambda))^order.
double standardized_moment(int order, PoissonRate lambda);

/// CSV rows `nu,l,numerator,denominator` preceded by a header line.
void write_coefficient_csv(std::ostream& out, std::span<const MomentPolynomial> polynomials);

}  // namespace ldgof
