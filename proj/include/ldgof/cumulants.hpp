#pragma once

#include <limits>
#include <span>
#include <vector>

#include "ldgof/numeric.hpp"

namespace ldgof {

inline constexpr int kMaxFloatCumulantOrder = 20;
inline constexpr int kMaxExactCumulantOrder = 40;

/// Raw moments alpha_1 .. alpha_K of a random variable (alpha_1 may be nonzero).
class MomentVector {
 public:
  explicit MomentVector(std::vector<double> values);
  std::span<const double> values() const { return values_; }
  int order() const { return static_cast<int>(values_.size()); }
  double operator[](int k) const { return values_.at(static_cast<std::size_t>(k - 1)); }

 private:
  std::vector<double> values_;
};

/// Cumulants C_1 .. C_K.
class CumulantVector {
 public:
  explicit CumulantVector(std::vector<double> values);
  std::span<const double> values() const { return values_; }
  int order() const { return static_cast<int>(values_.size()); }
  /// 1-based, C_k.
  double operator[](int k) const { return values_.at(static_cast<std::size_t>(k - 1)); }

 private:
  std::vector<double> values_;
};

/// Witness that |C_k| <= (k!)^{1+nu} delta^{-(k-2)} for 3 <= k <= max_order.
/// delta is +inf when every checked cumulant of order >= 3 vanishes.
struct DeltaCertificate {
  double delta = std::numeric_limits<double>::infinity();
  int nu = 1;
  int max_order = 0;

  bool holds_for(const CumulantVector& cumulants, double rel_tol = 1e-12) const;
};

CumulantVector moments_to_cumulants(const MomentVector& moments);
std::vector<Rational> moments_to_cumulants(std::span<const Rational> moments);

MomentVector cumulants_to_moments(const CumulantVector& cumulants);
std::vector<Rational> cumulants_to_moments(std::span<const Rational> cumulants);

/// Cumulants of a sum of independent variables.
CumulantVector sum_independent_cumulants(std::span<const CumulantVector> parts);

/// Largest delta for which the factorial-geometric cumulant bound holds with
/// nu = 1. Input must be standardized (C_1 = 0, C_2 = 1 within `tol`).
DeltaCertificate statulevicius_delta(const CumulantVector& cumulants, double tol = 1e-9);

/// A moment bound |alpha_k| <= (k!)^{1+nu} B^{k-2} yields delta = 1 / (2B).
DeltaCertificate bernstein_to_delta(double bernstein_constant, int nu = 1);

/// Admissible deviation range min(sqrt(k_tilde), delta^{1/3}) / 12.
double tail_validity_range(double delta, double k_tilde);

}  // namespace ldgof
