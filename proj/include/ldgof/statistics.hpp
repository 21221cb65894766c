#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ldgof/numeric.hpp"
#include "ldgof/poisson_sum.hpp"

namespace ldgof {

enum class StatisticKind { chi_square, likelihood_ratio };

std::string_view to_string(StatisticKind kind);
StatisticKind parse_statistic_kind(std::string_view text);

/// Where the chi-square statistic is centred before scaling. `cells` (N) is
/// the Poissonized mean and the default; `cells_minus_one` (N - 1) is the
/// exact multinomial mean.
enum class Centering { cells, cells_minus_one };

std::string_view to_string(Centering centering);
Centering parse_centering(std::string_view text);

/// Cell probabilities p_1 .. p_N of a multinomial scheme.
///
/// Input that sums to one within 1e-12 is accepted and renormalized. When
/// built from rationals the exact values are kept alongside the doubles and
/// must sum to exactly one after renormalization.
class ProbabilityVector {
 public:
  static ProbabilityVector from_doubles(std::vector<double> probabilities);
  static ProbabilityVector from_rationals(std::vector<Rational> probabilities);
  static ProbabilityVector equiprobable(std::size_t cells);

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t m) const { return values_[m]; }
  std::span<const double> values() const { return values_; }
  const std::optional<std::vector<Rational>>& exact() const { return exact_; }

  double min() const { return min_; }
  double max() const { return max_; }

 private:
  ProbabilityVector() = default;
  void finish();

  std::vector<double> values_;
  std::optional<std::vector<Rational>> exact_;
  double min_ = 0.0;
  double max_ = 0.0;
};

/// Observed cell counts eta_1 .. eta_N; the sample size is their sum.
class CountsVector {
 public:
  explicit CountsVector(std::vector<std::uint64_t> counts);

  std::size_t size() const { return counts_.size(); }
  std::uint64_t operator[](std::size_t m) const { return counts_[m]; }
  std::span<const std::uint64_t> values() const { return counts_; }
  std::uint64_t sample_size() const { return n_; }

  friend bool operator==(const CountsVector&, const CountsVector&) = default;

 private:
  std::vector<std::uint64_t> counts_;
  std::uint64_t n_ = 0;
};

/// Characteristics of a decomposable statistic sum_m h_m under independent
/// Poisson(n p_m) cell counts.
struct StatisticProfile {
  double mean = 0.0;          // A_N = sum E h_m(xi_m)
  double slope = 0.0;         // gamma_n = n^-1 sum cov(h_m(xi_m), xi_m)
  double raw_variance = 0.0;  // sum Var h_m(xi_m)
  double variance = 0.0;      // raw_variance - n slope^2
  double rate = 0.0;          // lambda_n = n / N
  double nabla = 0.0;         // max(1, 1 / (n p_min))
  bool low_rate_warning = false;
};

/// h_m evaluated at a cell count. `cell` is the zero-based cell index.
using CellFunction = std::function<double(std::size_t cell, std::uint64_t count)>;

CellFunction chi_square_cells(const ProbabilityVector& probs, std::uint64_t n);
CellFunction likelihood_ratio_cells(const ProbabilityVector& probs, std::uint64_t n);

double chi_square_statistic(const CountsVector& counts, const ProbabilityVector& probs);
double log_likelihood_ratio(const CountsVector& counts, const ProbabilityVector& probs);
double statistic(StatisticKind kind, const CountsVector& counts, const ProbabilityVector& probs);

StatisticProfile chi_square_profile(const ProbabilityVector& probs, std::uint64_t n);

/// Numeric profile of an arbitrary decomposable statistic, by truncated
/// Poisson summation in every cell.
StatisticProfile generic_profile(const CellFunction& cells, const ProbabilityVector& probs,
                                 std::uint64_t n, double mass_tol = kDefaultMassTolerance);

/// First-order closed forms for h_m(x) = x ln(x / n p_m), with s = sum 1/(n p_m):
///   A_N = N/2 + s/12,  gamma_n = 1 - s/(12 n),  sigma_N^2 = N/2 + s/6.
/// The variance correction is positive: per cell Var(h - gamma (x - np)) is
/// 1/2 + 1/(6 np) + O((np)^-2). Sets low_rate_warning when n / N < 5.
StatisticProfile lr_profile_asymptotic(const ProbabilityVector& probs, std::uint64_t n);

StatisticProfile profile_for(StatisticKind kind, const ProbabilityVector& probs, std::uint64_t n);

/// Maps a statistic value to its standardized deviation: (t - centre) / sigma_N
/// for chi-square and (t - N) / sqrt(2N) for the likelihood ratio.
double standardize(double t, StatisticKind kind, const StatisticProfile& profile, std::size_t cells,
                   Centering centering = Centering::cells);

}  // namespace ldgof
