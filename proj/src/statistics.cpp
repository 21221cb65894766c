#include "ldgof/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ldgof/error.hpp"

namespace ldgof {

std::string_view to_string(StatisticKind kind) {
  return kind == StatisticKind::chi_square ? "chi2" : "lr";
}

StatisticKind parse_statistic_kind(std::string_view text) {
  if (text == "chi2") return StatisticKind::chi_square;
  if (text == "lr") return StatisticKind::likelihood_ratio;
  throw ParseError("unknown statistic '" + std::string(text) + "' (expected chi2 or lr)");
}

std::string_view to_string(Centering centering) {
  return centering == Centering::cells ? "N" : "N-1";
}

Centering parse_centering(std::string_view text) {
  if (text == "N") return Centering::cells;
  if (text == "N-1") return Centering::cells_minus_one;
  throw ParseError("unknown centering '" + std::string(text) + "' (expected N or N-1)");
}

// ---------------------------------------------------------------------------
// ProbabilityVector

ProbabilityVector ProbabilityVector::from_doubles(std::vector<double> probabilities) {
  if (probabilities.empty()) throw ShapeError("probability vector is empty");
  CompensatedSum<double> total;
  for (double p : probabilities) {
    if (!(p > 0.0) || !std::isfinite(p)) {
      throw RangeError("cell probabilities must be positive and finite");
    }
    total += p;
  }
  const double sum = total.value();
  if (std::abs(sum - 1.0) > 1e-12) {
    throw RangeError("cell probabilities sum to " + std::to_string(sum) + ", not 1");
  }
  ProbabilityVector out;
  out.values_ = std::move(probabilities);
  for (double& p : out.values_) p /= sum;
  out.finish();
  return out;
}

ProbabilityVector ProbabilityVector::from_rationals(std::vector<Rational> probabilities) {
  if (probabilities.empty()) throw ShapeError("probability vector is empty");
  Rational sum = 0;
  for (const auto& p : probabilities) {
    if (p <= 0) throw RangeError("cell probabilities must be positive");
    sum += p;
  }
  if (abs(sum - 1) > Rational(1, 1'000'000'000'000)) {
    throw RangeError("cell probabilities sum to " + std::to_string(to_double(sum)) + ", not 1");
  }
  ProbabilityVector out;
  out.values_.reserve(probabilities.size());
  for (auto& p : probabilities) {
    p /= sum;
    out.values_.push_back(to_double(p));
  }
  out.exact_ = std::move(probabilities);
  out.finish();
  return out;
}

ProbabilityVector ProbabilityVector::equiprobable(std::size_t cells) {
  if (cells == 0) throw ShapeError("need at least one cell");
  return from_rationals(std::vector<Rational>(cells, Rational(1, cells)));
}

void ProbabilityVector::finish() {
  const auto [lo, hi] = std::minmax_element(values_.begin(), values_.end());
  min_ = *lo;
  max_ = *hi;
}

CountsVector::CountsVector(std::vector<std::uint64_t> counts) : counts_(std::move(counts)) {
  if (counts_.empty()) throw ShapeError("counts vector is empty");
  for (auto c : counts_) n_ += c;
}

// ---------------------------------------------------------------------------
// Statistics

namespace {

void check_shapes(const CountsVector& counts, const ProbabilityVector& probs) {
  if (counts.size() != probs.size()) {
    throw ShapeError("counts have " + std::to_string(counts.size()) + " cells but probabilities have " +
                     std::to_string(probs.size()));
  }
  if (counts.sample_size() == 0) throw RangeError("sample size must be at least 1");
}

void check_sample_size(std::uint64_t n) {
  if (n == 0) throw RangeError("sample size must be positive");
}

double inverse_expected_sum(const ProbabilityVector& probs, std::uint64_t n) {
  CompensatedSum<double> s;
  for (double p : probs.values()) s += 1.0 / (static_cast<double>(n) * p);
  return s.value();
}

double nabla_for(const ProbabilityVector& probs, std::uint64_t n) {
  return std::max(1.0, 1.0 / (static_cast<double>(n) * probs.min()));
}

}  // namespace

CellFunction chi_square_cells(const ProbabilityVector& probs, std::uint64_t n) {
  std::vector<double> expected;
  expected.reserve(probs.size());
  for (double p : probs.values()) expected.push_back(static_cast<double>(n) * p);
  return [expected = std::move(expected)](std::size_t cell, std::uint64_t count) {
    const double e = expected[cell];
    const double d = static_cast<double>(count) - e;
    return d * d / e;
  };
}

CellFunction likelihood_ratio_cells(const ProbabilityVector& probs, std::uint64_t n) {
  std::vector<double> expected;
  expected.reserve(probs.size());
  for (double p : probs.values()) expected.push_back(static_cast<double>(n) * p);
  return [expected = std::move(expected)](std::size_t cell, std::uint64_t count) {
    if (count == 0) return 0.0;
    const double x = static_cast<double>(count);
    return x * std::log(x / expected[cell]);
  };
}

double chi_square_statistic(const CountsVector& counts, const ProbabilityVector& probs) {
  check_shapes(counts, probs);
  const double n = static_cast<double>(counts.sample_size());
  CompensatedSum<double> sum;
  for (std::size_t m = 0; m < counts.size(); ++m) {
    const double e = n * probs[m];
    const double d = static_cast<double>(counts[m]) - e;
    sum += d * d / e;
  }
  return sum.value();
}

double log_likelihood_ratio(const CountsVector& counts, const ProbabilityVector& probs) {
  check_shapes(counts, probs);
  const double n = static_cast<double>(counts.sample_size());
  CompensatedSum<double> sum;
  for (std::size_t m = 0; m < counts.size(); ++m) {
    if (counts[m] == 0) continue;  // 0 ln 0 = 0
    const double x = static_cast<double>(counts[m]);
    sum += x * std::log(x / (n * probs[m]));
  }
  return 2.0 * sum.value();
}

double statistic(StatisticKind kind, const CountsVector& counts, const ProbabilityVector& probs) {
  return kind == StatisticKind::chi_square ? chi_square_statistic(counts, probs)
                                           : log_likelihood_ratio(counts, probs);
}

// ---------------------------------------------------------------------------
// Profiles

StatisticProfile chi_square_profile(const ProbabilityVector& probs, std::uint64_t n) {
  check_sample_size(n);
  const double cells = static_cast<double>(probs.size());
  StatisticProfile profile;
  profile.rate = static_cast<double>(n) / cells;
  profile.mean = cells;
  profile.raw_variance = inverse_expected_sum(probs, n) + 2.0 * cells;
  profile.variance = profile.raw_variance - cells / profile.rate;
  profile.slope = 1.0 / profile.rate;
  profile.nabla = nabla_for(probs, n);
  return profile;
}

StatisticProfile generic_profile(const CellFunction& cells, const ProbabilityVector& probs,
                                 std::uint64_t n, double mass_tol) {
  check_sample_size(n);
  CompensatedSum<long double> mean_sum;
  CompensatedSum<long double> cov_sum;
  CompensatedSum<long double> var_sum;
  for (std::size_t m = 0; m < probs.size(); ++m) {
    const double lambda = static_cast<double>(n) * probs[m];
    CompensatedSum<long double> cell_mean;
    poisson_sweep(lambda, mass_tol, [&](std::uint64_t j, long double pmf) {
      const long double term = static_cast<long double>(cells(m, j)) * pmf;
      cell_mean += term;
      return term;
    });
    const long double mu = cell_mean.value();
    CompensatedSum<long double> cell_var;
    CompensatedSum<long double> cell_cov;
    poisson_sweep(lambda, mass_tol, [&](std::uint64_t j, long double pmf) {
      const long double d = static_cast<long double>(cells(m, j)) - mu;
      const long double v = d * d * pmf;
      const long double c = d * (static_cast<long double>(j) - lambda) * pmf;
      cell_var += v;
      cell_cov += c;
      return std::max(std::abs(v), std::abs(c));
    });
    mean_sum += mu;
    var_sum += cell_var.value();
    cov_sum += cell_cov.value();
  }
  StatisticProfile profile;
  profile.rate = static_cast<double>(n) / static_cast<double>(probs.size());
  profile.mean = static_cast<double>(mean_sum.value());
  const long double slope = cov_sum.value() / static_cast<long double>(n);
  profile.slope = static_cast<double>(slope);
  profile.raw_variance = static_cast<double>(var_sum.value());
  profile.variance = static_cast<double>(var_sum.value() - static_cast<long double>(n) * slope * slope);
  profile.nabla = nabla_for(probs, n);
  return profile;
}

StatisticProfile lr_profile_asymptotic(const ProbabilityVector& probs, std::uint64_t n) {
  check_sample_size(n);
  const double cells = static_cast<double>(probs.size());
  const double nd = static_cast<double>(n);
  const double s = inverse_expected_sum(probs, n);
  StatisticProfile profile;
  profile.rate = nd / cells;
  profile.mean = cells / 2.0 + s / 12.0;
  profile.slope = 1.0 - s / (12.0 * nd);
  profile.variance = cells / 2.0 + s / 6.0;
  profile.raw_variance = profile.variance + nd * profile.slope * profile.slope;
  profile.nabla = nabla_for(probs, n);
  profile.low_rate_warning = profile.rate < 5.0;
  return profile;
}

StatisticProfile profile_for(StatisticKind kind, const ProbabilityVector& probs, std::uint64_t n) {
  return kind == StatisticKind::chi_square ? chi_square_profile(probs, n)
                                           : lr_profile_asymptotic(probs, n);
}

double standardize(double t, StatisticKind kind, const StatisticProfile& profile, std::size_t cells,
                   Centering centering) {
  if (cells == 0) throw RangeError("need at least one cell");
  const double nc = static_cast<double>(cells);
  if (kind == StatisticKind::likelihood_ratio) return (t - nc) / std::sqrt(2.0 * nc);
  if (!(profile.variance > 0.0)) throw DegenerateProfileError("chi-square profile has zero variance");
  const double centre = centering == Centering::cells ? nc : nc - 1.0;
  return (t - centre) / std::sqrt(profile.variance);
}

}  // namespace ldgof
