#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "ldgof/error.hpp"

namespace ldgof {

inline constexpr double kDefaultMassTolerance = 1e-15;
inline constexpr std::uint64_t kPoissonTermGuard = 10'000'000;

/// Walks the Poisson(lambda) support j = 0, 1, 2, ... and hands each point
/// and its probability to `visit`, which returns the magnitude of whatever it
/// accumulated for that point.
///
/// The walk stops once the visited pmf mass reaches 1 - mass_tol and the last
/// ten points each contributed less than mass_tol times the running absolute
/// sum of contributions. Heavy polynomial weights keep the walk going well past
/// the bulk of the distribution. Returns the number of points visited.
template <class Visit>
std::uint64_t poisson_sweep(double lambda, double mass_tol, Visit&& visit) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw RangeError("Poisson rate must be positive and finite");
  }
  if (!(mass_tol > 0.0) || mass_tol > 1e-8) {
    throw RangeError("mass tolerance must lie in (0, 1e-8]");
  }
  const long double log_rate = std::log(static_cast<long double>(lambda));
  long double log_pmf = -static_cast<long double>(lambda);
  long double mass = 0.0L;
  long double abs_total = 0.0L;
  int quiet_run = 0;
  for (std::uint64_t j = 0; j < kPoissonTermGuard; ++j) {
    if (j > 0) log_pmf += log_rate - std::log(static_cast<long double>(j));
    const long double pmf = std::exp(log_pmf);
    mass += pmf;
    const long double contribution = std::abs(static_cast<long double>(visit(j, pmf)));
    abs_total += contribution;
    if (contribution < static_cast<long double>(mass_tol) * abs_total) {
      ++quiet_run;
    } else {
      quiet_run = 0;
    }
    if (mass >= 1.0L - static_cast<long double>(mass_tol) && quiet_run >= 10) return j + 1;
  }
  throw OracleFailure("Poisson summation did not converge within " +
                      std::to_string(kPoissonTermGuard) + " terms (lambda=" +
                      std::to_string(lambda) + ")");
}

}  // namespace ldgof
