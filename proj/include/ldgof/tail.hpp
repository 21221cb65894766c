#pragma once

#include <cstdint>
#include <map>
#include <string>

#include <json.hpp>

#include "ldgof/statistics.hpp"

namespace ldgof {

/// 1 - Phi(x), the upper standard normal tail. Relative accuracy ~1e-15 for
/// |x| <= 8; values underflow to zero past x ~ 37.5.
double normal_tail(double x);

/// Same quantity in extended precision; representable down to ~1e-4900.
long double normal_tail_extended(double x);

/// Unspecified universal constants of the bounded-spread conditions.
/// c1 <= N p_min <= N p_max <= c2 N^{1/3} (chi-square) and
/// c3 <= N p_min <= N p_max <= c4 lambda_n^3 (likelihood ratio).
struct ZoneConstants {
  double c1 = 1.0;
  double c2 = 1.0;
  double c3 = 1.0;
  double c4 = 1.0;
};

inline constexpr double kNearBoundaryRatio = 0.5;

/// Finite-sample view of the asymptotic validity zone for a deviation x.
/// Caps are the quantities x must be small relative to; cap_ratios = x / cap.
/// Flags are "pass", "near boundary" (ratio >= 0.5) or "outside zone"
/// (ratio >= 1) for caps, and "pass"/"fail" for the spread conditions.
struct ZoneDiagnostics {
  std::map<std::string, double> caps;
  std::map<std::string, double> cap_ratios;
  std::map<std::string, std::string> flags;
  double k_tilde = 0.0;
  double delta = 0.0;
  double x_max = 0.0;
};

/// K_n(a, b) = (n^{1-b} p_max^{-b})^{1 / (max(1, a) + 1)}: how many cumulants
/// of the multinomial statistic track those of its Poissonized version.
double cumulant_order_cap(std::uint64_t n, double p_max, double a, double b);

ZoneDiagnostics zone_diagnostics(const ProbabilityVector& probs, std::uint64_t n, double x,
                                 StatisticKind kind, const ZoneConstants& constants = {});

struct TailOptions {
  Centering centering = Centering::cells;
  ZoneConstants constants;
};

struct TailReport {
  StatisticKind kind = StatisticKind::chi_square;
  double statistic = 0.0;
  double x = 0.0;
  double p_upper = 0.0;  // ~ P{T >= t}
  double p_lower = 0.0;  // ~ P{T <= t}
  StatisticProfile profile;
  ZoneDiagnostics zone;
  std::vector<std::string> warnings;
};

/// Normal-tail approximation of P{T >= t} and P{T <= t}. Zone diagnostics
/// are evaluated at |x|, the deviation of whichever tail t lies in.
TailReport tail_pvalue(double t, StatisticKind kind, const ProbabilityVector& probs, std::uint64_t n,
                       const TailOptions& options = {});

nlohmann::json to_json(const StatisticProfile& profile);
nlohmann::json to_json(const ZoneDiagnostics& zone);
nlohmann::json to_json(const TailReport& report);

/// A probability as JSON: a number, or a string in scientific notation once
/// it falls below 1e-300.
nlohmann::json probability_json(double p, long double extended);

}  // namespace ldgof
