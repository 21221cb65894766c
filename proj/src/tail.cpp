#include "ldgof/tail.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "ldgof/cumulants.hpp"
#include "ldgof/error.hpp"

namespace ldgof {

long double normal_tail_extended(double x) {
  return 0.5L * std::erfc(static_cast<long double>(x) / std::sqrt(2.0L));
}

double normal_tail(double x) { return static_cast<double>(normal_tail_extended(x)); }

double cumulant_order_cap(std::uint64_t n, double p_max, double a, double b) {
  if (n == 0) throw RangeError("sample size must be positive");
  if (!(p_max > 0.0 && p_max <= 1.0)) throw RangeError("p_max must lie in (0, 1]");
  const double a_bar = std::max(1.0, a);
  const double base = std::pow(static_cast<double>(n), 1.0 - b) * std::pow(p_max, -b);
  return std::pow(base, 1.0 / (a_bar + 1.0));
}

namespace {

std::string ratio_status(double ratio) {
  if (ratio >= 1.0) return "outside zone";
  if (ratio >= kNearBoundaryRatio) return "near boundary";
  return "pass";
}

std::string pass_fail(bool ok) { return ok ? "pass" : "fail"; }

}  // namespace

ZoneDiagnostics zone_diagnostics(const ProbabilityVector& probs, std::uint64_t n, double x,
                                 StatisticKind kind, const ZoneConstants& constants) {
  if (!(x >= 0.0)) throw RangeError("zone diagnostics need a non-negative deviation");
  if (n == 0) throw RangeError("sample size must be positive");
  const double cells = static_cast<double>(probs.size());
  const double rate = static_cast<double>(n) / cells;
  const double spread_lo = cells * probs.min();
  const double spread_hi = cells * probs.max();
  const double cells_sixth = std::pow(cells, 1.0 / 6.0);
  const double pmax_quarter = std::pow(probs.max(), -0.25);

  ZoneDiagnostics zone;
  if (kind == StatisticKind::chi_square) {
    const StatisticProfile profile = chi_square_profile(probs, n);
    const double sigma3 = std::pow(profile.variance, 1.5);
    zone.caps["variance_ratio"] = std::cbrt(sigma3 / (profile.raw_variance * profile.nabla));
    zone.caps["sample_size"] = std::pow(static_cast<double>(n), 1.0 / 6.0);
    zone.caps["max_probability"] = pmax_quarter;
    zone.k_tilde = std::min(cumulant_order_cap(n, probs.max(), 1.0, 1.0),
                            cumulant_order_cap(n, probs.max(), 2.0, 0.0));
    zone.delta = sigma3 / (8192.0 * profile.nabla * profile.raw_variance);
    zone.flags["bounded_spread"] = pass_fail(constants.c1 <= spread_lo &&
                                             spread_hi <= constants.c2 * std::cbrt(cells));
    zone.flags["rate_above_half"] = pass_fail(rate > 0.5);
    zone.caps["near_uniform"] = cells_sixth * std::min(1.0, std::pow(rate, 2.0 / 3.0));
  } else {
    zone.caps["cell_count"] = cells_sixth;
    zone.caps["max_probability"] = pmax_quarter;
    zone.k_tilde = cumulant_order_cap(n, probs.max(), 1.0, 1.0);
    zone.delta = std::sqrt(cells) / 4096.0;
    zone.flags["bounded_spread"] = pass_fail(constants.c3 <= spread_lo &&
                                             spread_hi <= constants.c4 * rate * rate * rate);
    zone.flags["rate_at_least_five"] = pass_fail(rate >= 5.0);
  }

  double worst = 0.0;
  for (const auto& [name, cap] : zone.caps) {
    const double ratio = x / cap;
    zone.cap_ratios[name] = ratio;
    zone.flags[name] = ratio_status(ratio);
    // The near-uniform cap only governs near-equiprobable schemes; it does not
    // enter the overall zone verdict.
    if (name != "near_uniform") worst = std::max(worst, ratio);
  }
  zone.flags["zone"] = ratio_status(worst);

  if (zone.k_tilde >= 3.0) {
    zone.x_max = tail_validity_range(zone.delta, zone.k_tilde);
    zone.flags["cumulant_order"] = "pass";
  } else {
    zone.x_max = 0.0;
    zone.flags["cumulant_order"] = "fail";
  }
  return zone;
}

TailReport tail_pvalue(double t, StatisticKind kind, const ProbabilityVector& probs, std::uint64_t n,
                       const TailOptions& options) {
  if (kind == StatisticKind::chi_square && t < 0.0) {
    throw RangeError("chi-square statistic cannot be negative");
  }
  TailReport report;
  report.kind = kind;
  report.statistic = t;
  report.profile = profile_for(kind, probs, n);
  report.x = standardize(t, kind, report.profile, probs.size(), options.centering);
  report.p_upper = normal_tail(report.x);
  report.p_lower = normal_tail(-report.x);
  report.zone = zone_diagnostics(probs, n, std::abs(report.x), kind, options.constants);
  if (report.profile.low_rate_warning) {
    report.warnings.emplace_back("average cell count below 5: likelihood-ratio expansion is degraded");
  }
  return report;
}

nlohmann::json probability_json(double p, long double extended) {
  if (p >= 1e-300) return p;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15Le", extended);
  return std::string(buf);
}

nlohmann::json to_json(const StatisticProfile& profile) {
  return {{"mean", profile.mean},
          {"slope", profile.slope},
          {"raw_variance", profile.raw_variance},
          {"variance", profile.variance},
          {"rate", profile.rate},
          {"nabla", profile.nabla},
          {"low_rate_warning", profile.low_rate_warning}};
}

nlohmann::json to_json(const ZoneDiagnostics& zone) {
  return {{"caps", zone.caps},
          {"cap_ratios", zone.cap_ratios},
          {"flags", zone.flags},
          {"k_tilde", zone.k_tilde},
          {"delta", zone.delta},
          {"x_max_assertion2", zone.x_max}};
}

nlohmann::json to_json(const TailReport& report) {
  nlohmann::json j = to_json(report.zone);
  j["kind"] = std::string(to_string(report.kind));
  j["statistic"] = report.statistic;
  j["x"] = report.x;
  j["p_upper"] = probability_json(report.p_upper, normal_tail_extended(report.x));
  j["p_lower"] = probability_json(report.p_lower, normal_tail_extended(-report.x));
  j["profile"] = to_json(report.profile);
  j["warnings"] = report.warnings;
  return j;
}

}  // namespace ldgof
