#include "ldgof/exact_oracle.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>

#include "ldgof/error.hpp"

namespace ldgof {

std::uint64_t composition_count(std::uint64_t n, std::size_t cells) {
  if (cells == 0) return 0;
  unsigned __int128 r = 1;
  const auto limit = static_cast<unsigned __int128>(std::numeric_limits<std::uint64_t>::max());
  for (std::uint64_t i = 1; i < cells; ++i) {
    r = r * (n + i) / i;  // exact: r is C(n + i, i) after this step
    if (r > limit) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(r);
}

namespace {

void check_guard(std::uint64_t n, const ProbabilityVector& probs) {
  const auto count = composition_count(n, probs.size());
  if (count > kEnumerationGuard) {
    throw TooLargeError("enumeration of " + std::to_string(count) + " outcomes exceeds the guard of " +
                        std::to_string(kEnumerationGuard));
  }
}

// Visits every composition of n into `cells` parts, first cell descending.
template <class Visit>
void for_each_composition(std::uint64_t n, std::size_t cells, Visit&& visit) {
  std::vector<std::uint64_t> counts(cells, 0);
  auto recurse = [&](auto&& self, std::size_t m, std::uint64_t remaining) -> void {
    if (m + 1 == cells) {
      counts[m] = remaining;
      visit(static_cast<const std::vector<std::uint64_t>&>(counts));
      return;
    }
    for (std::uint64_t v = remaining + 1; v-- > 0;) {
      counts[m] = v;
      self(self, m + 1, remaining - v);
    }
  };
  recurse(recurse, 0, n);
}

long double evaluate_statistic(const CellFunction& cells, const std::vector<std::uint64_t>& counts) {
  long double r = 0.0L;
  for (std::size_t m = 0; m < counts.size(); ++m) r += static_cast<long double>(cells(m, counts[m]));
  return r;
}

long double int_power(long double base, int k) {
  long double r = 1.0L;
  for (int i = 0; i < k; ++i) r *= base;
  return r;
}

// Multinomial probabilities in extended precision, preferring the exact
// rational table when one is available.
std::vector<std::pair<std::vector<std::uint64_t>, long double>> multinomial_weights(
    std::uint64_t n, const ProbabilityVector& probs) {
  std::vector<std::pair<std::vector<std::uint64_t>, long double>> out;
  if (probs.exact()) {
    auto table = enumerate_multinomial_exact(n, probs);
    out.reserve(table.entries.size());
    for (auto& e : table.entries) out.emplace_back(std::move(e.counts), to_long_double(e.probability));
  } else {
    auto table = enumerate_multinomial(n, probs);
    out.reserve(table.entries.size());
    for (auto& e : table.entries) out.emplace_back(std::move(e.counts), e.probability);
  }
  return out;
}

void check_moment_order(int k) {
  if (k < 0 || k > 8) throw RangeError("moment order must lie in [0, 8]");
}

}  // namespace

FloatOutcomeTable enumerate_multinomial(std::uint64_t n, const ProbabilityVector& probs) {
  check_guard(n, probs);
  std::vector<long double> log_p;
  log_p.reserve(probs.size());
  for (double p : probs.values()) log_p.push_back(std::log(static_cast<long double>(p)));
  const long double log_n_factorial = std::lgamma(static_cast<long double>(n) + 1.0L);

  FloatOutcomeTable table{n, probs.size(), {}};
  table.entries.reserve(composition_count(n, probs.size()));
  for_each_composition(n, probs.size(), [&](const std::vector<std::uint64_t>& counts) {
    long double log_w = log_n_factorial;
    for (std::size_t m = 0; m < counts.size(); ++m) {
      const auto c = static_cast<long double>(counts[m]);
      log_w += c * log_p[m] - std::lgamma(c + 1.0L);
    }
    table.entries.push_back({counts, std::exp(log_w)});
  });
  return table;
}

ExactOutcomeTable enumerate_multinomial_exact(std::uint64_t n, const ProbabilityVector& probs) {
  if (!probs.exact()) throw ContractError("exact enumeration needs rational cell probabilities");
  check_guard(n, probs);
  const auto& p = *probs.exact();
  // powers[m][j] = p_m^j
  std::vector<std::vector<Rational>> powers(p.size());
  for (std::size_t m = 0; m < p.size(); ++m) {
    powers[m].reserve(n + 1);
    powers[m].emplace_back(1);
    for (std::uint64_t j = 1; j <= n; ++j) powers[m].push_back(powers[m].back() * p[m]);
  }
  std::vector<BigInt> factorials;
  factorials.reserve(n + 1);
  factorials.emplace_back(1);
  for (std::uint64_t j = 1; j <= n; ++j) factorials.push_back(factorials.back() * j);

  ExactOutcomeTable table{n, p.size(), {}};
  table.entries.reserve(composition_count(n, p.size()));
  for_each_composition(n, p.size(), [&](const std::vector<std::uint64_t>& counts) {
    BigInt denom = 1;
    Rational w = 1;
    for (std::size_t m = 0; m < counts.size(); ++m) {
      denom *= factorials[counts[m]];
      w *= powers[m][counts[m]];
    }
    w *= Rational(factorials[n], denom);
    table.entries.push_back({counts, std::move(w)});
  });
  return table;
}

Rational exact_tail_rational(std::uint64_t n, const ProbabilityVector& probs, StatisticKind kind,
                             double threshold) {
  const auto table = enumerate_multinomial_exact(n, probs);
  Rational total = 0;
  for (const auto& e : table.entries) {
    if (statistic(kind, CountsVector(e.counts), probs) >= threshold) total += e.probability;
  }
  return total;
}

double exact_tail(std::uint64_t n, const ProbabilityVector& probs, StatisticKind kind, double threshold) {
  if (n == 0) throw RangeError("sample size must be positive");
  if (probs.exact()) return to_double(exact_tail_rational(n, probs, kind, threshold));
  const auto table = enumerate_multinomial(n, probs);
  CompensatedSum<long double> total;
  for (const auto& e : table.entries) {
    if (statistic(kind, CountsVector(e.counts), probs) >= threshold) total += e.probability;
  }
  return static_cast<double>(total.value());
}

double exact_moment_multinomial(std::uint64_t n, const ProbabilityVector& probs, const CellFunction& cells,
                                int k) {
  check_moment_order(k);
  CompensatedSum<long double> sum;
  for (const auto& [counts, w] : multinomial_weights(n, probs)) {
    sum += w * int_power(evaluate_statistic(cells, counts), k);
  }
  return static_cast<double>(sum.value());
}

double conditioned_poisson_moment(std::uint64_t n, const ProbabilityVector& probs, const CellFunction& cells,
                                  int k) {
  check_moment_order(k);
  check_guard(n, probs);
  const auto nl = static_cast<long double>(n);
  std::vector<long double> rate;
  std::vector<long double> log_rate;
  for (double p : probs.values()) {
    rate.push_back(nl * static_cast<long double>(p));
    log_rate.push_back(std::log(rate.back()));
  }
  // log P{sum xi_m = n} for sum xi_m ~ Poisson(n)
  const long double log_total = -nl + nl * std::log(nl) - std::lgamma(nl + 1.0L);
  CompensatedSum<long double> sum;
  for_each_composition(n, probs.size(), [&](const std::vector<std::uint64_t>& counts) {
    long double log_w = -log_total;
    for (std::size_t m = 0; m < counts.size(); ++m) {
      const auto c = static_cast<long double>(counts[m]);
      log_w += -rate[m] + c * log_rate[m] - std::lgamma(c + 1.0L);
    }
    sum += std::exp(log_w) * int_power(evaluate_statistic(cells, counts), k);
  });
  return static_cast<double>(sum.value());
}

CumulantVector exact_cumulants(std::uint64_t n, const ProbabilityVector& probs, const CellFunction& cells,
                               int max_order, CumulantSide side, double mass_tol) {
  if (max_order < 2 || max_order > 6) throw RangeError("cumulant order must lie in [2, 6]");
  const auto order = static_cast<std::size_t>(max_order);

  // Central moments (alpha_1 = 0) share C_k, k >= 2, with the raw law.
  auto cumulants_of = [&](long double mean, const std::vector<long double>& central) {
    std::vector<double> alpha(order, 0.0);
    for (std::size_t k = 2; k <= order; ++k) alpha[k - 1] = static_cast<double>(central[k]);
    const CumulantVector c = moments_to_cumulants(MomentVector(std::move(alpha)));
    std::vector<double> out(c.values().begin(), c.values().end());
    out[0] = static_cast<double>(mean);
    return out;
  };

  if (side == CumulantSide::multinomial) {
    const auto weights = multinomial_weights(n, probs);
    std::vector<long double> values;
    values.reserve(weights.size());
    CompensatedSum<long double> mean_sum;
    for (const auto& [counts, w] : weights) {
      values.push_back(evaluate_statistic(cells, counts));
      mean_sum += w * values.back();
    }
    const long double mean = mean_sum.value();
    std::vector<CompensatedSum<long double>> sums(order + 1);
    for (std::size_t i = 0; i < weights.size(); ++i) {
      const long double d = values[i] - mean;
      long double dp = weights[i].second;
      for (std::size_t k = 1; k <= order; ++k) {
        dp *= d;
        sums[k] += dp;
      }
    }
    std::vector<long double> central(order + 1, 0.0L);
    for (std::size_t k = 1; k <= order; ++k) central[k] = sums[k].value();
    return CumulantVector(cumulants_of(mean, central));
  }

  if (n == 0) throw RangeError("sample size must be positive");
  std::vector<CumulantVector> parts;
  parts.reserve(probs.size());
  for (std::size_t m = 0; m < probs.size(); ++m) {
    const double lambda = static_cast<double>(n) * probs[m];
    CompensatedSum<long double> mean_sum;
    poisson_sweep(lambda, mass_tol, [&](std::uint64_t j, long double pmf) {
      const long double term = static_cast<long double>(cells(m, j)) * pmf;
      mean_sum += term;
      return term;
    });
    const long double mean = mean_sum.value();
    std::vector<CompensatedSum<long double>> sums(order + 1);
    poisson_sweep(lambda, mass_tol, [&](std::uint64_t j, long double pmf) {
      const long double d = static_cast<long double>(cells(m, j)) - mean;
      long double dp = pmf;
      long double largest = 0.0L;
      for (std::size_t k = 1; k <= order; ++k) {
        dp *= d;
        sums[k] += dp;
        largest = std::max(largest, std::abs(dp));
      }
      return largest;
    });
    std::vector<long double> central(order + 1, 0.0L);
    for (std::size_t k = 1; k <= order; ++k) central[k] = sums[k].value();
    parts.emplace_back(cumulants_of(mean, central));
  }
  return sum_independent_cumulants(parts);
}

NuResult nu_n(std::uint64_t n) {
  if (n == 0) throw RangeError("nu_n needs n >= 1");
  const auto nl = static_cast<long double>(n);
  const long double log_value = std::lgamma(nl + 1.0L) + nl - nl * std::log(nl) -
                                std::log(2.0L * std::numbers::pi_v<long double>) - 0.5L * std::log(nl);
  const long double value = std::exp(log_value);
  const long double limit = 1.0L / std::sqrt(2.0L * std::numbers::pi_v<long double>);
  return {static_cast<double>(value), static_cast<double>(value - limit)};
}

namespace {

template <class Weight, class WriteWeight>
void write_table(std::ostream& out, const OutcomeTable<Weight>& table, std::string_view weight_header,
                 WriteWeight&& write_weight) {
  for (std::size_t m = 1; m <= table.cells; ++m) out << "eta_" << m << ',';
  out << weight_header << '\n';
  for (const auto& e : table.entries) {
    for (auto c : e.counts) out << c << ',';
    write_weight(e.probability);
    out << '\n';
  }
}

}  // namespace

void write_outcome_csv(std::ostream& out, const FloatOutcomeTable& table) {
  write_table(out, table, "prob", [&](long double w) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17Lg", w);
    out << buf;
  });
}

void write_outcome_csv(std::ostream& out, const ExactOutcomeTable& table) {
  write_table(out, table, "prob_num,prob_den", [&](const Rational& w) {
    out << numerator(w) << ',' << denominator(w);
  });
}

}  // namespace ldgof
