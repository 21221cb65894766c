#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "ldgof/cumulants.hpp"
#include "ldgof/numeric.hpp"
#include "ldgof/statistics.hpp"

namespace ldgof {

inline constexpr std::uint64_t kEnumerationGuard = 10'000'000;

template <class Weight>
struct Outcome {
  std::vector<std::uint64_t> counts;
  Weight probability;
};

/// Every outcome of a multinomial(n, p) experiment with its probability, in
/// descending lexicographic order of the count vectors.
template <class Weight>
struct OutcomeTable {
  std::uint64_t n = 0;
  std::size_t cells = 0;
  std::vector<Outcome<Weight>> entries;
};

using FloatOutcomeTable = OutcomeTable<long double>;
using ExactOutcomeTable = OutcomeTable<Rational>;

/// C(n + N - 1, N - 1), saturating at UINT64_MAX.
std::uint64_t composition_count(std::uint64_t n, std::size_t cells);

/// Extended-precision probabilities computed in the log domain.
FloatOutcomeTable enumerate_multinomial(std::uint64_t n, const ProbabilityVector& probs);
/// Exact rational probabilities; requires probs.exact().
ExactOutcomeTable enumerate_multinomial_exact(std::uint64_t n, const ProbabilityVector& probs);

/// P{T >= threshold} by enumeration (exact arithmetic when probs are rational).
double exact_tail(std::uint64_t n, const ProbabilityVector& probs, StatisticKind kind, double threshold);
Rational exact_tail_rational(std::uint64_t n, const ProbabilityVector& probs, StatisticKind kind,
                             double threshold);

/// E R^k for R = sum_m h_m(eta_m) under the multinomial law.
double exact_moment_multinomial(std::uint64_t n, const ProbabilityVector& probs, const CellFunction& cells,
                                int k);

/// E(T^k | sum xi_m = n) for independent xi_m ~ Poisson(n p_m), normalized by
/// the Poisson(n) probability of the conditioning event.
double conditioned_poisson_moment(std::uint64_t n, const ProbabilityVector& probs, const CellFunction& cells,
                                  int k);

enum class CumulantSide { multinomial, poissonized };

/// Cumulants C_1..C_K of R (multinomial, by enumeration) or of T (sum of
/// per-cell Poisson-functional cumulants, by truncated summation).
CumulantVector exact_cumulants(std::uint64_t n, const ProbabilityVector& probs, const CellFunction& cells,
                               int max_order, CumulantSide side, double mass_tol = kDefaultMassTolerance);

struct NuResult {
  double value;      // n! e^n / (2 pi n^n sqrt n)
  double deviation;  // value - 1 / sqrt(2 pi)
};

NuResult nu_n(std::uint64_t n);

void write_outcome_csv(std::ostream& out, const FloatOutcomeTable& table);
void write_outcome_csv(std::ostream& out, const ExactOutcomeTable& table);

}  // namespace ldgof
