#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <vector>

#include <json.hpp>

#include "ldgof/statistics.hpp"

namespace ldgof {

/// xoshiro256** whose state is derived from (seed, stream) by SplitMix64.
/// Every replication draws from its own stream, so results depend only on
/// the seed and the replication index, never on how work is partitioned.
class StreamEngine {
 public:
  using result_type = std::uint64_t;

  StreamEngine(std::uint64_t seed, std::uint64_t stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

 private:
  std::array<std::uint64_t, 4> state_;
};

/// Conditional-binomial cascade: cell m ~ Binomial(remaining n, p_m / remaining mass).
CountsVector sample_multinomial(std::uint64_t n, const ProbabilityVector& probs, StreamEngine& engine);

inline constexpr std::uint64_t kMinReplications = 1000;
inline constexpr std::uint64_t kDefaultSimulationBudget = 100'000'000;

struct SimulationConfig {
  std::uint64_t n = 0;
  ProbabilityVector probs = ProbabilityVector::equiprobable(1);
  StatisticKind kind = StatisticKind::chi_square;
  std::uint64_t replications = 0;
  std::vector<double> x_grid;
  std::uint64_t seed = 0;
  unsigned partitions = 1;
  Centering centering = Centering::cells;
  /// Upper bound on replications * |x_grid|.
  std::uint64_t budget = kDefaultSimulationBudget;
};

struct SimulationRow {
  double x = 0.0;
  double p_theory = 0.0;
  double p_hat = 0.0;
  double se = 0.0;
  double wilson_lo = 0.0;
  double wilson_hi = 0.0;
  double ratio = 0.0;
  std::uint64_t exceedances = 0;
};

struct SimulationResult {
  StatisticKind kind = StatisticKind::chi_square;
  std::size_t cells = 0;
  std::uint64_t n = 0;
  std::uint64_t replications = 0;
  std::uint64_t seed = 0;
  std::vector<SimulationRow> rows;
  double elapsed_seconds = 0.0;
};

struct WilsonInterval {
  double lo;
  double hi;
};

/// 95% Wilson score interval for `successes` out of `trials`.
WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials);

/// Empirical frequency of {standardized statistic > x} for each x in the grid.
SimulationResult estimate_tail(const SimulationConfig& config);

/// One estimate_tail per cell count, equiprobable cells, n = ceil(rate * N).
std::vector<SimulationResult> convergence_study(const SimulationConfig& base,
                                                std::span<const std::size_t> cell_grid, double rate);

/// Columns: kind,N,n,x,p_theory,p_hat,se,wilson_lo,wilson_hi,ratio,reps,seed.
void write_simulation_csv(std::ostream& out, std::span<const SimulationResult> results);
nlohmann::json to_json(const SimulationResult& result);

}  // namespace ldgof
