#include "ldgof/monte_carlo.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>
#include <string>
#include <thread>

#include "ldgof/error.hpp"
#include "ldgof/tail.hpp"

namespace ldgof {

namespace {

constexpr std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr double kWilsonZ = 1.959963984540054;

}  // namespace

StreamEngine::StreamEngine(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t a = seed;
  std::uint64_t b = stream ^ 0xD1B54A32D192ED03ULL;
  std::uint64_t key = splitmix64(a) ^ std::rotl(splitmix64(b), 17);
  for (auto& word : state_) word = splitmix64(key);
}

StreamEngine::result_type StreamEngine::operator()() {
  const std::uint64_t result = std::rotl(state_[1] * 5, 7) * 9;
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = std::rotl(state_[3], 45);
  return result;
}

namespace {

// Remaining probability mass from cell m onwards.
std::vector<double> suffix_mass(const ProbabilityVector& probs) {
  std::vector<double> suffix(probs.size() + 1, 0.0);
  for (std::size_t m = probs.size(); m-- > 0;) suffix[m] = suffix[m + 1] + probs[m];
  return suffix;
}

void sample_into(std::uint64_t n, const ProbabilityVector& probs, std::span<const double> suffix,
                 StreamEngine& engine, std::vector<std::uint64_t>& counts) {
  const std::size_t cells = probs.size();
  counts.assign(cells, 0);
  std::uint64_t remaining = n;
  for (std::size_t m = 0; m + 1 < cells && remaining > 0; ++m) {
    const double p = std::min(1.0, probs[m] / suffix[m]);
    std::binomial_distribution<std::int64_t> draw(static_cast<std::int64_t>(remaining), p);
    const auto x = static_cast<std::uint64_t>(draw(engine));
    counts[m] = x;
    remaining -= x;
  }
  counts[cells - 1] += remaining;
}

void validate(const SimulationConfig& config) {
  if (config.n == 0) throw RangeError("sample size must be positive");
  if (config.replications < kMinReplications) {
    throw RangeError("at least " + std::to_string(kMinReplications) + " replications are required, got " +
                     std::to_string(config.replications));
  }
  if (config.x_grid.empty()) throw RangeError("x grid is empty");
  if (!std::is_sorted(config.x_grid.begin(), config.x_grid.end())) {
    throw RangeError("x grid must be sorted ascending");
  }
  if (config.x_grid.front() < 0.0) throw RangeError("x grid values must be non-negative");
  if (config.partitions == 0) throw RangeError("need at least one partition");
  const auto required = static_cast<long double>(config.replications) * config.x_grid.size();
  if (required > static_cast<long double>(config.budget)) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.0Lf", required);
    throw BudgetError("replications x grid points = " + std::string(buf) + " exceeds the budget of " +
                      std::to_string(config.budget) + "; a budget of at least " + buf + " is required");
  }
}

}  // namespace

CountsVector sample_multinomial(std::uint64_t n, const ProbabilityVector& probs, StreamEngine& engine) {
  const auto suffix = suffix_mass(probs);
  std::vector<std::uint64_t> counts;
  sample_into(n, probs, suffix, engine, counts);
  return CountsVector(std::move(counts));
}

WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials) {
  if (trials == 0) throw RangeError("Wilson interval needs at least one trial");
  const double r = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / r;
  const double z2 = kWilsonZ * kWilsonZ;
  const double denom = 1.0 + z2 / r;
  const double centre = (p + z2 / (2.0 * r)) / denom;
  const double half = kWilsonZ * std::sqrt(p * (1.0 - p) / r + z2 / (4.0 * r * r)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

SimulationResult estimate_tail(const SimulationConfig& config) {
  validate(config);
  const auto start = std::chrono::steady_clock::now();
  const StatisticProfile profile = profile_for(config.kind, config.probs, config.n);
  const auto suffix = suffix_mass(config.probs);
  const std::size_t grid = config.x_grid.size();
  const unsigned parts = config.partitions;

  std::vector<std::vector<std::uint64_t>> partial(parts, std::vector<std::uint64_t>(grid, 0));
  auto work = [&](unsigned part) {
    const std::uint64_t lo = config.replications * part / parts;
    const std::uint64_t hi = config.replications * (part + 1) / parts;
    std::vector<std::uint64_t> buffer;
    auto& hits = partial[part];
    for (std::uint64_t rep = lo; rep < hi; ++rep) {
      StreamEngine engine(config.seed, rep);
      sample_into(config.n, config.probs, suffix, engine, buffer);
      const CountsVector counts(std::move(buffer));
      const double t = statistic(config.kind, counts, config.probs);
      const double x = standardize(t, config.kind, profile, config.probs.size(), config.centering);
      for (std::size_t i = 0; i < grid && x > config.x_grid[i]; ++i) ++hits[i];
      buffer.clear();
    }
  };

  std::vector<std::thread> workers;
  workers.reserve(parts > 0 ? parts - 1 : 0);
  for (unsigned part = 1; part < parts; ++part) workers.emplace_back(work, part);
  work(0);
  for (auto& w : workers) w.join();

  SimulationResult result;
  result.kind = config.kind;
  result.cells = config.probs.size();
  result.n = config.n;
  result.replications = config.replications;
  result.seed = config.seed;
  const double reps = static_cast<double>(config.replications);
  for (std::size_t i = 0; i < grid; ++i) {
    std::uint64_t hits = 0;
    for (const auto& p : partial) hits += p[i];
    SimulationRow row;
    row.x = config.x_grid[i];
    row.exceedances = hits;
    row.p_theory = normal_tail(row.x);
    row.p_hat = static_cast<double>(hits) / reps;
    row.se = std::sqrt(row.p_hat * (1.0 - row.p_hat) / reps);
    const auto wilson = wilson_interval(hits, config.replications);
    row.wilson_lo = wilson.lo;
    row.wilson_hi = wilson.hi;
    row.ratio = row.p_hat / row.p_theory;
    result.rows.push_back(row);
  }
  result.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

std::vector<SimulationResult> convergence_study(const SimulationConfig& base,
                                                std::span<const std::size_t> cell_grid, double rate) {
  if (cell_grid.empty()) throw RangeError("cell grid is empty");
  if (!(rate > 0.0)) throw RangeError("average cell count must be positive");
  std::vector<SimulationResult> out;
  out.reserve(cell_grid.size());
  for (std::size_t cells : cell_grid) {
    SimulationConfig config = base;
    config.probs = ProbabilityVector::equiprobable(cells);
    config.n = static_cast<std::uint64_t>(std::ceil(rate * static_cast<double>(cells)));
    out.push_back(estimate_tail(config));
  }
  return out;
}

void write_simulation_csv(std::ostream& out, std::span<const SimulationResult> results) {
  out << "kind,N,n,x,p_theory,p_hat,se,wilson_lo,wilson_hi,ratio,reps,seed\n";
  char buf[512];
  for (const auto& r : results) {
    for (const auto& row : r.rows) {
      std::snprintf(buf, sizeof buf, "%s,%zu,%llu,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%llu,%llu\n",
                    std::string(to_string(r.kind)).c_str(), r.cells,
                    static_cast<unsigned long long>(r.n), row.x, row.p_theory, row.p_hat, row.se,
                    row.wilson_lo, row.wilson_hi, row.ratio,
                    static_cast<unsigned long long>(r.replications),
                    static_cast<unsigned long long>(r.seed));
      out << buf;
    }
  }
}

nlohmann::json to_json(const SimulationResult& result) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : result.rows) {
    rows.push_back({{"x", row.x},
                    {"p_theory", row.p_theory},
                    {"p_hat", row.p_hat},
                    {"se", row.se},
                    {"wilson_lo", row.wilson_lo},
                    {"wilson_hi", row.wilson_hi},
                    {"ratio", row.ratio},
                    {"exceedances", row.exceedances}});
  }
  return {{"kind", std::string(to_string(result.kind))},
          {"N", result.cells},
          {"n", result.n},
          {"reps", result.replications},
          {"seed", result.seed},
          {"rows", rows},
          {"elapsed_seconds", result.elapsed_seconds}};
}

}  // namespace ldgof
