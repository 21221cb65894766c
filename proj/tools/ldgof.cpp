// ldgof: command-line front end for the tail approximations, the exact
// oracle and the simulator. Exit status 0 on success, 2 on invalid input,
// 3 when a guard or budget refuses the work, 1 on anything else.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ldgof/cumulants.hpp"
#include "ldgof/error.hpp"
#include "ldgof/exact_oracle.hpp"
#include "ldgof/io.hpp"
#include "ldgof/monte_carlo.hpp"
#include "ldgof/poisson_moments.hpp"
#include "ldgof/statistics.hpp"
#include "ldgof/tail.hpp"

namespace {

using nlohmann::json;
using namespace ldgof;

constexpr int kExitInternal = 1;
constexpr int kExitValidation = 2;
constexpr int kExitRefusal = 3;

struct Options {
  std::string stat = "chi2";
  std::string counts_path;
  std::string probs_path;
  std::optional<std::uint64_t> n;
  std::optional<std::size_t> cells;
  std::string centering = "N";
  std::optional<int> order;
  std::optional<std::string> lambda;
  std::optional<double> threshold;
  std::string x_list;
  std::uint64_t reps = 100000;
  std::uint64_t seed = 20240611;
  unsigned threads = 1;
  std::string format = "json";
  std::string out_path;
  bool exact_rational = false;
  std::string constants;
  std::string cells_grid;
  std::uint64_t budget = kDefaultSimulationBudget;
  std::string input_path;
  bool inverse = false;
};

std::string rational_string(const Rational& q) {
  std::ostringstream s;
  s << numerator(q);
  if (denominator(q) != 1) s << '/' << denominator(q);
  return s.str();
}

// Every option of the active subcommand with the value it took.
json invocation(const CLI::App& sub) {
  json flags = json::object();
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt->get_name() == "--help") continue;
    std::string name = opt->get_name();
    if (opt->get_expected_min() == 0) {
      flags[name] = opt->count() > 0;
    } else if (opt->count() > 0) {
      const auto& r = opt->results();
      flags[name] = r.size() == 1 ? json(r.front()) : json(r);
    } else if (!opt->get_default_str().empty()) {
      flags[name] = opt->get_default_str();
    } else {
      flags[name] = nullptr;
    }
  }
  return {{"subcommand", sub.get_name()}, {"flags", flags}, {"version", LDGOF_VERSION}};
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw ParseError("cannot open '" + path + "' for writing");
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

void emit(const Options& o, const json& doc) {
  Output out(o.out_path);
  out.stream() << doc.dump(2) << '\n';
}

template <class WriteCsv>
void emit(const Options& o, const json& doc, WriteCsv&& write_csv) {
  if (o.format == "csv") {
    Output out(o.out_path);
    write_csv(out.stream());
  } else {
    emit(o, doc);
  }
}

ProbabilityVector load_probabilities(const Options& o, std::optional<std::size_t> fallback_cells = {}) {
  if (!o.probs_path.empty()) {
    if (o.cells) throw ContractError("give either --probs or --cells, not both");
    return parse_probabilities(read_value_file(o.probs_path), o.exact_rational);
  }
  if (o.cells) return ProbabilityVector::equiprobable(*o.cells);
  if (fallback_cells) return ProbabilityVector::equiprobable(*fallback_cells);
  throw ContractError("cell probabilities are required: pass --probs PATH or --cells INT");
}

std::uint64_t require_n(const Options& o) {
  if (!o.n) throw ContractError("--n is required");
  if (*o.n == 0) throw RangeError("--n must be at least 1");
  return *o.n;
}

ZoneConstants parse_constants(const std::string& text) {
  ZoneConstants c;
  if (text.empty()) return c;
  const auto v = parse_real_list(text);
  if (v.size() != 4) throw ParseError("--constants needs four values C1,C2,C3,C4");
  for (double x : v) {
    if (!(x > 0.0)) throw RangeError("zone constants must be positive");
  }
  c.c1 = v[0];
  c.c2 = v[1];
  c.c3 = v[2];
  c.c4 = v[3];
  return c;
}

json probs_summary(const ProbabilityVector& probs) {
  return {{"N", probs.size()}, {"p_min", probs.min()}, {"p_max", probs.max()},
          {"exact", probs.exact().has_value()}};
}

// ---------------------------------------------------------------- pvalue

void run_pvalue(const Options& o, const CLI::App& sub) {
  if (o.counts_path.empty()) throw ContractError("--counts is required");
  const CountsVector counts = parse_counts(read_value_file(o.counts_path));
  const std::uint64_t n = counts.sample_size();
  if (o.n && *o.n != n) {
    throw ContractError("--n " + std::to_string(*o.n) + " does not match the counts total " + std::to_string(n));
  }
  const ProbabilityVector probs = load_probabilities(o, counts.size());
  const StatisticKind kind = parse_statistic_kind(o.stat);
  const double t = statistic(kind, counts, probs);
  TailOptions options;
  options.centering = parse_centering(o.centering);
  options.constants = parse_constants(o.constants);
  const TailReport report = tail_pvalue(t, kind, probs, n, options);

  json doc = to_json(report);
  doc["n"] = n;
  doc["N"] = probs.size();
  doc["centering"] = o.centering;
  doc["invocation"] = invocation(sub);
  emit(o, doc, [&](std::ostream& out) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s,%zu,%llu,%.17g,%.17g,%.17g,%.17g\n", o.stat.c_str(), probs.size(),
                  static_cast<unsigned long long>(n), t, report.x, report.p_upper, report.p_lower);
    out << "kind,N,n,statistic,x,p_upper,p_lower\n" << buf;
  });
}

// --------------------------------------------------------------- profile

void run_profile(const Options& o, const CLI::App& sub) {
  const std::uint64_t n = require_n(o);
  const ProbabilityVector probs = load_probabilities(o);
  const StatisticKind kind = parse_statistic_kind(o.stat);
  const StatisticProfile closed = profile_for(kind, probs, n);
  const CellFunction cells =
      kind == StatisticKind::chi_square ? chi_square_cells(probs, n) : likelihood_ratio_cells(probs, n);
  const StatisticProfile summed = generic_profile(cells, probs, n);

  json doc = {{"kind", o.stat},
              {"n", n},
              {"probabilities", probs_summary(probs)},
              {"profile", to_json(closed)},
              {"poisson_summation", to_json(summed)},
              {"invocation", invocation(sub)}};
  emit(o, doc, [&](std::ostream& out) {
    out << "method,mean,slope,raw_variance,variance,rate,nabla\n";
    char buf[256];
    for (const auto& [name, p] : {std::pair{"closed_form", closed}, std::pair{"poisson_summation", summed}}) {
      std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", name, p.mean, p.slope,
                    p.raw_variance, p.variance, p.rate, p.nabla);
      out << buf;
    }
  });
}

// --------------------------------------------------------------- moments

void run_moments(const Options& o, const CLI::App& sub) {
  if (!o.order) throw ContractError("--order is required");
  const MomentPolynomial poly = moment_coefficients(*o.order);
  json coefficients = json::array();
  for (int l = 1; l <= poly.degree(); ++l) {
    const Rational& c = poly.coefficient(l);
    coefficients.push_back({{"l", l},
                            {"numerator", numerator(c).str()},
                            {"denominator", denominator(c).str()},
                            {"value", to_double(c)}});
  }
  json doc = {{"order", *o.order}, {"coefficients", coefficients}};
  if (o.lambda) {
    const Rational lam = parse_rational(*o.lambda);
    if (lam <= 0) throw RangeError("--lambda must be positive");
    const double lambda = to_double(lam);
    doc["lambda"] = lambda;
    doc["moment"] = central_moment(*o.order, PoissonRate(lambda));
    doc["standardized_moment"] = standardized_moment(*o.order, PoissonRate(lambda));
    if (o.exact_rational) doc["moment_exact"] = rational_string(central_moment_exact(*o.order, lam));
  }
  doc["invocation"] = invocation(sub);
  emit(o, doc, [&](std::ostream& out) {
    const std::vector<MomentPolynomial> table{poly};
    write_coefficient_csv(out, table);
  });
}

// ------------------------------------------------------------- cumulants

std::string read_input(const std::string& path) {
  std::ostringstream body;
  if (path.empty() || path == "-") {
    body << std::cin.rdbuf();
  } else {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    body << in.rdbuf();
  }
  return body.str();
}

void run_cumulants(const Options& o, const CLI::App& sub) {
  const std::string text = read_input(o.input_path);
  const char* from = o.inverse ? "cumulants" : "moments";
  const char* to = o.inverse ? "moments" : "cumulants";
  json doc = {{"input", from}, {"output", to}};
  std::vector<std::string> column;

  if (o.exact_rational) {
    const auto values = parse_rational_vector(text);
    const auto result = o.inverse ? cumulants_to_moments(values) : moments_to_cumulants(values);
    json exact = json::array();
    json approx = json::array();
    for (const auto& q : result) {
      exact.push_back(rational_string(q));
      approx.push_back(to_double(q));
      column.push_back(rational_string(q));
    }
    doc["values_exact"] = exact;
    doc["values"] = approx;
  } else {
    const auto values = parse_real_vector(text);
    std::vector<double> result;
    if (o.inverse) {
      const auto m = cumulants_to_moments(CumulantVector(values));
      result.assign(m.values().begin(), m.values().end());
    } else {
      const auto c = moments_to_cumulants(MomentVector(values));
      result.assign(c.values().begin(), c.values().end());
      if (c.order() >= 3 && std::abs(c[1]) <= 1e-9 && std::abs(c[2] - 1.0) <= 1e-9) {
        const DeltaCertificate cert = statulevicius_delta(c);
        doc["delta"] = {{"delta", cert.delta}, {"nu", cert.nu}, {"max_order", cert.max_order}};
      }
    }
    doc["values"] = result;
    char buf[64];
    for (double v : result) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      column.emplace_back(buf);
    }
  }
  doc["invocation"] = invocation(sub);
  emit(o, doc, [&](std::ostream& out) {
    out << "k," << (o.inverse ? "moment" : "cumulant") << '\n';
    for (std::size_t k = 0; k < column.size(); ++k) out << k + 1 << ',' << column[k] << '\n';
  });
}

// ----------------------------------------------------------------- exact

void run_exact(const Options& o, const CLI::App& sub) {
  const std::uint64_t n = require_n(o);
  const ProbabilityVector probs = load_probabilities(o);
  const StatisticKind kind = parse_statistic_kind(o.stat);
  const std::uint64_t outcomes = composition_count(n, probs.size());
  if (outcomes > kEnumerationGuard) {
    throw TooLargeError("enumeration of " + std::to_string(outcomes) + " outcomes exceeds the guard of " +
                        std::to_string(kEnumerationGuard));
  }
  const bool rational = o.exact_rational || probs.exact().has_value();
  if (o.exact_rational && !probs.exact()) throw ContractError("--exact-rational needs rational probabilities");
  const CellFunction cells =
      kind == StatisticKind::chi_square ? chi_square_cells(probs, n) : likelihood_ratio_cells(probs, n);

  json doc = {{"kind", o.stat}, {"n", n}, {"probabilities", probs_summary(probs)}, {"outcomes", outcomes}};
  const NuResult nu = nu_n(n);
  doc["nu_n"] = {{"value", nu.value}, {"deviation", nu.deviation}};
  std::optional<double> tail;
  if (o.threshold) {
    tail = exact_tail(n, probs, kind, *o.threshold);
    doc["threshold"] = *o.threshold;
    doc["tail"] = *tail;
    if (rational) doc["tail_exact"] = rational_string(exact_tail_rational(n, probs, kind, *o.threshold));
  }
  if (o.order) {
    if (*o.order < 2 || *o.order > 6) throw RangeError("--order must lie in [2, 6] for exact cumulants");
    json moments = json::array();
    for (int k = 1; k <= 4 && k <= *o.order; ++k) {
      moments.push_back({{"k", k},
                         {"multinomial", exact_moment_multinomial(n, probs, cells, k)},
                         {"conditioned_poisson", conditioned_poisson_moment(n, probs, cells, k)}});
    }
    const auto r = exact_cumulants(n, probs, cells, *o.order, CumulantSide::multinomial);
    const auto t = exact_cumulants(n, probs, cells, *o.order, CumulantSide::poissonized);
    doc["moments"] = moments;
    doc["cumulants_multinomial"] = std::vector<double>(r.values().begin(), r.values().end());
    doc["cumulants_poissonized"] = std::vector<double>(t.values().begin(), t.values().end());
  }
  doc["invocation"] = invocation(sub);
  emit(o, doc, [&](std::ostream& out) {
    if (tail) {
      char buf[256];
      std::snprintf(buf, sizeof buf, "%s,%zu,%llu,%.17g,%.17g\n", o.stat.c_str(), probs.size(),
                    static_cast<unsigned long long>(n), *o.threshold, *tail);
      out << "kind,N,n,threshold,tail\n" << buf;
    } else if (rational) {
      write_outcome_csv(out, enumerate_multinomial_exact(n, probs));
    } else {
      write_outcome_csv(out, enumerate_multinomial(n, probs));
    }
  });
}

// -------------------------------------------------------------- simulate

void run_simulate(const Options& o, const CLI::App& sub) {
  if (o.threads == 0) throw RangeError("--threads must be at least 1");
  SimulationConfig config;
  config.kind = parse_statistic_kind(o.stat);
  config.replications = o.reps;
  config.x_grid = parse_real_list(o.x_list);
  config.seed = o.seed;
  config.partitions = o.threads;
  config.centering = parse_centering(o.centering);
  config.budget = o.budget;

  std::vector<SimulationResult> results;
  if (!o.cells_grid.empty()) {
    if (!o.lambda) throw ContractError("--cells-grid needs --lambda (average cell count)");
    if (!o.probs_path.empty() || o.cells || o.n) {
      throw ContractError("--cells-grid sets N and n itself; drop --probs, --cells and --n");
    }
    std::vector<std::size_t> grid;
    for (double v : parse_real_list(o.cells_grid)) {
      if (!(v >= 1.0) || v != static_cast<double>(static_cast<std::size_t>(v))) {
        throw RangeError("--cells-grid entries must be positive integers");
      }
      grid.push_back(static_cast<std::size_t>(v));
    }
    results = convergence_study(config, grid, to_double(parse_rational(*o.lambda)));
  } else {
    config.n = require_n(o);
    config.probs = load_probabilities(o);
    results.push_back(estimate_tail(config));
  }

  json runs = json::array();
  for (const auto& r : results) runs.push_back(to_json(r));
  json doc = {{"results", runs}, {"invocation", invocation(sub)}};
  emit(o, doc, [&](std::ostream& out) { write_simulation_csv(out, results); });
}

// -------------------------------------------------------------- diagnose

void run_diagnose(const Options& o, const CLI::App& sub) {
  const std::uint64_t n = require_n(o);
  const ProbabilityVector probs = load_probabilities(o);
  const StatisticKind kind = parse_statistic_kind(o.stat);
  const ZoneConstants constants = parse_constants(o.constants);
  const auto xs = parse_real_list(o.x_list);

  json rows = json::array();
  std::vector<std::pair<double, ZoneDiagnostics>> zones;
  for (double x : xs) {
    zones.emplace_back(x, zone_diagnostics(probs, n, x, kind, constants));
    json row = to_json(zones.back().second);
    row["x"] = x;
    rows.push_back(row);
  }
  json doc = {{"kind", o.stat},
              {"n", n},
              {"probabilities", probs_summary(probs)},
              {"profile", to_json(profile_for(kind, probs, n))},
              {"diagnostics", rows},
              {"invocation", invocation(sub)}};
  emit(o, doc, [&](std::ostream& out) {
    out << "x,cap,value,ratio,status\n";
    char buf[256];
    for (const auto& [x, zone] : zones) {
      for (const auto& [name, cap] : zone.caps) {
        std::snprintf(buf, sizeof buf, "%.17g,%s,%.17g,%.17g,%s\n", x, name.c_str(), cap, zone.cap_ratios.at(name),
                      zone.flags.at(name).c_str());
        out << buf;
      }
    }
  });
}

// ---------------------------------------------------------------- wiring

void add_stat(CLI::App* sub, Options& o) {
  sub->add_option("--stat", o.stat, "statistic: chi2 (Pearson) or lr (likelihood ratio)")
      ->check(CLI::IsMember({"chi2", "lr"}))
      ->capture_default_str();
}

void add_probs(CLI::App* sub, Options& o) {
  sub->add_option("--probs", o.probs_path,
                  "file of cell probabilities, one per line, '#' comments, rationals as a/b");
  sub->add_option("--cells", o.cells, "number of equiprobable cells (instead of --probs)");
}

void add_output(CLI::App* sub, Options& o) {
  sub->add_option("--format", o.format, "output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  sub->add_option("--out", o.out_path, "write output to this file instead of stdout");
}

void add_centering(CLI::App* sub, Options& o) {
  sub->add_option("--centering", o.centering, "chi-square centre: N (cells) or N-1 (exact multinomial mean)")
      ->check(CLI::IsMember({"N", "N-1"}))
      ->capture_default_str();
}

void add_constants(CLI::App* sub, Options& o) {
  sub->add_option("--constants", o.constants,
                  "zone constants C1,C2,C3,C4 for the cell-spread conditions (default 1,1,1,1)");
}

int run(int argc, char** argv) {
  CLI::App app{"Large-deviation normal-tail p-values for chi-square and likelihood-ratio tests on sparse "
               "multinomial cells"};
  app.set_version_flag("--version", LDGOF_VERSION);
  app.require_subcommand(1, 1);
  app.allow_extras(false);

  Options o;

  auto* pvalue = app.add_subcommand("pvalue", "normal-tail p-value and zone diagnostics for observed counts");
  add_stat(pvalue, o);
  pvalue->add_option("--counts", o.counts_path, "file of cell counts, one per line")->required();
  add_probs(pvalue, o);
  pvalue->add_option("--n", o.n, "sample size; must equal the counts total (inferred when omitted)");
  add_centering(pvalue, o);
  add_constants(pvalue, o);
  pvalue->add_flag("--exact-rational", o.exact_rational, "read decimal probabilities as exact rationals");
  add_output(pvalue, o);

  auto* profile = app.add_subcommand("profile", "Poissonized mean, slope and variances of a statistic");
  add_stat(profile, o);
  add_probs(profile, o);
  profile->add_option("--n", o.n, "sample size (items)")->required();
  profile->add_flag("--exact-rational", o.exact_rational, "read decimal probabilities as exact rationals");
  add_output(profile, o);

  auto* moments = app.add_subcommand("moments", "Poisson central moment polynomial and its value");
  moments->add_option("--order", o.order, "moment order nu, 2..40")->required();
  moments->add_option("--lambda", o.lambda, "Poisson rate (decimal or a/b); omit for coefficients only");
  moments->add_flag("--exact-rational", o.exact_rational, "also report the moment as an exact rational");
  add_output(moments, o);

  auto* cumulants = app.add_subcommand("cumulants", "convert moments to cumulants (or back with --inverse)");
  cumulants->add_option("input", o.input_path,
                        "file with a JSON array or one value per line, alpha_1 first; '-' or omitted reads stdin");
  cumulants->add_flag("--inverse", o.inverse, "input holds cumulants; output moments");
  cumulants->add_flag("--exact-rational", o.exact_rational, "exact rational arithmetic on a/b or decimal input");
  add_output(cumulants, o);

  auto* exact = app.add_subcommand("exact", "full multinomial enumeration on tiny instances");
  add_stat(exact, o);
  add_probs(exact, o);
  exact->add_option("--n", o.n, "sample size (items)")->required();
  exact->add_option("--threshold", o.threshold, "report P{statistic >= threshold}");
  exact->add_option("--order", o.order, "also report moments and cumulants up to this order, 2..6");
  exact->add_flag("--exact-rational", o.exact_rational, "exact rational weights (needs rational probabilities)");
  add_output(exact, o);

  auto* simulate = app.add_subcommand("simulate", "seeded Monte Carlo estimate of standardized tail frequencies");
  add_stat(simulate, o);
  add_probs(simulate, o);
  simulate->add_option("--n", o.n, "sample size (items)");
  simulate->add_option("--x", o.x_list, "comma-separated standardized deviations, ascending, >= 0")->required();
  simulate->add_option("--reps", o.reps, "replications, at least 1000")->capture_default_str();
  simulate->add_option("--seed", o.seed, "64-bit seed")->capture_default_str();
  simulate->add_option("--threads", o.threads, "worker threads; results do not depend on it")
      ->capture_default_str();
  add_centering(simulate, o);
  simulate->add_option("--cells-grid", o.cells_grid,
                       "comma-separated cell counts N for a convergence study with n = ceil(lambda N)");
  simulate->add_option("--lambda", o.lambda, "average cell count for --cells-grid");
  simulate->add_option("--budget", o.budget, "upper bound on replications x grid points")
      ->capture_default_str();
  simulate->add_flag("--exact-rational", o.exact_rational, "read decimal probabilities as exact rationals");
  add_output(simulate, o);

  auto* diagnose = app.add_subcommand("diagnose", "validity-zone caps and condition flags; never fails on zones");
  add_stat(diagnose, o);
  add_probs(diagnose, o);
  diagnose->add_option("--n", o.n, "sample size (items)")->required();
  diagnose->add_option("--x", o.x_list, "comma-separated standardized deviations, >= 0")->required();
  add_constants(diagnose, o);
  diagnose->add_flag("--exact-rational", o.exact_rational, "read decimal probabilities as exact rationals");
  add_output(diagnose, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (pvalue->parsed()) run_pvalue(o, *pvalue);
    if (profile->parsed()) run_profile(o, *profile);
    if (moments->parsed()) run_moments(o, *moments);
    if (cumulants->parsed()) run_cumulants(o, *cumulants);
    if (exact->parsed()) run_exact(o, *exact);
    if (simulate->parsed()) run_simulate(o, *simulate);
    if (diagnose->parsed()) run_diagnose(o, *diagnose);
  } catch (const ValidationError& e) {
    std::cerr << "ldgof: invalid input: " << e.what() << '\n';
    return kExitValidation;
  } catch (const RefusalError& e) {
    std::cerr << "ldgof: refused: " << e.what() << '\n';
    return kExitRefusal;
  } catch (const std::exception& e) {
    std::cerr << "ldgof: internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "ldgof: internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}
