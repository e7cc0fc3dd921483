#include "hypernash/experiments.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstring>
#include <fstream>
#include <functional>
#include <istream>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "hypernash/dynamics.hpp"
#include "hypernash/equilibrium.hpp"
#include "hypernash/instance_io.hpp"
#include "hypernash/percolation.hpp"
#include "hypernash/rng.hpp"

namespace hypernash {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void trim(std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  s = (b == std::string::npos) ? std::string() : s.substr(b, e - b + 1);
}

void validate(const ExperimentConfig& config) {
  if (config.n_values.empty()) {
    throw std::invalid_argument("experiment needs at least one n value");
  }
  for (int n : config.n_values) Dimension check(n);
  if (config.alphas.empty()) {
    throw std::invalid_argument("experiment needs at least one alpha value");
  }
  for (double a : config.alphas) TieParameter check(a);
  if (config.trials < 1) {
    throw std::invalid_argument("trials must be >= 1");
  }
  if (config.meta_reps < 1) {
    throw std::invalid_argument("meta_reps must be >= 1");
  }
  if (config.threads < 1) {
    throw std::invalid_argument("threads must be >= 1");
  }
}

/// Dispatches fn(0..count-1) over `threads` workers; slot-addressed outputs
/// keep results independent of the schedule.
void parallel_for_index(std::int64_t count, int threads,
                        const std::function<void(std::int64_t)>& fn) {
  if (threads <= 1 || count < 2) {
    for (std::int64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&]() {
    while (!failed.load(std::memory_order_relaxed)) {
      const std::int64_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const int workers = static_cast<int>(std::min<std::int64_t>(threads, count));
  pool.reserve(workers);
  for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

std::string group_scope(int n, double alpha) {
  return "@n=" + std::to_string(n) + ",alpha=" + format_double(alpha);
}

void add_metric(std::vector<std::pair<std::string, double>>& metrics,
                const std::string& name, double value) {
  metrics.emplace_back(name, value);
}

/// Copies group metrics into the experiment map: plain names when there is a
/// single group, scoped names per group, and _min/_max aggregates.
void roll_up_group_metrics(ExperimentResult& result) {
  if (result.groups.size() == 1) {
    for (const auto& [k, v] : result.groups.front().metrics) {
      add_metric(result.metrics, k, v);
    }
  }
  for (const auto& g : result.groups) {
    for (const auto& [k, v] : g.metrics) {
      add_metric(result.metrics, k + group_scope(g.n, g.alpha), v);
    }
  }
  std::vector<std::string> names;
  for (const auto& g : result.groups) {
    for (const auto& [k, v] : g.metrics) {
      if (std::find(names.begin(), names.end(), k) == names.end()) {
        names.push_back(k);
      }
    }
  }
  for (const auto& name : names) {
    double lo = kNaN, hi = kNaN;
    for (const auto& g : result.groups) {
      for (const auto& [k, v] : g.metrics) {
        if (k != name || std::isnan(v)) continue;
        lo = std::isnan(lo) ? v : std::min(lo, v);
        hi = std::isnan(hi) ? v : std::max(hi, v);
      }
    }
    add_metric(result.metrics, name + "_min", lo);
    add_metric(result.metrics, name + "_max", hi);
  }
}

std::vector<double> column(const std::vector<TrialRecord>& records,
                           std::size_t col, int n, double alpha) {
  std::vector<double> out;
  for (const auto& r : records) {
    if (r.n == n && r.alpha == alpha) out.push_back(r.values[col]);
  }
  return out;
}

std::vector<std::uint32_t> to_counts(const std::vector<double>& values) {
  std::vector<std::uint32_t> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    out[i] = static_cast<std::uint32_t>(values[i]);
  }
  return out;
}

/// z-score of a sample mean against a target, 0/inf on degenerate SE.
double abs_z(const SummaryStats& stats, double target) {
  const double diff = std::abs(stats.mean - target);
  if (stats.se == 0.0) {
    return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return diff / stats.se;
}

std::uint64_t brd_budget(const ExperimentConfig& config, Dimension dim) {
  return config.max_steps > 0 ? config.max_steps : default_brd_max_steps(dim);
}

}  // namespace

std::uint64_t trial_seed(const ExperimentConfig& config, int part, int n,
                         int stream, std::int64_t trial) {
  return RngStream::from(config.master_seed, config.name)
      .child(static_cast<std::uint64_t>(part))
      .child(static_cast<std::uint64_t>(n))
      .child(static_cast<std::uint64_t>(stream))
      .child(static_cast<std::uint64_t>(trial))
      .key();
}

std::vector<TrialRecord> run_trials(const ExperimentConfig& config, int part,
                                    int stream, const TrialKernel& kernel) {
  const std::int64_t per_group = config.trials;
  const std::int64_t groups =
      static_cast<std::int64_t>(config.n_values.size()) *
      static_cast<std::int64_t>(config.alphas.size());
  std::vector<TrialRecord> records(groups * per_group);
  parallel_for_index(groups * per_group, config.threads, [&](std::int64_t job) {
    const std::int64_t g = job / per_group;
    const std::int64_t t = job % per_group;
    const int n = config.n_values[g / config.alphas.size()];
    const std::size_t ai = g % config.alphas.size();
    const double alpha = config.alphas[ai];
    const std::uint64_t seed =
        trial_seed(config, part, n, stream * 64 + static_cast<int>(ai), t);
    records[job] = TrialRecord{n, alpha, t, seed, kernel(config, n, alpha, seed)};
  });
  return records;
}

Requirement parse_requirement(const std::string& text) {
  static const std::pair<const char*, Requirement::Op> ops[] = {
      {"<=", Requirement::Op::LE}, {">=", Requirement::Op::GE},
      {"==", Requirement::Op::EQ}, {"<", Requirement::Op::LT},
      {">", Requirement::Op::GT}};
  for (const auto& [token, op] : ops) {
    const auto pos = text.find(token);
    if (pos == std::string::npos) continue;
    std::string metric = text.substr(0, pos);
    std::string rhs = text.substr(pos + std::strlen(token));
    trim(metric);
    trim(rhs);
    if (metric.empty() || rhs.empty()) break;
    try {
      return Requirement{metric, op, std::stod(rhs)};
    } catch (const std::exception&) {
      break;
    }
  }
  throw std::invalid_argument("cannot parse requirement '" + text + "'");
}

std::string to_string(const Requirement& req) {
  const char* op = nullptr;
  switch (req.op) {
    case Requirement::Op::LE: op = "<="; break;
    case Requirement::Op::GE: op = ">="; break;
    case Requirement::Op::LT: op = "<"; break;
    case Requirement::Op::GT: op = ">"; break;
    case Requirement::Op::EQ: op = "=="; break;
  }
  return req.metric + " " + op + " " + format_double(req.value);
}

bool ExperimentResult::passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const Check& c) { return c.pass; });
}

double ExperimentResult::metric(const std::string& name) const {
  for (const auto& [k, v] : metrics) {
    if (k == name) return v;
  }
  throw std::invalid_argument("unknown metric '" + name + "' for experiment '" +
                              config.name + "'");
}

namespace {

void evaluate_checks(ExperimentResult& result) {
  for (const auto& req : result.config.requirements) {
    const double value = result.metric(req.metric);
    bool pass = false;
    switch (req.op) {
      case Requirement::Op::LE: pass = value <= req.value; break;
      case Requirement::Op::GE: pass = value >= req.value; break;
      case Requirement::Op::LT: pass = value < req.value; break;
      case Requirement::Op::GT: pass = value > req.value; break;
      case Requirement::Op::EQ: pass = value == req.value; break;
    }
    result.checks.push_back(ExperimentResult::Check{req, value, pass});
  }
}

// ---------------------------------------------------------------------------
// mean-pne: average equilibrium count per n against the (1+alpha)^n curve.

std::vector<double> mean_pne_kernel(const ExperimentConfig&, int n, double alpha,
                                    std::uint64_t seed) {
  const OrientedCube cube = sample_marks(Dimension(n), TieParameter(alpha), seed);
  const EquilibriumReport report = enumerate_equilibria(cube);
  return {static_cast<double>(report.pne_count()),
          static_cast<double>(report.spne_count())};
}

ExperimentResult make_result(const ExperimentConfig& config,
                             std::vector<std::string> columns,
                             std::vector<TrialRecord> records) {
  ExperimentResult result;
  result.config = config;
  result.columns = std::move(columns);
  result.records = std::move(records);
  return result;
}

}  // namespace

ExperimentResult exp_mean_pne(const ExperimentConfig& config) {
  validate(config);
  ExperimentResult result = make_result(
      config, {"pne_count", "spne_count"}, run_trials(config, 0, 0, mean_pne_kernel));
  for (int n : config.n_values) {
    for (double alpha : config.alphas) {
      GroupSummary g{n, alpha, summarize(column(result.records, 0, n, alpha)), {}};
      const double target = mean_pne(Dimension(n), TieParameter(alpha));
      const double z = abs_z(g.stats, target);
      add_metric(g.metrics, "pne_mean", g.stats.mean);
      add_metric(g.metrics, "pne_target", target);
      add_metric(g.metrics, "abs_z", z);
      add_metric(g.metrics, "within_4se", z <= 4.0 ? 1.0 : 0.0);
      result.groups.push_back(std::move(g));
    }
  }
  roll_up_group_metrics(result);
  double all = 1.0;
  for (const auto& g : result.groups) {
    if (g.metrics[3].second != 1.0) all = 0.0;
  }
  add_metric(result.metrics, "mean_within_4se_all", all);
  evaluate_checks(result);
  return result;
}

// ---------------------------------------------------------------------------
// clt: rescaled equilibrium count against the standard normal CDF.

namespace {

std::vector<double> clt_kernel(const ExperimentConfig&, int n, double alpha,
                               std::uint64_t seed) {
  const Dimension dim(n);
  const TieParameter tie(alpha);
  const OrientedCube cube = sample_marks(dim, tie, seed);
  const double count =
      static_cast<double>(enumerate_equilibria(cube).pne_count());
  return {count, clt_statistic(count, dim, tie)};
}

void require_positive_alpha(const ExperimentConfig& config) {
  for (double a : config.alphas) {
    if (!(a > 0.0)) {
      throw std::invalid_argument("this experiment requires alpha > 0");
    }
  }
}

}  // namespace

ExperimentResult exp_clt(const ExperimentConfig& config) {
  validate(config);
  require_positive_alpha(config);
  ExperimentResult result = make_result(config, {"pne_count", "clt_stat"},
                                        run_trials(config, 0, 0, clt_kernel));
  for (int n : config.n_values) {
    for (double alpha : config.alphas) {
      GroupSummary g{n, alpha, summarize(column(result.records, 1, n, alpha)), {}};
      const double ks =
          ks_distance(column(result.records, 1, n, alpha), normal_cdf);
      g.stats.ks_distance = ks;
      add_metric(g.metrics, "ks_distance", ks);
      result.groups.push_back(std::move(g));
    }
  }
  roll_up_group_metrics(result);
  evaluate_checks(result);
  return result;
}

ExperimentResult exp_clt_decay(const ExperimentConfig& config) {
  validate(config);
  require_positive_alpha(config);
  if (config.alphas.size() != 1) {
    throw std::invalid_argument("clt-decay uses a single alpha");
  }
  const double alpha = config.alphas.front();
  ExperimentResult result = make_result(config, {"rep", "pne_count", "clt_stat"}, {});
  std::vector<std::vector<double>> ks_per_n(config.n_values.size());
  for (int rep = 0; rep < config.meta_reps; ++rep) {
    std::vector<TrialRecord> records = run_trials(config, 0, rep, clt_kernel);
    for (std::size_t ni = 0; ni < config.n_values.size(); ++ni) {
      ks_per_n[ni].push_back(ks_distance(
          column(records, 1, config.n_values[ni], alpha), normal_cdf));
    }
    for (auto& r : records) {
      r.values.insert(r.values.begin(), static_cast<double>(rep));
      r.trial += static_cast<std::int64_t>(rep) * config.trials;
      result.records.push_back(std::move(r));
    }
  }
  double ks_at_min_n = kNaN, ks_at_max_n = kNaN;
  int min_n = config.n_values.front(), max_n = min_n;
  for (std::size_t ni = 0; ni < config.n_values.size(); ++ni) {
    const int n = config.n_values[ni];
    GroupSummary g{n, alpha, summarize(column(result.records, 2, n, alpha)), {}};
    const double ks_mean =
        compensated_sum(ks_per_n[ni]) / static_cast<double>(ks_per_n[ni].size());
    g.stats.ks_distance = ks_mean;
    add_metric(g.metrics, "ks_mean", ks_mean);
    result.groups.push_back(std::move(g));
    if (n <= min_n || std::isnan(ks_at_min_n)) {
      min_n = n;
      ks_at_min_n = ks_mean;
    }
    if (n >= max_n) {
      max_n = n;
      ks_at_max_n = ks_mean;
    }
  }
  roll_up_group_metrics(result);
  add_metric(result.metrics, "ks_decay", ks_at_max_n < ks_at_min_n ? 1.0 : 0.0);
  evaluate_checks(result);
  return result;
}

// ---------------------------------------------------------------------------
// spne: strict equilibria; Poisson(1) fit at alpha=0, extinction for alpha>0.

namespace {

std::vector<double> spne_kernel(const ExperimentConfig&, int n, double alpha,
                                std::uint64_t seed) {
  const OrientedCube cube = sample_marks(Dimension(n), TieParameter(alpha), seed);
  const EquilibriumReport report = enumerate_equilibria(cube);
  return {static_cast<double>(report.spne_count()),
          static_cast<double>(report.pne_count())};
}

}  // namespace

ExperimentResult exp_spne(const ExperimentConfig& config) {
  validate(config);
  ExperimentResult result = make_result(config, {"spne_count", "pne_count"},
                                        run_trials(config, 0, 0, spne_kernel));
  for (int n : config.n_values) {
    for (double alpha : config.alphas) {
      const std::vector<double> counts = column(result.records, 0, n, alpha);
      GroupSummary g{n, alpha, summarize(counts), {}};
      double present = 0.0;
      for (double c : counts) present += (c >= 1.0) ? 1.0 : 0.0;
      add_metric(g.metrics, "spne_mean", g.stats.mean);
      add_metric(g.metrics, "spne_present_count", present);
      add_metric(g.metrics, "spne_present_fraction",
                 present / static_cast<double>(counts.size()));
      add_metric(g.metrics, "markov_bound",
                 mean_spne(Dimension(n), TieParameter(alpha)));
      if (alpha == 0.0) {
        const PoissonGof gof = poisson_gof(to_counts(counts), 1.0);
        g.stats.chi_square = gof.statistic;
        add_metric(g.metrics, "chi_square", gof.statistic);
        add_metric(g.metrics, "chi_square_q999", gof.q999);
        add_metric(g.metrics, "chi_square_ok",
                   gof.statistic < gof.q999 ? 1.0 : 0.0);
      }
      result.groups.push_back(std::move(g));
    }
  }
  roll_up_group_metrics(result);
  evaluate_checks(result);
  return result;
}

// ---------------------------------------------------------------------------
// isolated: bond percolation component structure; `alpha` is read as the open
// probability p.

namespace {

std::vector<double> isolated_kernel(const ExperimentConfig&, int n, double p,
                                    std::uint64_t seed) {
  const BondConfig bond = sample_bond(Dimension(n), p, seed);
  const ComponentStats stats = components(bond);
  std::uint32_t non_singleton = 0;
  for (std::uint32_t s : stats.sizes) {
    if (s > 1) ++non_singleton;
  }
  return {static_cast<double>(stats.isolated_count),
          static_cast<double>(stats.largest_size),
          non_singleton <= 1 ? 1.0 : 0.0};
}

}  // namespace

ExperimentResult exp_isolated(const ExperimentConfig& config) {
  validate(config);
  ExperimentResult result =
      make_result(config, {"isolated_count", "largest_size", "singleton_ok"},
                  run_trials(config, 0, 0, isolated_kernel));
  for (int n : config.n_values) {
    for (double p : config.alphas) {
      const std::vector<double> counts = column(result.records, 0, n, p);
      GroupSummary g{n, p, summarize(counts), {}};
      const double target =
          std::ldexp(1.0, n) * std::pow(1.0 - p, n);  // 2^n (1-p)^n
      add_metric(g.metrics, "isolated_mean", g.stats.mean);
      add_metric(g.metrics, "isolated_variance", g.stats.variance);
      add_metric(g.metrics, "isolated_target", target);
      const std::vector<double> singleton = column(result.records, 2, n, p);
      add_metric(g.metrics, "singleton_fraction",
                 compensated_sum(singleton) / static_cast<double>(singleton.size()));
      if (target > 0.0) {
        const PoissonGof gof = poisson_gof(to_counts(counts), target);
        g.stats.chi_square = gof.statistic;
        add_metric(g.metrics, "chi_square", gof.statistic);
        add_metric(g.metrics, "chi_square_q999", gof.q999);
        add_metric(g.metrics, "chi_square_ok",
                   gof.statistic < gof.q999 ? 1.0 : 0.0);
      }
      result.groups.push_back(std::move(g));
    }
  }
  roll_up_group_metrics(result);
  evaluate_checks(result);
  return result;
}

// ---------------------------------------------------------------------------
// coupling: the oriented exploration against the Bernoulli(beta) bond model.

namespace {

std::vector<double> coupling_oriented_kernel(const ExperimentConfig&, int n,
                                             double alpha, std::uint64_t seed) {
  const OrientedCube cube = sample_marks(Dimension(n), TieParameter(alpha), seed);
  return {0.0,
          static_cast<double>(accessible_set(cube, 0).accessible_count())};
}

std::vector<double> coupling_bond_kernel(const ExperimentConfig&, int n,
                                         double alpha, std::uint64_t seed) {
  const BondConfig bond =
      sample_bond(Dimension(n), TieParameter(alpha).beta(), seed);
  return {1.0, static_cast<double>(cluster_of(bond, 0).count())};
}

/// Exact laws of |{0} u accessible(0)| under i.i.d. edge marks and of the
/// open cluster of 0 under Bernoulli(beta) bonds, both at n=2 by full
/// weighted enumeration (81 mark configurations vs 16 bond configurations).
std::pair<std::array<double, 5>, std::array<double, 5>> exact_size_laws(
    double alpha) {
  const Dimension dim(2);
  const TieParameter tie(alpha);
  const double beta = tie.beta();
  std::array<double, 5> oriented{};
  constexpr EdgeMark kMarks[3] = {EdgeMark::TowardZero, EdgeMark::TowardOne,
                                  EdgeMark::Tie};
  for (int c = 0; c < 81; ++c) {
    OrientedCube cube{dim, std::vector<EdgeMark>(4), alpha};
    double weight = 1.0;
    int rest = c;
    for (int e = 0; e < 4; ++e, rest /= 3) {
      cube.marks[e] = kMarks[rest % 3];
      weight *= (cube.marks[e] == EdgeMark::Tie) ? alpha : beta;
    }
    oriented[accessible_set(cube, 0).accessible_count()] += weight;
  }
  std::array<double, 5> bond_law{};
  for (unsigned m = 0; m < 16; ++m) {
    BondConfig bond{dim, Bitset(4), beta};
    double weight = 1.0;
    for (int e = 0; e < 4; ++e) {
      if ((m >> e) & 1) {
        bond.open.set(e);
        weight *= beta;
      } else {
        weight *= 1.0 - beta;
      }
    }
    bond_law[cluster_of(bond, 0).count()] += weight;
  }
  return {oriented, bond_law};
}

}  // namespace

ExperimentResult exp_coupling(const ExperimentConfig& config) {
  validate(config);
  if (config.alphas.size() != 1) {
    throw std::invalid_argument("coupling uses a single alpha");
  }
  const double alpha = config.alphas.front();
  const double beta = TieParameter(alpha).beta();

  ExperimentResult result = make_result(config, {"model", "cluster_size"}, {});
  {
    std::vector<TrialRecord> oriented =
        run_trials(config, 0, 0, coupling_oriented_kernel);
    std::vector<TrialRecord> bond = run_trials(config, 0, 1, coupling_bond_kernel);
    result.records.reserve(oriented.size() + bond.size());
    for (auto& r : oriented) result.records.push_back(std::move(r));
    for (auto& r : bond) {
      r.trial += config.trials;
      result.records.push_back(std::move(r));
    }
  }

  // (i) exact size laws at n=2.
  const auto [exact_oriented, exact_bond] = exact_size_laws(alpha);
  double max_atom_diff = 0.0;
  for (int k = 1; k <= 4; ++k) {
    max_atom_diff =
        std::max(max_atom_diff, std::abs(exact_oriented[k] - exact_bond[k]));
  }

  // (ii) per-n two-sample KS between the exploration and bond size samples.
  for (int n : config.n_values) {
    std::vector<double> sizes_oriented, sizes_bond;
    for (const auto& r : result.records) {
      if (r.n != n) continue;
      (r.values[0] == 0.0 ? sizes_oriented : sizes_bond).push_back(r.values[1]);
    }
    GroupSummary g{n, alpha, summarize(sizes_oriented), {}};
    const double ks = ks_two_sample(sizes_oriented, sizes_bond);
    g.stats.ks_distance = ks;
    add_metric(g.metrics, "ks_two_sample", ks);
    add_metric(g.metrics, "oriented_mean",
               compensated_sum(sizes_oriented) / sizes_oriented.size());
    add_metric(g.metrics, "bond_mean",
               compensated_sum(sizes_bond) / sizes_bond.size());
    result.groups.push_back(std::move(g));
  }

  // (iii) per-instance coupled exploration: explored set must equal the
  // accessible set and the bond cluster of the start, on every instance.
  std::atomic<std::int64_t> mismatches{0};
  for (int n : config.n_values) {
    parallel_for_index(config.trials, config.threads, [&](std::int64_t t) {
      const std::uint64_t seed = trial_seed(config, 1, n, 0, t);
      const OrientedCube cube =
          sample_marks(Dimension(n), TieParameter(alpha), seed);
      const CouplingOutput out = coupled_percolation(cube, 0, seed);
      const AccessPartition part = accessible_set(cube, 0);
      if (!(out.explored == part.accessible()) ||
          !(cluster_of(out.bond, 0) == out.explored)) {
        mismatches.fetch_add(1, std::memory_order_relaxed);
      }
    });
  }

  // (iv) marginal law of the output bond field: per-edge open frequency at
  // n=marginal_n, and the joint 16-state law over the 4 edges at n=2.
  // Counts are sums over runs, so they do not depend on the partitioning.
  const Dimension mdim(config.marginal_n);
  std::vector<std::int64_t> open_count(mdim.edge_count(), 0);
  std::vector<std::int64_t> joint_count(16, 0);
  {
    std::mutex merge_mutex;
    parallel_for_index(config.marginal_runs, config.threads, [&](std::int64_t r) {
      const std::uint64_t seed_edge = trial_seed(config, 2, mdim.n(), 0, r);
      const OrientedCube cube =
          sample_marks(mdim, TieParameter(alpha), seed_edge);
      const CouplingOutput out = coupled_percolation(cube, 0, seed_edge);
      const std::uint64_t seed_joint = trial_seed(config, 2, 2, 1, r);
      const OrientedCube cube2 =
          sample_marks(Dimension(2), TieParameter(alpha), seed_joint);
      const CouplingOutput out2 = coupled_percolation(cube2, 0, seed_joint);
      unsigned state = 0;
      for (int e = 0; e < 4; ++e) {
        if (out2.bond.open.test(e)) state |= 1u << e;
      }
      std::lock_guard<std::mutex> lock(merge_mutex);
      for (std::uint64_t e = 0; e < mdim.edge_count(); ++e) {
        if (out.bond.open.test(e)) ++open_count[e];
      }
      ++joint_count[state];
    });
  }
  double max_edge_z = 0.0;
  double joint_chi2 = kNaN;
  const double runs = static_cast<double>(config.marginal_runs);
  if (beta > 0.0 && beta < 1.0) {
    const double edge_se = std::sqrt(beta * (1.0 - beta) / runs);
    for (std::uint64_t e = 0; e < mdim.edge_count(); ++e) {
      const double freq = static_cast<double>(open_count[e]) / runs;
      max_edge_z = std::max(max_edge_z, std::abs(freq - beta) / edge_se);
    }
    joint_chi2 = 0.0;
    for (unsigned state = 0; state < 16; ++state) {
      const double expected = runs * std::pow(beta, std::popcount(state)) *
                              std::pow(1.0 - beta, 4 - std::popcount(state));
      const double d = static_cast<double>(joint_count[state]) - expected;
      joint_chi2 += d * d / expected;
    }
  }
  const double joint_q999 = chi_square_quantile(15, 0.999);

  roll_up_group_metrics(result);
  add_metric(result.metrics, "exact_max_atom_diff", max_atom_diff);
  add_metric(result.metrics, "explored_mismatch_count",
             static_cast<double>(mismatches.load()));
  add_metric(result.metrics, "edge_open_max_abs_z", max_edge_z);
  add_metric(result.metrics, "joint_chi_square", joint_chi2);
  add_metric(result.metrics, "joint_chi_square_q999", joint_q999);
  add_metric(result.metrics, "joint_chi_square_ok",
             joint_chi2 < joint_q999 ? 1.0 : 0.0);
  evaluate_checks(result);
  return result;
}

// ---------------------------------------------------------------------------
// accessibility: which equilibria a run from vertex 0 can reach.

namespace {

std::vector<double> accessibility_kernel(const ExperimentConfig&, int n,
                                         double alpha, std::uint64_t seed) {
  const OrientedCube cube = sample_marks(Dimension(n), TieParameter(alpha), seed);
  const EquilibriumReport report = enumerate_equilibria(cube);
  const AccessPartition part = accessible_set(cube, 0);
  double unreachable = 0.0;
  for (VertexId v : report.pne) {
    if (!part.is_accessible(v)) unreachable += 1.0;
  }
  return {static_cast<double>(report.pne_count()), unreachable,
          unreachable == 0.0 ? 1.0 : 0.0,
          static_cast<double>(all_tie_vertices(cube).size())};
}

}  // namespace

ExperimentResult exp_accessibility(const ExperimentConfig& config) {
  validate(config);
  ExperimentResult result = make_result(
      config,
      {"pne_count", "unreachable_pne_count", "all_accessible", "all_tie_count"},
      run_trials(config, 0, 0, accessibility_kernel));
  for (int n : config.n_values) {
    for (double alpha : config.alphas) {
      const std::vector<double> unreachable = column(result.records, 1, n, alpha);
      GroupSummary g{n, alpha, summarize(unreachable), {}};
      const std::vector<double> all_ok = column(result.records, 2, n, alpha);
      const std::vector<double> ties = column(result.records, 3, n, alpha);
      double present = 0.0;
      for (double u : unreachable) present += (u > 0.0) ? 1.0 : 0.0;
      const double total = static_cast<double>(unreachable.size());
      add_metric(g.metrics, "all_accessible_fraction",
                 compensated_sum(all_ok) / total);
      add_metric(g.metrics, "unreachable_present_fraction", present / total);
      add_metric(g.metrics, "unreachable_mean", g.stats.mean);
      add_metric(g.metrics, "all_tie_mean", compensated_sum(ties) / total);
      result.groups.push_back(std::move(g));
    }
  }
  roll_up_group_metrics(result);
  evaluate_checks(result);
  return result;
}

// ---------------------------------------------------------------------------
// brd-steps: convergence frequency and step counts from random starts.

namespace {

std::vector<double> brd_kernel(const ExperimentConfig& config, int n,
                               double alpha, std::uint64_t seed) {
  const Dimension dim(n);
  const OrientedCube cube = sample_marks(dim, TieParameter(alpha), seed);
  const VertexId start = RngStream::from(seed, "start").below(0, dim.vertex_count());
  const BrdStats stats = brd_run_stats(cube, start, seed, brd_budget(config, dim));
  return {static_cast<double>(stats.start), stats.converged ? 1.0 : 0.0,
          static_cast<double>(stats.steps)};
}

}  // namespace

ExperimentResult exp_brd(const ExperimentConfig& config) {
  validate(config);
  ExperimentResult result = make_result(config, {"start", "converged", "steps"},
                                        run_trials(config, 0, 0, brd_kernel));
  for (int n : config.n_values) {
    for (double alpha : config.alphas) {
      const std::vector<double> converged = column(result.records, 1, n, alpha);
      const std::vector<double> steps = column(result.records, 2, n, alpha);
      std::vector<double> converged_steps;
      for (std::size_t i = 0; i < steps.size(); ++i) {
        if (converged[i] == 1.0) converged_steps.push_back(steps[i]);
      }
      GroupSummary g{n, alpha, summarize(steps), {}};
      add_metric(g.metrics, "converged_fraction",
                 compensated_sum(converged) / static_cast<double>(converged.size()));
      add_metric(g.metrics, "steps_median",
                 converged_steps.empty() ? kNaN : median(converged_steps));
      add_metric(g.metrics, "steps_mean",
                 converged_steps.empty()
                     ? kNaN
                     : compensated_sum(converged_steps) / converged_steps.size());
      result.groups.push_back(std::move(g));
    }
  }
  roll_up_group_metrics(result);

  // Per-alpha median growth along increasing n.
  std::vector<int> sorted_n = config.n_values;
  std::sort(sorted_n.begin(), sorted_n.end());
  double nondecreasing = 1.0;
  double ratio = kNaN;
  for (std::size_t ai = 0; ai < config.alphas.size(); ++ai) {
    std::vector<double> medians;
    for (int n : sorted_n) {
      for (const auto& g : result.groups) {
        if (g.n == n && g.alpha == config.alphas[ai]) {
          medians.push_back(g.metrics[1].second);
        }
      }
    }
    for (std::size_t i = 0; i + 1 < medians.size(); ++i) {
      if (std::isnan(medians[i]) || std::isnan(medians[i + 1]) ||
          medians[i] > medians[i + 1]) {
        nondecreasing = 0.0;
      }
    }
    if (medians.size() >= 2 && medians.front() > 0.0) {
      const double r = medians.back() / medians.front();
      ratio = std::isnan(ratio) ? r : std::max(ratio, r);
    }
  }
  add_metric(result.metrics, "median_nondecreasing", nondecreasing);
  add_metric(result.metrics, "median_steps_ratio", ratio);
  evaluate_checks(result);
  return result;
}

// ---------------------------------------------------------------------------
// Registry, config parsing, serialization.

std::vector<std::string> experiment_names() {
  return {"mean-pne", "clt",      "clt-decay",     "spne",
          "isolated", "coupling", "accessibility", "brd-steps"};
}

ExperimentConfig default_config(const std::string& name) {
  ExperimentConfig cfg;
  cfg.name = name;
  auto require = [&](const std::string& text) {
    cfg.requirements.push_back(parse_requirement(text));
  };
  auto range = [](int lo, int hi) {
    std::vector<int> out;
    for (int n = lo; n <= hi; ++n) out.push_back(n);
    return out;
  };
  if (name == "mean-pne") {
    cfg.n_values = range(2, 15);
    cfg.alphas = {0.5};
    cfg.trials = 100;
    require("mean_within_4se_all >= 1");
  } else if (name == "clt") {
    cfg.n_values = {15};
    cfg.alphas = {0.9};
    cfg.trials = 500;
    require("ks_distance <= " + format_double(calib::kCltKsMax));
  } else if (name == "clt-decay") {
    cfg.n_values = {8, 16};
    cfg.alphas = {0.5};
    cfg.trials = 2000;
    cfg.meta_reps = 5;
    require("ks_decay >= 1");
  } else if (name == "spne") {
    cfg.n_values = {12};
    cfg.alphas = {0.0};
    cfg.trials = 2000;
    require("spne_mean >= " + format_double(calib::kPoissonMeanLo));
    require("spne_mean <= " + format_double(calib::kPoissonMeanHi));
    require("chi_square_ok >= 1");
  } else if (name == "isolated") {
    cfg.n_values = {10, 12};
    cfg.alphas = {0.5};  // open probability p
    cfg.trials = 2000;
    require("isolated_mean_min >= " + format_double(calib::kPoissonMeanLo));
    require("isolated_mean_max <= " + format_double(calib::kPoissonMeanHi));
    require("isolated_variance_min >= " + format_double(calib::kPoissonVarLo));
    require("isolated_variance_max <= " + format_double(calib::kPoissonVarHi));
    require("chi_square_ok_min >= 1");
    require("singleton_fraction_min >= " +
            format_double(calib::kSingletonFractionMin));
  } else if (name == "coupling") {
    cfg.n_values = {8, 10};
    cfg.alphas = {0.5};
    cfg.trials = 10000;
    cfg.marginal_runs = 100000;
    cfg.marginal_n = 3;
    require("exact_max_atom_diff <= " + format_double(calib::kExactAtomTol));
    require("explored_mismatch_count <= 0");
    require("ks_two_sample_max <= " + format_double(calib::kTwoSampleKsMax));
    require("edge_open_max_abs_z <= " + format_double(calib::kEdgeMarginalZMax));
    require("joint_chi_square_ok >= 1");
  } else if (name == "accessibility") {
    cfg.n_values = {14};
    cfg.alphas = {0.3, 0.5, 0.7};
    cfg.trials = 1000;
    require("all_accessible_fraction@n=14,alpha=0.3 >= " +
            format_double(calib::kAllAccessibleMin));
    require("unreachable_present_fraction@n=14,alpha=0.5 >= " +
            format_double(calib::kUnreachableCriticalMin));
    require("unreachable_present_fraction@n=14,alpha=0.7 >= " +
            format_double(calib::kUnreachableSupercritMin));
  } else if (name == "brd-steps") {
    cfg.n_values = range(8, 16);
    cfg.alphas = {0.5};
    cfg.trials = 100;
    require("converged_fraction_min >= " +
            format_double(calib::kBrdConvergenceMin));
    require("median_nondecreasing >= 1");
    require("median_steps_ratio <= " + format_double(calib::kBrdMedianRatioMax));
  } else {
    throw std::invalid_argument("unknown experiment '" + name + "'");
  }
  return cfg;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  if (config.name == "mean-pne") return exp_mean_pne(config);
  if (config.name == "clt") return exp_clt(config);
  if (config.name == "clt-decay") return exp_clt_decay(config);
  if (config.name == "spne") return exp_spne(config);
  if (config.name == "isolated") return exp_isolated(config);
  if (config.name == "coupling") return exp_coupling(config);
  if (config.name == "accessibility") return exp_accessibility(config);
  if (config.name == "brd-steps") return exp_brd(config);
  throw std::invalid_argument("unknown experiment '" + config.name + "'");
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  const auto dots = text.find("..");
  if (dots != std::string::npos) {
    const int lo = std::stoi(text.substr(0, dots));
    const int hi = std::stoi(text.substr(dots + 2));
    if (hi < lo) throw std::invalid_argument("empty range '" + text + "'");
    for (int n = lo; n <= hi; ++n) out.push_back(n);
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    trim(item);
    if (!item.empty()) out.push_back(std::stoi(item));
  }
  if (out.empty()) throw std::invalid_argument("empty list '" + text + "'");
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    trim(item);
    if (!item.empty()) out.push_back(std::stod(item));
  }
  if (out.empty()) throw std::invalid_argument("empty list '" + text + "'");
  return out;
}

ExperimentConfig parse_config(std::istream& is) {
  std::string line;
  int line_no = 0;
  std::string name;
  std::vector<std::pair<std::string, std::string>> entries;
  while (std::getline(is, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": expected 'key = value'");
    }
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    trim(key);
    trim(value);
    if (key == "experiment") {
      name = value;
    } else {
      entries.emplace_back(std::move(key), std::move(value));
    }
  }
  if (name.empty()) {
    throw std::invalid_argument("config is missing 'experiment = <name>'");
  }
  ExperimentConfig cfg = default_config(name);
  std::vector<Requirement> explicit_requires;
  for (const auto& [key, value] : entries) {
    if (key == "n") {
      cfg.n_values = parse_int_list(value);
    } else if (key == "alpha" || key == "p") {
      cfg.alphas = parse_double_list(value);
    } else if (key == "trials") {
      cfg.trials = std::stoll(value);
    } else if (key == "seed") {
      cfg.master_seed = std::stoull(value);
    } else if (key == "max_steps") {
      cfg.max_steps = std::stoull(value);
    } else if (key == "meta_reps") {
      cfg.meta_reps = std::stoi(value);
    } else if (key == "marginal_runs") {
      cfg.marginal_runs = std::stoll(value);
    } else if (key == "marginal_n") {
      cfg.marginal_n = std::stoi(value);
    } else if (key == "threads") {
      cfg.threads = std::stoi(value);
    } else if (key == "output") {
      cfg.output_prefix = value;
    } else if (key == "require") {
      explicit_requires.push_back(parse_requirement(value));
    } else {
      throw std::invalid_argument("unknown config key '" + key + "'");
    }
  }
  if (!explicit_requires.empty()) {
    cfg.requirements = std::move(explicit_requires);
  }
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::ios_base::failure("cannot open config: " + path);
  return parse_config(is);
}

std::string to_csv(const ExperimentResult& result) {
  std::string out = "# format=1\n";
  out += "experiment,n,alpha,trial,seed";
  for (const auto& c : result.columns) out += "," + c;
  out += "\n";
  for (const auto& r : result.records) {
    out += result.config.name;
    out += ',';
    out += std::to_string(r.n);
    out += ',';
    out += format_double(r.alpha);
    out += ',';
    out += std::to_string(r.trial);
    out += ',';
    out += std::to_string(r.seed);
    for (double v : r.values) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const ExperimentResult& result) {
  using json = nlohmann::ordered_json;
  json doc;
  doc["format"] = 1;
  doc["experiment"] = result.config.name;
  json cfg;
  cfg["n"] = result.config.n_values;
  cfg["alpha"] = result.config.alphas;
  cfg["trials"] = result.config.trials;
  cfg["seed"] = result.config.master_seed;
  cfg["max_steps"] = result.config.max_steps;
  cfg["meta_reps"] = result.config.meta_reps;
  cfg["marginal_runs"] = result.config.marginal_runs;
  cfg["marginal_n"] = result.config.marginal_n;
  doc["config"] = std::move(cfg);
  json groups = json::array();
  for (const auto& g : result.groups) {
    json jg;
    jg["n"] = g.n;
    jg["alpha"] = g.alpha;
    jg["count"] = g.stats.count;
    jg["mean"] = g.stats.mean;
    jg["variance"] = g.stats.variance;
    jg["se"] = g.stats.se;
    jg["interval"] = {g.stats.interval_lo, g.stats.interval_hi};
    jg["ks_distance"] =
        g.stats.ks_distance ? json(*g.stats.ks_distance) : json(nullptr);
    jg["chi_square"] =
        g.stats.chi_square ? json(*g.stats.chi_square) : json(nullptr);
    json metrics;
    for (const auto& [k, v] : g.metrics) metrics[k] = v;
    jg["metrics"] = std::move(metrics);
    groups.push_back(std::move(jg));
  }
  doc["groups"] = std::move(groups);
  json metrics;
  for (const auto& [k, v] : result.metrics) metrics[k] = v;
  doc["metrics"] = std::move(metrics);
  json checks = json::array();
  for (const auto& c : result.checks) {
    json jc;
    jc["require"] = to_string(c.req);
    jc["value"] = c.value;
    jc["pass"] = c.pass;
    checks.push_back(std::move(jc));
  }
  doc["checks"] = std::move(checks);
  return doc.dump(2) + "\n";
}

}  // namespace hypernash
