#ifndef HYPERNASH_EXPERIMENTS_HPP
#define HYPERNASH_EXPERIMENTS_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "hypernash/stats.hpp"

namespace hypernash {

/// Desk-scale Monte Carlo gates used by the default experiment configs. The
/// laws being checked are asymptotic; these finite-size tolerances are
/// calibrated for the default n ranges and trial counts.
namespace calib {
inline constexpr double kCltKsMax = 0.08;           // n=15, alpha=0.9, 500 trials
inline constexpr double kPoissonMeanLo = 0.85;      // Poisson(1) mean, 2000 trials
inline constexpr double kPoissonMeanHi = 1.15;
inline constexpr double kPoissonVarLo = 0.8;        // Poisson(1) variance, 2000 trials
inline constexpr double kPoissonVarHi = 1.25;
inline constexpr double kSingletonFractionMin = 0.9;   // p=1/2, n >= 10
inline constexpr double kTwoSampleKsMax = 0.03;        // 10^4 vs 10^4 samples
inline constexpr double kExactAtomTol = 1e-12;         // closed-form enumeration
inline constexpr double kEdgeMarginalZMax = 4.0;       // binomial z-score gate
inline constexpr double kAllAccessibleMin = 0.95;      // alpha=0.3, n=14
inline constexpr double kUnreachableCriticalMin = 0.3; // alpha=0.5, n=14
inline constexpr double kUnreachableSupercritMin = 0.9;// alpha=0.7, n=14
inline constexpr double kBrdConvergenceMin = 0.98;     // alpha <= 0.55, n <= 16
inline constexpr double kBrdMedianRatioMax = 16.0;     // median(n=16)/median(n=8)
}  // namespace calib

struct Requirement {
  enum class Op { LE, GE, LT, GT, EQ };
  std::string metric;
  Op op;
  double value;
};

Requirement parse_requirement(const std::string& text);
std::string to_string(const Requirement& req);

/// One experiment invocation. `alphas` carries the tie parameter, or the open
/// probability p for percolation experiments. Everything an experiment emits
/// is a pure function of this struct (threads affect wall time only).
struct ExperimentConfig {
  std::string name;
  std::vector<int> n_values;
  std::vector<double> alphas{0.5};
  std::int64_t trials = 1;
  std::uint64_t master_seed = 0;
  std::uint64_t max_steps = 0;   // 0 = default budget 64 * n * 2^n
  int meta_reps = 1;             // clt-decay repetitions
  std::int64_t marginal_runs = 100000;  // coupling edge-marginal sample size
  int marginal_n = 3;
  int threads = 1;
  std::string output_prefix;
  std::vector<Requirement> requirements;
};

/// Per-trial observables. Deterministic function of (experiment, config,
/// group, trial index); `values` matches the experiment's column list.
struct TrialRecord {
  int n;
  double alpha;
  std::int64_t trial;
  std::uint64_t seed;
  std::vector<double> values;
};

struct GroupSummary {
  int n;
  double alpha;
  SummaryStats stats;  // of the experiment's primary observable
  std::vector<std::pair<std::string, double>> metrics;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<std::string> columns;
  std::vector<TrialRecord> records;
  std::vector<GroupSummary> groups;
  std::vector<std::pair<std::string, double>> metrics;

  struct Check {
    Requirement req;
    double value;
    bool pass;
  };
  std::vector<Check> checks;

  bool passed() const;
  double metric(const std::string& name) const;  // throws on unknown name
};

/// Runs `trials` kernels per (n, alpha) group, in parallel over
/// config.threads workers. Trial seeds derive from (master_seed, name, part,
/// n, stream, trial), so records are byte-identical for any thread count and
/// are emitted in (n, alpha, trial) order.
using TrialKernel =
    std::vector<double> (*)(const ExperimentConfig&, int n, double alpha,
                            std::uint64_t seed);
std::vector<TrialRecord> run_trials(const ExperimentConfig& config, int part,
                                    int stream, const TrialKernel& kernel);

std::uint64_t trial_seed(const ExperimentConfig& config, int part, int n,
                         int stream, std::int64_t trial);

ExperimentResult exp_mean_pne(const ExperimentConfig& config);
ExperimentResult exp_clt(const ExperimentConfig& config);
ExperimentResult exp_clt_decay(const ExperimentConfig& config);
ExperimentResult exp_spne(const ExperimentConfig& config);
ExperimentResult exp_isolated(const ExperimentConfig& config);
ExperimentResult exp_coupling(const ExperimentConfig& config);
ExperimentResult exp_accessibility(const ExperimentConfig& config);
ExperimentResult exp_brd(const ExperimentConfig& config);

std::vector<std::string> experiment_names();
ExperimentConfig default_config(const std::string& name);
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Flat "key = value" config text. Keys: experiment, n (list or a..b range),
/// alpha, trials, seed, max_steps, meta_reps, marginal_runs, marginal_n,
/// threads, output, require (repeatable; replaces the defaults when present).
ExperimentConfig parse_config(std::istream& is);
ExperimentConfig parse_config_file(const std::string& path);

std::vector<int> parse_int_list(const std::string& text);
std::vector<double> parse_double_list(const std::string& text);

std::string to_csv(const ExperimentResult& result);
std::string to_json(const ExperimentResult& result);

}  // namespace hypernash

#endif  // HYPERNASH_EXPERIMENTS_HPP
