// hypernash: sample random two-action games as partially oriented hypercubes,
// enumerate pure equilibria, run best-response dynamics, and drive the
// Monte Carlo experiment suite.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <openssl/evp.h>

#include "hypernash/dynamics.hpp"
#include "hypernash/equilibrium.hpp"
#include "hypernash/experiments.hpp"
#include "hypernash/instance_io.hpp"
#include "hypernash/percolation.hpp"
#include "hypernash/randgame.hpp"

namespace {

using namespace hypernash;

// Exit codes: 0 success, 1 usage/validation, 2 acceptance-threshold failure,
// 3 I/O failure.
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitThreshold = 2;
constexpr int kExitIo = 3;

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(),
                 nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::ios_base::failure("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::ios_base::failure("cannot open for writing: " + path);
  os << bytes;
  os.flush();
  if (!os) throw std::ios_base::failure("write failed: " + path);
}

// "uniform:v1,v2,..." (equal masses) or "atoms:v1:p1,v2:p2,...".
DiscreteDistribution parse_dist(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) {
    throw std::invalid_argument("distribution spec needs 'uniform:...' or 'atoms:...'");
  }
  const std::string kind = spec.substr(0, colon);
  const std::string body = spec.substr(colon + 1);
  std::vector<double> support, probs;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (kind == "uniform") {
      support.push_back(std::stod(item));
    } else if (kind == "atoms") {
      const auto sep = item.find(':');
      if (sep == std::string::npos) {
        throw std::invalid_argument("atom '" + item + "' needs value:prob");
      }
      support.push_back(std::stod(item.substr(0, sep)));
      probs.push_back(std::stod(item.substr(sep + 1)));
    } else {
      throw std::invalid_argument("unknown distribution kind '" + kind + "'");
    }
  }
  if (kind == "uniform") return DiscreteDistribution::uniform(std::move(support));
  return DiscreteDistribution(std::move(support), std::move(probs));
}

std::string vertex_list(const std::vector<VertexId>& vs) {
  std::string out = "[";
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(vs[i]);
  }
  return out + "]";
}

struct GenOptions {
  int n = 3;
  std::optional<double> alpha;
  std::string dist;
  std::string out;
};

int cmd_gen(const GenOptions& opt, std::uint64_t seed) {
  const Dimension dim(opt.n);
  OrientedCube cube{dim, {}, std::nullopt};
  if (opt.alpha && !opt.dist.empty()) {
    throw std::invalid_argument("give either --alpha or --dist, not both");
  }
  if (opt.alpha) {
    cube = sample_marks(dim, TieParameter(*opt.alpha), seed);
  } else if (!opt.dist.empty()) {
    const DiscreteDistribution dist = parse_dist(opt.dist);
    cube = marks_of(sample_payoffs(dim, dist, seed), alpha_of(dist));
  } else {
    throw std::invalid_argument("gen needs --alpha or --dist");
  }
  std::ostringstream body;
  write_instance(body, cube);
  write_file(opt.out, body.str());
  std::cout << "wrote " << opt.out << "\n"
            << "sha256=" << sha256_hex(body.str()) << "\n";
  return kExitOk;
}

int cmd_analyze(const std::string& path) {
  const OrientedCube cube = load_instance(path);
  const EquilibriumReport report = enumerate_equilibria(cube);
  const std::vector<VertexId> ties = all_tie_vertices(cube);
  std::cout << "n=" << cube.dim.n() << "\n"
            << "alpha=" << (cube.alpha ? format_double(*cube.alpha) : "unknown")
            << "\n"
            << "pne_count=" << report.pne_count()
            << " spne_count=" << report.spne_count() << "\n"
            << "all_tie_count=" << ties.size() << "\n"
            << "pne=" << vertex_list(report.pne) << "\n"
            << "spne=" << vertex_list(report.spne) << "\n";
  return kExitOk;
}

int cmd_brd(const std::string& path, std::uint32_t start, std::uint64_t seed,
            std::uint64_t max_steps) {
  const OrientedCube cube = load_instance(path);
  if (start >= cube.dim.vertex_count()) {
    throw std::invalid_argument("start vertex " + std::to_string(start) +
                                " outside [0, " +
                                std::to_string(cube.dim.vertex_count()) + ")");
  }
  if (max_steps == 0) max_steps = default_brd_max_steps(cube.dim);
  const BrdTrace trace = brd_run(cube, start, seed, max_steps);
  std::cout << "start=" << trace.start << "\n" << "path=";
  for (std::size_t i = 0; i < trace.path.size(); ++i) {
    if (i) std::cout << ' ';
    std::cout << trace.path[i];
  }
  std::cout << "\n" << "steps=" << trace.steps << "\n";
  if (trace.outcome == BrdTrace::Outcome::Converged) {
    std::cout << "outcome=converged\n" << "equilibrium=" << trace.last << "\n";
  } else {
    std::cout << "outcome=step-limit\n" << "last=" << trace.last << "\n";
  }
  return kExitOk;
}

int cmd_access(const std::string& path, std::uint32_t start) {
  const OrientedCube cube = load_instance(path);
  if (start >= cube.dim.vertex_count()) {
    throw std::invalid_argument("start vertex " + std::to_string(start) +
                                " outside [0, " +
                                std::to_string(cube.dim.vertex_count()) + ")");
  }
  const AccessPartition part = accessible_set(cube, start);
  const std::vector<VertexId> unreachable = unreachable_equilibria(cube, start);
  std::cout << "start=" << start << "\n"
            << "accessible_count=" << part.accessible_count() << "\n"
            << "inaccessible_count="
            << cube.dim.vertex_count() - part.accessible_count() << "\n"
            << "unreachable_pne_count=" << unreachable.size() << "\n"
            << "unreachable_pne=" << vertex_list(unreachable) << "\n"
            << "all_tie_count=" << all_tie_vertices(cube).size() << "\n";
  return kExitOk;
}

int cmd_perc_gen(int n, double p, std::uint64_t seed, const std::string& out) {
  const BondConfig bond = sample_bond(Dimension(n), p, seed);
  std::ostringstream body;
  write_bond(body, bond);
  write_file(out, body.str());
  std::cout << "wrote " << out << "\n"
            << "sha256=" << sha256_hex(body.str()) << "\n";
  return kExitOk;
}

int cmd_perc_components(const std::string& path) {
  const BondConfig bond = load_bond(path);
  const ComponentStats stats = components(bond);
  std::cout << "n=" << bond.dim.n() << "\n"
            << "p=" << (bond.p ? format_double(*bond.p) : "derived") << "\n"
            << "component_count=" << stats.sizes.size() << "\n"
            << "largest_size=" << stats.largest_size << "\n"
            << "isolated_count=" << stats.isolated_count << "\n";
  std::cout << "sizes=[";
  for (std::size_t i = 0; i < stats.sizes.size(); ++i) {
    if (i) std::cout << ' ';
    std::cout << stats.sizes[i];
  }
  std::cout << "]\n";
  return kExitOk;
}

int cmd_perc_couple(const std::string& path, std::uint32_t start,
                    std::uint64_t seed, const std::string& out) {
  const OrientedCube cube = load_instance(path);
  if (start >= cube.dim.vertex_count()) {
    throw std::invalid_argument("start vertex out of range");
  }
  const CouplingOutput coupling = coupled_percolation(cube, start, seed);
  const AccessPartition part = accessible_set(cube, start);
  const bool matches = coupling.explored == part.accessible();
  const bool cluster_ok = cluster_of(coupling.bond, start) == coupling.explored;
  std::cout << "start=" << start << "\n"
            << "explored_count=" << coupling.explored.count() << "\n"
            << "rounds=" << coupling.rounds << "\n"
            << "matches_accessible=" << (matches ? 1 : 0) << "\n"
            << "cluster_matches_explored=" << (cluster_ok ? 1 : 0) << "\n";
  if (!out.empty()) {
    std::ostringstream body;
    write_bond(body, coupling.bond);
    write_file(out, body.str());
    std::cout << "wrote " << out << "\n";
  }
  return kExitOk;
}

int cmd_experiment(const std::string& name, const std::string& config_path,
                   const std::string& out_prefix, const std::string& format,
                   std::optional<std::int64_t> trials,
                   std::optional<std::uint64_t> seed, std::optional<int> threads) {
  ExperimentConfig config =
      config_path.empty() ? default_config(name) : parse_config_file(config_path);
  if (!config_path.empty() && !name.empty() && config.name != name) {
    throw std::invalid_argument("config is for experiment '" + config.name +
                                "', not '" + name + "'");
  }
  if (trials) config.trials = *trials;
  if (seed) config.master_seed = *seed;
  if (threads) config.threads = *threads;
  if (!out_prefix.empty()) config.output_prefix = out_prefix;
  if (config.output_prefix.empty()) config.output_prefix = config.name;

  const ExperimentResult result = run_experiment(config);

  std::cout << "experiment=" << config.name << "\n"
            << "trials=" << config.trials << " seed=" << config.master_seed
            << "\n";
  if (format == "csv" || format == "both") {
    const std::string path = config.output_prefix + ".csv";
    write_file(path, to_csv(result));
    std::cout << "wrote " << path << "\n";
  }
  if (format == "json" || format == "both") {
    const std::string path = config.output_prefix + ".json";
    write_file(path, to_json(result));
    std::cout << "wrote " << path << "\n";
  }
  for (const auto& check : result.checks) {
    std::cout << "check \"" << to_string(check.req)
              << "\" value=" << format_double(check.value) << " "
              << (check.pass ? "pass" : "FAIL") << "\n";
  }
  std::cout << "result=" << (result.passed() ? "pass" : "fail") << "\n";
  return result.passed() ? kExitOk : kExitThreshold;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"random two-action games on the hypercube"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  app.add_option("--seed", seed, "master seed (env HYPERNASH_SEED, flag wins)")
      ->envname("HYPERNASH_SEED");
  int threads = 1;
  app.add_option("--threads", threads, "worker threads (never changes output)");

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "sample an instance file");
  gen_cmd->add_option("--n", gen.n, "number of players")->required();
  double gen_alpha = 0.0;
  auto* alpha_opt = gen_cmd->add_option("--alpha", gen_alpha, "tie probability");
  gen_cmd->add_option("--dist", gen.dist,
                      "payoff law, uniform:v1,v2,... or atoms:v:p,...");
  gen_cmd->add_option("--out", gen.out, "output path")->required();

  std::string analyze_path;
  auto* analyze_cmd = app.add_subcommand("analyze", "equilibria of an instance");
  analyze_cmd->add_option("file", analyze_path, "instance file")->required();

  std::string brd_path;
  std::uint32_t brd_start = 0;
  std::uint64_t brd_max_steps = 0;
  auto* brd_cmd = app.add_subcommand("brd", "run best-response dynamics");
  brd_cmd->add_option("file", brd_path, "instance file")->required();
  brd_cmd->add_option("--start", brd_start, "start vertex")->required();
  brd_cmd->add_option("--max-steps", brd_max_steps, "move budget (0 = 64*n*2^n)");

  std::string access_path;
  std::uint32_t access_start = 0;
  auto* access_cmd = app.add_subcommand("access", "accessible set of a vertex");
  access_cmd->add_option("file", access_path, "instance file")->required();
  access_cmd->add_option("--start", access_start, "start vertex")->required();

  auto* perc_cmd = app.add_subcommand("perc", "bond percolation tools");
  perc_cmd->require_subcommand(1);
  int perc_n = 3;
  double perc_p = 0.5;
  std::string perc_out;
  auto* perc_gen_cmd = perc_cmd->add_subcommand("gen", "sample a bond file");
  perc_gen_cmd->add_option("--n", perc_n, "number of players")->required();
  perc_gen_cmd->add_option("--p", perc_p, "open probability")->required();
  perc_gen_cmd->add_option("--out", perc_out, "output path")->required();
  std::string perc_comp_path;
  auto* perc_comp_cmd =
      perc_cmd->add_subcommand("components", "connected components of a bond file");
  perc_comp_cmd->add_option("file", perc_comp_path, "bond file")->required();
  std::string couple_path, couple_out;
  std::uint32_t couple_start = 0;
  auto* perc_couple_cmd = perc_cmd->add_subcommand(
      "couple", "couple an instance with a Bernoulli(beta) bond field");
  perc_couple_cmd->add_option("file", couple_path, "instance file")->required();
  perc_couple_cmd->add_option("--start", couple_start, "start vertex")->required();
  perc_couple_cmd->add_option("--out", couple_out, "write the coupled bond file");

  std::string exp_name, exp_config, exp_out;
  std::string exp_format = "both";
  std::int64_t exp_trials = -1;
  auto* exp_cmd = app.add_subcommand("experiment", "run a named experiment");
  exp_cmd->add_option("name", exp_name, "experiment name")->required(false);
  exp_cmd->add_option("--config", exp_config, "flat key = value config file");
  exp_cmd->add_option("--out", exp_out, "output prefix for .csv/.json");
  exp_cmd->add_option("--format", exp_format, "csv|json|both")
      ->check(CLI::IsMember({"csv", "json", "both"}));
  exp_cmd->add_option("--trials", exp_trials, "override trial count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen_cmd->parsed()) {
      if (alpha_opt->count() > 0) gen.alpha = gen_alpha;
      return cmd_gen(gen, seed);
    }
    if (analyze_cmd->parsed()) return cmd_analyze(analyze_path);
    if (brd_cmd->parsed()) return cmd_brd(brd_path, brd_start, seed, brd_max_steps);
    if (access_cmd->parsed()) return cmd_access(access_path, access_start);
    if (perc_cmd->parsed()) {
      if (perc_gen_cmd->parsed()) return cmd_perc_gen(perc_n, perc_p, seed, perc_out);
      if (perc_comp_cmd->parsed()) return cmd_perc_components(perc_comp_path);
      if (perc_couple_cmd->parsed()) {
        return cmd_perc_couple(couple_path, couple_start, seed, couple_out);
      }
    }
    if (exp_cmd->parsed()) {
      if (exp_name.empty() && exp_config.empty()) {
        throw std::invalid_argument("experiment needs a name or --config");
      }
      return cmd_experiment(
          exp_name, exp_config, exp_out, exp_format,
          exp_trials >= 0 ? std::optional<std::int64_t>(exp_trials) : std::nullopt,
          app.count("--seed") || std::getenv("HYPERNASH_SEED")
              ? std::optional<std::uint64_t>(seed)
              : std::nullopt,
          app.count("--threads") ? std::optional<int>(threads) : std::nullopt);
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
