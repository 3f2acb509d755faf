// qudobench: encode, solve exactly, and benchmark QAOA on the six problem
// families, with one-hot binary and native d-ary encodings side by side.
//
// Exit codes: 0 ok, 2 bad arguments or config, 3 at least one requested cell
// was skipped because it exceeded the resource budget (rows still emitted,
// marked "skipped").

#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qudo/bench.hpp"

namespace {

using nlohmann::ordered_json;

struct CliOptions {
  std::string problem = "tsp";
  std::string encoding = "both";
  int n = 4;
  int k = 2;
  int depots = 2;
  std::vector<int> vehicles;
  std::vector<int> depths = {1};
  int restarts = 10;
  std::uint64_t seed = 0;
  int max_iters = 100;
  double initial_step = 0.5;
  double final_tolerance = 1e-4;
  double penalty_a = -1.0;  // <= 0: use derived defaults
  double penalty_b = -1.0;
  double penalty_c = -1.0;
  int workers = 1;
  std::uint64_t max_elements = qudo::kDefaultElementBudget;
  std::string format = "csv";
  std::string out = "-";
  std::string config_path;
  std::string instance_path;
  std::vector<int> n_list;  // sweep only
  std::vector<int> k_list;  // sweep only
};

void add_common_flags(CLI::App* cmd, CliOptions& opt) {
  cmd->add_option("--problem", opt.problem, "tsp|sdvrp|mdvrp|maxkcut|coloring|scheduling")
      ->check(CLI::IsMember({"tsp", "sdvrp", "mdvrp", "maxkcut", "coloring", "scheduling"}));
  cmd->add_option("--n", opt.n, "cities / customers / vertices / jobs");
  cmd->add_option("--k", opt.k, "partitions or colours (maxkcut, coloring)");
  cmd->add_option("--depots", opt.depots, "depot count (mdvrp)");
  cmd->add_option("--vehicles", opt.vehicles,
                  "vehicle counts: one value (sdvrp) or one per depot (mdvrp)");
  cmd->add_option("--seed", opt.seed, "instance and optimizer seed");
  cmd->add_option("--penalty-a", opt.penalty_a, "hard-constraint weight A (default: derived)");
  cmd->add_option("--penalty-b", opt.penalty_b, "secondary weight B (default: derived)");
  cmd->add_option("--penalty-c", opt.penalty_c, "tertiary weight C (default: derived)");
  cmd->add_option("--instance", opt.instance_path, "JSON instance file (overrides --n/--k/...)");
  cmd->add_option("--config", opt.config_path, "JSON config file; explicit flags win");
}

void add_run_flags(CLI::App* cmd, CliOptions& opt) {
  cmd->add_option("--encoding", opt.encoding, "qubo|qudo|both")
      ->check(CLI::IsMember({"qubo", "qudo", "both"}));
  cmd->add_option("--depth", opt.depths, "circuit depths p (repeatable)");
  cmd->add_option("--restarts", opt.restarts, "optimizer restarts per cell");
  cmd->add_option("--max-iters", opt.max_iters, "optimizer iteration cap");
  cmd->add_option("--initial-step", opt.initial_step, "optimizer initial step");
  cmd->add_option("--final-tolerance", opt.final_tolerance, "optimizer stopping step size");
  cmd->add_option("--workers", opt.workers, "restart worker threads");
  cmd->add_option("--max-elements", opt.max_elements, "dense statevector element budget");
  cmd->add_option("--format", opt.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", opt.out, "output path, or - for stdout");
}

/// Fills unset flags from a JSON config file: defaults < config < CLI.
void apply_config(const CLI::App* cmd, CliOptions& opt) {
  if (opt.config_path.empty()) return;
  std::ifstream file(opt.config_path);
  if (!file) throw std::invalid_argument("cannot open config '" + opt.config_path + "'");
  ordered_json j;
  file >> j;

  auto unset = [cmd](const std::string& flag) {
    const CLI::Option* o = cmd->get_option_no_throw(flag);
    return o == nullptr || o->count() == 0;
  };
  auto load = [&](const char* key, const std::string& flag, auto& field) {
    if (j.contains(key) && unset(flag)) j.at(key).get_to(field);
  };
  load("problem", "--problem", opt.problem);
  load("encoding", "--encoding", opt.encoding);
  load("n", "--n", opt.n);
  load("k", "--k", opt.k);
  load("depots", "--depots", opt.depots);
  load("vehicles", "--vehicles", opt.vehicles);
  load("depth", "--depth", opt.depths);
  load("restarts", "--restarts", opt.restarts);
  load("seed", "--seed", opt.seed);
  load("max_iters", "--max-iters", opt.max_iters);
  load("initial_step", "--initial-step", opt.initial_step);
  load("final_tolerance", "--final-tolerance", opt.final_tolerance);
  load("penalty_a", "--penalty-a", opt.penalty_a);
  load("penalty_b", "--penalty-b", opt.penalty_b);
  load("penalty_c", "--penalty-c", opt.penalty_c);
  load("workers", "--workers", opt.workers);
  load("max_elements", "--max-elements", opt.max_elements);
  load("format", "--format", opt.format);
  load("out", "--out", opt.out);
  load("n_list", "--n-list", opt.n_list);
  load("k_list", "--k-list", opt.k_list);
}

qudo::SizeParams size_from(const CliOptions& opt, qudo::Problem problem) {
  qudo::SizeParams size;
  size.n = opt.n;
  size.k = opt.k;
  if (problem == qudo::Problem::sdvrp) {
    size.vehicles = opt.vehicles.empty() ? std::vector<int>{1} : opt.vehicles;
    if (size.vehicles.size() != 1)
      throw std::invalid_argument("sdvrp takes exactly one --vehicles value");
  } else if (problem == qudo::Problem::mdvrp) {
    if (opt.vehicles.empty()) {
      size.vehicles.assign(opt.depots, 1);
    } else if (static_cast<int>(opt.vehicles.size()) == opt.depots) {
      size.vehicles = opt.vehicles;
    } else {
      throw std::invalid_argument("mdvrp needs one --vehicles value per depot");
    }
  }
  return size;
}

/// Partial overrides keep the derived defaults for the rest.
qudo::PenaltyWeights resolve_penalties(const CliOptions& opt, const qudo::ProblemInstance& inst) {
  qudo::PenaltyWeights w = qudo::default_penalties(inst);
  if (opt.penalty_a > 0.0) w.a = opt.penalty_a;
  if (opt.penalty_b > 0.0) w.b = opt.penalty_b;
  if (opt.penalty_c > 0.0) w.c = opt.penalty_c;
  return w;
}

bool any_penalty_override(const CliOptions& opt) {
  return opt.penalty_a > 0.0 || opt.penalty_b > 0.0 || opt.penalty_c > 0.0;
}

qudo::ProblemInstance resolve_instance(const CliOptions& opt, qudo::Problem problem) {
  if (opt.instance_path.empty())
    return qudo::generate_instance(problem, size_from(opt, problem), opt.seed);
  std::ifstream file(opt.instance_path);
  if (!file) throw std::invalid_argument("cannot open instance '" + opt.instance_path + "'");
  ordered_json j;
  file >> j;
  const qudo::ProblemInstance inst = qudo::instance_from_json(j);
  if (qudo::problem_of(inst) != problem)
    throw std::invalid_argument("instance file problem does not match --problem");
  return inst;
}

std::vector<qudo::Encoding> encodings_from(const std::string& name) {
  if (name == "qubo") return {qudo::Encoding::qubo};
  if (name == "qudo") return {qudo::Encoding::qudo};
  return {qudo::Encoding::qubo, qudo::Encoding::qudo};
}

void write_text(const std::string& payload, const std::string& destination) {
  if (destination == "-") {
    std::cout << payload;
    return;
  }
  std::ofstream file(destination, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open '" + destination + "' for writing");
  file << payload;
}

ordered_json dary_summary(const qudo::DAryQuadraticModel& model) {
  std::size_t linear_terms = 0;
  for (double v : model.linear)
    if (v != 0.0) ++linear_terms;
  std::size_t quadratic_terms = 0;
  for (const auto& [sites, table] : model.quadratic)
    for (double v : table)
      if (v != 0.0) ++quadratic_terms;
  ordered_json j;
  j["sites"] = model.num_sites;
  j["local_dim"] = model.local_dim;
  j["dimension"] = model.dimension();
  j["offset"] = model.offset;
  j["linear_terms"] = linear_terms;
  j["quadratic_terms"] = quadratic_terms;
  return j;
}

ordered_json qubo_summary(const qudo::QuboModel& model) {
  std::size_t linear_terms = 0;
  std::size_t quadratic_terms = 0;
  for (int i = 0; i < model.num_vars; ++i)
    for (int j = i; j < model.num_vars; ++j) {
      if (model.coefficient(i, j) == 0.0) continue;
      (i == j ? linear_terms : quadratic_terms)++;
    }
  ordered_json j;
  j["variables"] = model.num_vars;
  j["dimension"] = qudo::u128_to_string(
      model.num_vars >= 128 ? ~static_cast<unsigned __int128>(0)
                            : (static_cast<unsigned __int128>(1) << model.num_vars));
  j["offset"] = model.offset;
  j["linear_terms"] = linear_terms;
  j["quadratic_terms"] = quadratic_terms;
  return j;
}

int cmd_encode(const CliOptions& opt) {
  const qudo::Problem problem = qudo::problem_from_string(opt.problem);
  const qudo::ProblemInstance inst = resolve_instance(opt, problem);
  const qudo::PenaltyWeights weights = resolve_penalties(opt, inst);

  ordered_json j;
  j["problem"] = qudo::to_string(qudo::problem_of(inst));
  j["instance"] = qudo::instance_to_json(inst);
  j["penalties"] = {{"a", weights.a}, {"b", weights.b}, {"c", weights.c}};
  const auto encodings = encodings_from(opt.encoding);
  for (const qudo::Encoding enc : encodings) {
    if (enc == qudo::Encoding::qudo)
      j["qudo"] = dary_summary(qudo::encode_qudo(inst, weights));
    else
      j["qubo"] = qubo_summary(qudo::encode_qubo(inst, weights));
  }
  write_text(j.dump(2) + "\n", opt.out);
  return 0;
}

int cmd_exact(const CliOptions& opt) {
  const qudo::Problem problem = qudo::problem_from_string(opt.problem);
  const qudo::ProblemInstance inst = resolve_instance(opt, problem);
  const qudo::ExactResult exact = qudo::brute_force_optimum(inst);

  ordered_json j;
  j["problem"] = qudo::to_string(qudo::problem_of(inst));
  j["sense"] = exact.sense == qudo::Sense::maximize ? "maximize" : "minimize";
  j["optimal_value"] = exact.optimal_value;
  j["num_optimal"] = exact.optimizers.size();
  ordered_json solutions = ordered_json::array();
  for (const auto& seq : exact.optimizers) solutions.push_back(seq);
  j["optimal_solutions"] = solutions;
  write_text(j.dump(2) + "\n", opt.out);
  return 0;
}

qudo::ExperimentConfig experiment_from(const CliOptions& opt, qudo::Problem problem) {
  qudo::ExperimentConfig cfg;
  cfg.problem = problem;
  cfg.size = size_from(opt, problem);
  cfg.encodings = encodings_from(opt.encoding);
  cfg.depths = opt.depths;
  cfg.optimizer.max_iterations = opt.max_iters;
  cfg.optimizer.initial_step = opt.initial_step;
  cfg.optimizer.final_tolerance = opt.final_tolerance;
  cfg.optimizer.restarts = opt.restarts;
  cfg.optimizer.seed = opt.seed;
  cfg.instance_seed = opt.seed;
  cfg.workers = opt.workers;
  cfg.max_elements = opt.max_elements;
  return cfg;
}

int cmd_run(const CliOptions& opt) {
  const qudo::Problem problem = qudo::problem_from_string(opt.problem);
  qudo::ExperimentConfig cfg = experiment_from(opt, problem);
  std::optional<qudo::ProblemInstance> fixed;
  if (!opt.instance_path.empty()) fixed = resolve_instance(opt, problem);
  if (any_penalty_override(opt))
    cfg.penalties = resolve_penalties(opt, fixed ? *fixed : qudo::generate_instance(
                                                                problem, cfg.size, cfg.instance_seed));
  const auto rows = qudo::run_experiment(cfg, fixed);
  qudo::emit(rows, opt.format, opt.out);
  return qudo::any_skipped(rows) ? 3 : 0;
}

int cmd_sweep(const CliOptions& opt) {
  if (!opt.instance_path.empty())
    throw std::invalid_argument("sweep generates its instances; --instance is not allowed");
  if (any_penalty_override(opt))
    throw std::invalid_argument("sweep derives penalties per instance; fixed overrides are not allowed");
  const qudo::Problem problem = qudo::problem_from_string(opt.problem);
  qudo::SweepConfig sweep_cfg;
  sweep_cfg.base = experiment_from(opt, problem);
  sweep_cfg.n_values = opt.n_list;
  sweep_cfg.k_values = opt.k_list;
  const auto rows = qudo::sweep(sweep_cfg);
  qudo::emit(rows, opt.format, opt.out);
  return qudo::any_skipped(rows) ? 3 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"QAOA benchmarks for binary vs d-ary encodings of combinatorial problems"};
  app.require_subcommand(1);
  CliOptions opt;

  CLI::App* encode = app.add_subcommand("encode", "print an encoding summary");
  add_common_flags(encode, opt);
  encode->add_option("--encoding", opt.encoding, "qubo|qudo|both")
      ->check(CLI::IsMember({"qubo", "qudo", "both"}));
  encode->add_option("--out", opt.out, "output path, or - for stdout");

  CLI::App* exact = app.add_subcommand("exact", "brute-force optimum and optimal solutions");
  add_common_flags(exact, opt);
  exact->add_option("--out", opt.out, "output path, or - for stdout");

  CLI::App* run = app.add_subcommand("run", "benchmark one instance");
  add_common_flags(run, opt);
  add_run_flags(run, opt);

  CLI::App* sweep = app.add_subcommand("sweep", "benchmark a grid of sizes");
  add_common_flags(sweep, opt);
  add_run_flags(sweep, opt);
  sweep->add_option("--n-list", opt.n_list, "problem sizes to sweep (repeatable)");
  sweep->add_option("--k-list", opt.k_list, "partition/colour counts to sweep (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    CLI::App* cmd = app.get_subcommands().front();
    apply_config(cmd, opt);
    if (cmd == encode) return cmd_encode(opt);
    if (cmd == exact) return cmd_exact(opt);
    if (cmd == run) return cmd_run(opt);
    return cmd_sweep(opt);
  } catch (const qudo::resource_limit_error& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
