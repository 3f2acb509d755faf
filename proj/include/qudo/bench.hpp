#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <queue>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include <json.hpp>

#include "qudo/core.hpp"
#include "qudo/dary_model.hpp"
#include "qudo/encoders.hpp"
#include "qudo/optimizer.hpp"
#include "qudo/oracle.hpp"
#include "qudo/problems.hpp"
#include "qudo/simulator.hpp"

namespace qudo {

enum class Problem { tsp, sdvrp, mdvrp, max_k_cut, coloring, scheduling };

inline std::string to_string(Problem p) {
  switch (p) {
    case Problem::tsp: return "tsp";
    case Problem::sdvrp: return "sdvrp";
    case Problem::mdvrp: return "mdvrp";
    case Problem::max_k_cut: return "maxkcut";
    case Problem::coloring: return "coloring";
    case Problem::scheduling: return "scheduling";
  }
  throw std::invalid_argument("unknown problem tag");
}

inline Problem problem_from_string(const std::string& name) {
  if (name == "tsp") return Problem::tsp;
  if (name == "sdvrp") return Problem::sdvrp;
  if (name == "mdvrp") return Problem::mdvrp;
  if (name == "maxkcut") return Problem::max_k_cut;
  if (name == "coloring") return Problem::coloring;
  if (name == "scheduling") return Problem::scheduling;
  throw std::invalid_argument("unknown problem '" + name + "'");
}

/// Size knobs; which ones matter depends on the problem. `vehicles` holds V
/// for the single-depot VRP and the per-depot list (one entry per depot) for
/// the multi-depot VRP.
struct SizeParams {
  int n = 0;
  int k = 0;
  std::vector<int> vehicles;
};

// --- instance generation -----------------------------------------------------

namespace detail {

/// Symmetric zero-diagonal matrix with off-diagonal entries drawn uniformly
/// from the half-integer grid {0.5, 1.0, ..., 10.0}, upper triangle first.
inline std::vector<std::vector<double>> random_distances(std::mt19937_64& rng, int nodes) {
  std::vector<std::vector<double>> d(nodes, std::vector<double>(nodes, 0.0));
  for (int i = 0; i < nodes; ++i)
    for (int j = i + 1; j < nodes; ++j) d[i][j] = d[j][i] = 0.5 * (1 + uniform_int(rng, 0, 19));
  return d;
}

inline bool is_connected(int n, const std::vector<std::pair<int, int>>& edges) {
  if (n <= 1) return true;
  std::vector<std::vector<int>> adj(n);
  for (auto [u, v] : edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  std::vector<char> seen(n, 0);
  std::queue<int> frontier;
  frontier.push(0);
  seen[0] = 1;
  int reached = 1;
  while (!frontier.empty()) {
    const int u = frontier.front();
    frontier.pop();
    for (int v : adj[u])
      if (!seen[v]) {
        seen[v] = 1;
        ++reached;
        frontier.push(v);
      }
  }
  return reached == n;
}

/// Erdos-Renyi edges with p = 1/2 over the allowed vertex pairs, resampled
/// whole until the graph is connected.
inline std::vector<std::pair<int, int>> random_connected_edges(
    std::mt19937_64& rng, int n, const std::function<bool(int, int)>& allowed) {
  while (true) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (allowed(i, j) && uniform_double(rng) < 0.5) edges.push_back({i, j});
    if (is_connected(n, edges)) return edges;
  }
}

}  // namespace detail

inline TspInstance generate_tsp(int n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("generate: tsp needs n >= 2");
  std::mt19937_64 rng(seed);
  TspInstance inst{detail::random_distances(rng, n)};
  validate(ProblemInstance(inst));
  return inst;
}

inline SdvrpInstance generate_sdvrp(int n, int vehicles, std::uint64_t seed) {
  if (n < 1 || vehicles < 1) throw std::invalid_argument("generate: sdvrp needs n, v >= 1");
  std::mt19937_64 rng(seed);
  SdvrpInstance inst{detail::random_distances(rng, n + 1), vehicles};
  validate(ProblemInstance(inst));
  return inst;
}

inline MdvrpInstance generate_mdvrp(int n, const std::vector<int>& vehicles_per_depot,
                                    std::uint64_t seed) {
  if (n < 1 || vehicles_per_depot.empty())
    throw std::invalid_argument("generate: mdvrp needs n >= 1 and at least one depot");
  std::mt19937_64 rng(seed);
  const int nodes = n + static_cast<int>(vehicles_per_depot.size());
  MdvrpInstance inst{detail::random_distances(rng, nodes), n, vehicles_per_depot};
  validate(ProblemInstance(inst));
  return inst;
}

inline MaxKCutInstance generate_max_k_cut(int n, int k, std::uint64_t seed) {
  if (n < 2 || k < 2) throw std::invalid_argument("generate: maxkcut needs n >= 2, k >= 2");
  std::mt19937_64 rng(seed);
  MaxKCutInstance inst;
  inst.num_vertices = n;
  inst.partitions = k;
  inst.edges = detail::random_connected_edges(rng, n, [](int, int) { return true; });
  validate(ProblemInstance(inst));
  return inst;
}

/// Planted colouring: vertices are split into k nonempty groups and only
/// cross-group edges are allowed, so a proper k-colouring exists and the
/// ground energy is zero.
inline ColoringInstance generate_coloring(int n, int k, std::uint64_t seed) {
  if (k < 2) throw std::invalid_argument("generate: coloring needs k >= 2");
  if (k > n) throw std::invalid_argument("generate: planted coloring needs k <= n");
  std::mt19937_64 rng(seed);
  std::vector<int> group(n);
  for (int v = 0; v < k; ++v) group[v] = v;  // every group nonempty
  for (int v = k; v < n; ++v) group[v] = uniform_int(rng, 0, k - 1);
  ColoringInstance inst;
  inst.num_vertices = n;
  inst.colors = k;
  inst.edges = detail::random_connected_edges(
      rng, n, [&group](int i, int j) { return group[i] != group[j]; });
  validate(ProblemInstance(inst));
  return inst;
}

inline SchedulingInstance generate_scheduling(int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("generate: scheduling needs n >= 1");
  std::mt19937_64 rng(seed);
  SchedulingInstance inst;
  inst.processing.resize(n);
  inst.weights.resize(n);
  for (int i = 0; i < n; ++i) inst.processing[i] = uniform_int(rng, 1, 9);
  for (int i = 0; i < n; ++i) inst.weights[i] = uniform_int(rng, 1, 9);
  validate(ProblemInstance(inst));
  return inst;
}

inline ProblemInstance generate_instance(Problem problem, const SizeParams& size,
                                         std::uint64_t seed) {
  switch (problem) {
    case Problem::tsp: return generate_tsp(size.n, seed);
    case Problem::sdvrp: {
      if (size.vehicles.size() != 1)
        throw std::invalid_argument("generate: sdvrp takes exactly one vehicle count");
      return generate_sdvrp(size.n, size.vehicles[0], seed);
    }
    case Problem::mdvrp: return generate_mdvrp(size.n, size.vehicles, seed);
    case Problem::max_k_cut: return generate_max_k_cut(size.n, size.k, seed);
    case Problem::coloring: return generate_coloring(size.n, size.k, seed);
    case Problem::scheduling: return generate_scheduling(size.n, seed);
  }
  throw std::invalid_argument("unknown problem tag");
}

inline Problem problem_of(const ProblemInstance& instance) {
  return std::visit(
      [](const auto& inst) {
        using T = std::decay_t<decltype(inst)>;
        if constexpr (std::is_same_v<T, TspInstance>) return Problem::tsp;
        else if constexpr (std::is_same_v<T, SdvrpInstance>) return Problem::sdvrp;
        else if constexpr (std::is_same_v<T, MdvrpInstance>) return Problem::mdvrp;
        else if constexpr (std::is_same_v<T, MaxKCutInstance>) return Problem::max_k_cut;
        else if constexpr (std::is_same_v<T, ColoringInstance>) return Problem::coloring;
        else return Problem::scheduling;
      },
      instance);
}

inline SizeParams size_of(const ProblemInstance& instance) {
  return std::visit(
      [](const auto& inst) {
        using T = std::decay_t<decltype(inst)>;
        SizeParams s;
        if constexpr (std::is_same_v<T, TspInstance>) {
          s.n = static_cast<int>(inst.distances.size());
        } else if constexpr (std::is_same_v<T, SdvrpInstance>) {
          s.n = static_cast<int>(inst.distances.size()) - 1;
          s.vehicles = {inst.vehicles};
        } else if constexpr (std::is_same_v<T, MdvrpInstance>) {
          s.n = inst.num_customers;
          s.vehicles = inst.vehicles_per_depot;
        } else if constexpr (std::is_same_v<T, MaxKCutInstance>) {
          s.n = inst.num_vertices;
          s.k = inst.partitions;
        } else if constexpr (std::is_same_v<T, ColoringInstance>) {
          s.n = inst.num_vertices;
          s.k = inst.colors;
        } else {
          s.n = static_cast<int>(inst.processing.size());
        }
        return s;
      },
      instance);
}

// --- experiment harness ------------------------------------------------------

struct ExperimentConfig {
  Problem problem = Problem::tsp;
  SizeParams size;
  std::vector<Encoding> encodings = {Encoding::qubo, Encoding::qudo};
  std::vector<int> depths = {1};
  OptimizerConfig optimizer;
  std::optional<PenaltyWeights> penalties;  // defaults derived from the instance
  std::uint64_t instance_seed = 0;
  int workers = 1;
  std::uint64_t max_elements = kDefaultElementBudget;
};

/// One (encoding, depth) cell of a results table. Metrics are mean +- std
/// over the restarts for which they are defined; a field is empty when no
/// restart defined it (or the whole cell was skipped for resources).
struct BenchmarkRow {
  int p = 1;
  std::optional<int> n, k, d, v;
  std::string encoding;
  std::optional<double> ar_mean, ar_std;
  std::optional<double> reach_percent;
  std::optional<double> steps_mean, steps_std;
  std::optional<double> evals_mean, evals_std;
  std::optional<double> p_valid_mean, p_valid_std;
  std::optional<double> time_s_mean, time_s_std;
  std::optional<double> best_cost;
  std::string skipped;  // "" or "resource"

  bool operator==(const BenchmarkRow&) const = default;
};

namespace detail {

struct RestartOutcome {
  std::optional<double> best_feasible;  // best mode objective over the trace
  std::optional<double> ar;
  bool reached = false;
  std::optional<int> steps_to_target;
  std::optional<int> evals_to_target;
  double p_valid = 0.0;
  double seconds = 0.0;
};

inline QaoaParams split_params(std::span<const double> params, int depth) {
  QaoaParams qp;
  qp.gammas.assign(params.begin(), params.begin() + depth);
  qp.betas.assign(params.begin() + depth, params.begin() + 2 * depth);
  return qp;
}

inline void parallel_for(int count, int workers, const std::function<void(int)>& body) {
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  auto drain = [&] {
    for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
  };
  std::vector<std::thread> pool;
  const int spawn = std::min(workers, count);
  pool.reserve(spawn);
  for (int t = 0; t < spawn; ++t) pool.emplace_back(drain);
  for (auto& thread : pool) thread.join();
}

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

inline std::optional<MeanStd> mean_std(const std::vector<double>& values) {
  if (values.empty()) return std::nullopt;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= static_cast<double>(values.size());
  return MeanStd{mean, std::sqrt(var)};
}

inline void fill_sizes(BenchmarkRow& row, Problem problem, const SizeParams& size) {
  row.n = size.n;
  switch (problem) {
    case Problem::max_k_cut:
    case Problem::coloring: row.k = size.k; break;
    case Problem::sdvrp: row.v = size.vehicles.at(0); break;
    case Problem::mdvrp: {
      row.d = static_cast<int>(size.vehicles.size());
      int total = 0;
      for (int vd : size.vehicles) total += vd;
      row.v = total;
      break;
    }
    default: break;
  }
}

}  // namespace detail

/// Runs the multi-start QAOA benchmark for every (encoding, depth) cell.
///
/// Per restart: the optimizer minimizes the exact expectation of the model
/// diagonal; at every objective evaluation the most probable feasible basis
/// state (ties to the lowest index) is decoded and its penalty-free objective
/// recorded. "Reach" means that the best such value over the whole trace
/// equals the oracle optimum within 1e-9; steps/evals-to-target locate the
/// first iteration/evaluation that attains the optimum; P_valid is the
/// feasible probability mass of the state at the returned best parameters.
/// Cells whose dense diagonal would exceed the element budget are emitted as
/// rows marked "skipped: resource".
inline std::vector<BenchmarkRow> run_experiment(
    const ExperimentConfig& cfg,
    const std::optional<ProblemInstance>& fixed_instance = std::nullopt) {
  if (cfg.depths.empty()) throw std::invalid_argument("run_experiment: no depths given");
  for (int p : cfg.depths)
    if (p < 1) throw std::invalid_argument("run_experiment: depths must be >= 1");
  validate(cfg.optimizer);

  const ProblemInstance instance =
      fixed_instance ? *fixed_instance : generate_instance(cfg.problem, cfg.size, cfg.instance_seed);
  const Problem problem = problem_of(instance);
  const SizeParams size = size_of(instance);
  const PenaltyWeights weights =
      cfg.penalties ? *cfg.penalties : default_penalties(instance);
  const ExactResult exact = brute_force_optimum(instance);
  const bool maximize = exact.sense == Sense::maximize;
  constexpr double tol = 1e-9;

  std::vector<BenchmarkRow> rows;
  for (const Encoding encoding : cfg.encodings) {
    int sites = 0;
    int local_dim = 0;
    std::vector<double> diagonal;
    std::vector<std::uint64_t> feasible;
    bool skipped = false;
    try {
      if (encoding == Encoding::qudo) {
        const DAryQuadraticModel model = encode_qudo(instance, weights);
        sites = model.num_sites;
        local_dim = model.local_dim;
        diagonal = model.build_diagonal(cfg.max_elements);
      } else {
        const DAryQuadraticModel model = encode_qubo(instance, weights).to_dary();
        sites = model.num_sites;
        local_dim = 2;
        diagonal = model.build_diagonal(cfg.max_elements);
      }
      feasible = enumerate_feasible(instance, encoding, cfg.max_elements);
    } catch (const resource_limit_error&) {
      skipped = true;
    }

    if (skipped) {
      for (int p : cfg.depths) {
        BenchmarkRow row;
        row.p = p;
        row.encoding = to_string(encoding);
        row.skipped = "resource";
        detail::fill_sizes(row, problem, size);
        rows.push_back(row);
      }
      continue;
    }

    // True objectives of the feasible states, in feasible-set order.
    std::vector<double> feasible_objective(feasible.size());
    for (std::size_t i = 0; i < feasible.size(); ++i) {
      const Assignment a = index_to_assignment(feasible[i], sites, local_dim);
      const DecodedSolution sol = decode(instance, encoding, a);
      feasible_objective[i] = *sol.true_objective;
    }
    // A certain event needs no summation (and colouring/cut registers are
    // wholly feasible by construction).
    const bool fully_feasible = feasible.size() == diagonal.size();

    for (const int depth : cfg.depths) {
      std::vector<detail::RestartOutcome> outcomes(cfg.optimizer.restarts);

      detail::parallel_for(cfg.optimizer.restarts, cfg.workers, [&](int restart) {
        const auto t0 = std::chrono::steady_clock::now();
        detail::RestartOutcome out;

        std::vector<double> mode_values;  // one entry per objective evaluation
        const Objective objective = [&](std::span<const double> params) {
          const Statevector state = run_circuit(sites, local_dim, diagonal,
                                                detail::split_params(params, depth),
                                                cfg.max_elements);
          double best_mass = -1.0;
          std::size_t best_at = 0;
          for (std::size_t i = 0; i < feasible.size(); ++i) {
            const double mass = std::norm(state.amplitudes[feasible[i]]);
            if (mass > best_mass) {
              best_mass = mass;
              best_at = i;
            }
          }
          mode_values.push_back(feasible_objective[best_at]);
          return expectation(state, diagonal);
        };

        const std::vector<double> start = initial_params(cfg.optimizer.seed, restart, depth);
        const RunTrace trace = minimize(objective, depth, cfg.optimizer, start);

        for (std::size_t e = 0; e < mode_values.size(); ++e) {
          const double value = mode_values[e];
          if (!out.best_feasible || (maximize ? value > *out.best_feasible
                                              : value < *out.best_feasible))
            out.best_feasible = value;
          if (!out.evals_to_target && std::abs(value - exact.optimal_value) <= tol) {
            out.evals_to_target = static_cast<int>(e) + 1;
            out.steps_to_target = trace.evaluations[e].iteration;
          }
        }
        if (out.best_feasible) {
          out.ar = approximation_ratio(*out.best_feasible, exact);
          out.reached = std::abs(*out.best_feasible - exact.optimal_value) <= tol;
        }

        if (fully_feasible) {
          out.p_valid = 1.0;
        } else {
          const Statevector final_state =
              run_circuit(sites, local_dim, diagonal,
                          detail::split_params(trace.best_params, depth), cfg.max_elements);
          out.p_valid = probability_of(final_state, feasible);
        }

        out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        outcomes[restart] = out;
      });

      BenchmarkRow row;
      row.p = depth;
      row.encoding = to_string(encoding);
      detail::fill_sizes(row, problem, size);

      std::vector<double> ars, steps, evals, p_valids, times;
      int reached_count = 0;
      std::optional<double> best_cost;
      for (const auto& out : outcomes) {
        if (out.ar) ars.push_back(*out.ar);
        if (out.steps_to_target) steps.push_back(*out.steps_to_target);
        if (out.evals_to_target) evals.push_back(*out.evals_to_target);
        p_valids.push_back(out.p_valid);
        times.push_back(out.seconds);
        reached_count += out.reached;
        if (out.best_feasible &&
            (!best_cost ||
             (maximize ? *out.best_feasible > *best_cost : *out.best_feasible < *best_cost)))
          best_cost = *out.best_feasible;
      }
      if (const auto s = detail::mean_std(ars)) {
        row.ar_mean = s->mean;
        row.ar_std = s->std;
      }
      row.reach_percent = 100.0 * reached_count / cfg.optimizer.restarts;
      if (const auto s = detail::mean_std(steps)) {
        row.steps_mean = s->mean;
        row.steps_std = s->std;
      }
      if (const auto s = detail::mean_std(evals)) {
        row.evals_mean = s->mean;
        row.evals_std = s->std;
      }
      if (const auto s = detail::mean_std(p_valids)) {
        row.p_valid_mean = s->mean;
        row.p_valid_std = s->std;
      }
      if (const auto s = detail::mean_std(times)) {
        row.time_s_mean = s->mean;
        row.time_s_std = s->std;
      }
      row.best_cost = best_cost;
      rows.push_back(row);
    }
  }
  return rows;
}

/// Cartesian sweep over problem sizes; each (n, k) pair runs the full
/// (encoding, depth) grid of the base config.
struct SweepConfig {
  ExperimentConfig base;
  std::vector<int> n_values;  // empty: just base.size.n
  std::vector<int> k_values;  // empty: just base.size.k
};

inline std::vector<BenchmarkRow> sweep(const SweepConfig& cfg) {
  std::vector<int> ns = cfg.n_values.empty() ? std::vector<int>{cfg.base.size.n} : cfg.n_values;
  std::vector<int> ks = cfg.k_values.empty() ? std::vector<int>{cfg.base.size.k} : cfg.k_values;
  std::vector<BenchmarkRow> rows;
  for (int n : ns) {
    for (int k : ks) {
      ExperimentConfig cell = cfg.base;
      cell.size.n = n;
      cell.size.k = k;
      const auto cell_rows = run_experiment(cell);
      rows.insert(rows.end(), cell_rows.begin(), cell_rows.end());
    }
  }
  return rows;
}

inline bool any_skipped(const std::vector<BenchmarkRow>& rows) {
  return std::any_of(rows.begin(), rows.end(),
                     [](const BenchmarkRow& r) { return !r.skipped.empty(); });
}

// --- emission ----------------------------------------------------------------

namespace detail {

inline std::string fixed4(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", value);
  return buf;
}

inline std::string csv_cell(const std::optional<double>& value) {
  return value ? fixed4(*value) : std::string();
}

inline std::string csv_cell(const std::optional<int>& value) {
  return value ? std::to_string(*value) : std::string();
}

}  // namespace detail

inline constexpr const char* kCsvHeader =
    "p,N,K,D,V,encoding,ar_mean,ar_std,reach_pct,steps_mean,steps_std,evals_mean,evals_std,"
    "pvalid_mean,pvalid_std,time_s_mean,time_s_std,best_cost";

inline std::string emit_csv(const std::vector<BenchmarkRow>& rows) {
  std::string out = kCsvHeader;
  out.push_back('\n');
  for (const auto& r : rows) {
    // reach is a discrete multiple of 100/restarts; print it integral.
    std::string reach;
    if (r.reach_percent) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.0f", *r.reach_percent);
      reach = buf;
    }
    const std::string cells[] = {std::to_string(r.p),
                                 detail::csv_cell(r.n),
                                 detail::csv_cell(r.k),
                                 detail::csv_cell(r.d),
                                 detail::csv_cell(r.v),
                                 r.encoding,
                                 detail::csv_cell(r.ar_mean),
                                 detail::csv_cell(r.ar_std),
                                 reach,
                                 detail::csv_cell(r.steps_mean),
                                 detail::csv_cell(r.steps_std),
                                 detail::csv_cell(r.evals_mean),
                                 detail::csv_cell(r.evals_std),
                                 detail::csv_cell(r.p_valid_mean),
                                 detail::csv_cell(r.p_valid_std),
                                 detail::csv_cell(r.time_s_mean),
                                 detail::csv_cell(r.time_s_std),
                                 detail::csv_cell(r.best_cost)};
    for (std::size_t i = 0; i < std::size(cells); ++i) {
      if (i) out.push_back(',');
      out += cells[i];
    }
    out.push_back('\n');
  }
  return out;
}

namespace detail {

inline nlohmann::ordered_json opt_json(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

inline nlohmann::ordered_json opt_json(const std::optional<int>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

template <typename T>
std::optional<T> opt_from_json(const nlohmann::ordered_json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

}  // namespace detail

inline nlohmann::ordered_json rows_to_json(const std::vector<BenchmarkRow>& rows) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json j;
    j["p"] = r.p;
    j["n"] = detail::opt_json(r.n);
    j["k"] = detail::opt_json(r.k);
    j["d"] = detail::opt_json(r.d);
    j["v"] = detail::opt_json(r.v);
    j["encoding"] = r.encoding;
    j["ar_mean"] = detail::opt_json(r.ar_mean);
    j["ar_std"] = detail::opt_json(r.ar_std);
    j["reach_pct"] = detail::opt_json(r.reach_percent);
    j["steps_mean"] = detail::opt_json(r.steps_mean);
    j["steps_std"] = detail::opt_json(r.steps_std);
    j["evals_mean"] = detail::opt_json(r.evals_mean);
    j["evals_std"] = detail::opt_json(r.evals_std);
    j["pvalid_mean"] = detail::opt_json(r.p_valid_mean);
    j["pvalid_std"] = detail::opt_json(r.p_valid_std);
    j["time_s_mean"] = detail::opt_json(r.time_s_mean);
    j["time_s_std"] = detail::opt_json(r.time_s_std);
    j["best_cost"] = detail::opt_json(r.best_cost);
    j["skipped"] = r.skipped.empty() ? nlohmann::ordered_json(nullptr)
                                     : nlohmann::ordered_json(r.skipped);
    out.push_back(std::move(j));
  }
  return out;
}

inline std::vector<BenchmarkRow> rows_from_json(const nlohmann::ordered_json& array) {
  if (!array.is_array()) throw std::invalid_argument("rows_from_json: expected an array");
  std::vector<BenchmarkRow> rows;
  for (const auto& j : array) {
    BenchmarkRow r;
    r.p = j.at("p").get<int>();
    r.n = detail::opt_from_json<int>(j, "n");
    r.k = detail::opt_from_json<int>(j, "k");
    r.d = detail::opt_from_json<int>(j, "d");
    r.v = detail::opt_from_json<int>(j, "v");
    r.encoding = j.at("encoding").get<std::string>();
    r.ar_mean = detail::opt_from_json<double>(j, "ar_mean");
    r.ar_std = detail::opt_from_json<double>(j, "ar_std");
    r.reach_percent = detail::opt_from_json<double>(j, "reach_pct");
    r.steps_mean = detail::opt_from_json<double>(j, "steps_mean");
    r.steps_std = detail::opt_from_json<double>(j, "steps_std");
    r.evals_mean = detail::opt_from_json<double>(j, "evals_mean");
    r.evals_std = detail::opt_from_json<double>(j, "evals_std");
    r.p_valid_mean = detail::opt_from_json<double>(j, "pvalid_mean");
    r.p_valid_std = detail::opt_from_json<double>(j, "pvalid_std");
    r.time_s_mean = detail::opt_from_json<double>(j, "time_s_mean");
    r.time_s_std = detail::opt_from_json<double>(j, "time_s_std");
    r.best_cost = detail::opt_from_json<double>(j, "best_cost");
    if (j.contains("skipped") && !j.at("skipped").is_null())
      r.skipped = j.at("skipped").get<std::string>();
    rows.push_back(std::move(r));
  }
  return rows;
}

/// Writes rows as CSV or JSON to a file path, or to stdout when destination
/// is "-".
inline void emit(const std::vector<BenchmarkRow>& rows, const std::string& format,
                 const std::string& destination) {
  if (rows.empty()) throw std::invalid_argument("emit: no rows");
  std::string payload;
  if (format == "csv") {
    payload = emit_csv(rows);
  } else if (format == "json") {
    payload = rows_to_json(rows).dump(2);
    payload.push_back('\n');
  } else {
    throw std::invalid_argument("emit: unknown format '" + format + "'");
  }
  if (destination == "-") {
    std::cout << payload;
    return;
  }
  std::ofstream file(destination, std::ios::binary);
  if (!file) throw std::runtime_error("emit: cannot open '" + destination + "' for writing");
  file << payload;
  if (!file) throw std::runtime_error("emit: failed writing '" + destination + "'");
}

// --- instance (de)serialization ----------------------------------------------

inline nlohmann::ordered_json instance_to_json(const ProblemInstance& instance) {
  nlohmann::ordered_json j;
  std::visit(
      [&j](const auto& inst) {
        using T = std::decay_t<decltype(inst)>;
        if constexpr (std::is_same_v<T, TspInstance>) {
          j["problem"] = "tsp";
          j["distances"] = inst.distances;
        } else if constexpr (std::is_same_v<T, SdvrpInstance>) {
          j["problem"] = "sdvrp";
          j["vehicles"] = inst.vehicles;
          j["distances"] = inst.distances;
        } else if constexpr (std::is_same_v<T, MdvrpInstance>) {
          j["problem"] = "mdvrp";
          j["num_customers"] = inst.num_customers;
          j["vehicles_per_depot"] = inst.vehicles_per_depot;
          j["distances"] = inst.distances;
        } else if constexpr (std::is_same_v<T, MaxKCutInstance>) {
          j["problem"] = "maxkcut";
          j["num_vertices"] = inst.num_vertices;
          j["partitions"] = inst.partitions;
          j["edges"] = inst.edges;
        } else if constexpr (std::is_same_v<T, ColoringInstance>) {
          j["problem"] = "coloring";
          j["num_vertices"] = inst.num_vertices;
          j["colors"] = inst.colors;
          j["edges"] = inst.edges;
        } else {
          j["problem"] = "scheduling";
          j["processing"] = inst.processing;
          j["weights"] = inst.weights;
        }
      },
      instance);
  return j;
}

inline ProblemInstance instance_from_json(const nlohmann::ordered_json& j) {
  const std::string tag = j.at("problem").get<std::string>();
  ProblemInstance instance;
  if (tag == "tsp") {
    TspInstance inst;
    inst.distances = j.at("distances").get<std::vector<std::vector<double>>>();
    instance = inst;
  } else if (tag == "sdvrp") {
    SdvrpInstance inst;
    inst.vehicles = j.at("vehicles").get<int>();
    inst.distances = j.at("distances").get<std::vector<std::vector<double>>>();
    instance = inst;
  } else if (tag == "mdvrp") {
    MdvrpInstance inst;
    inst.num_customers = j.at("num_customers").get<int>();
    inst.vehicles_per_depot = j.at("vehicles_per_depot").get<std::vector<int>>();
    inst.distances = j.at("distances").get<std::vector<std::vector<double>>>();
    instance = inst;
  } else if (tag == "maxkcut") {
    MaxKCutInstance inst;
    inst.num_vertices = j.at("num_vertices").get<int>();
    inst.partitions = j.at("partitions").get<int>();
    inst.edges = j.at("edges").get<std::vector<std::pair<int, int>>>();
    instance = inst;
  } else if (tag == "coloring") {
    ColoringInstance inst;
    inst.num_vertices = j.at("num_vertices").get<int>();
    inst.colors = j.at("colors").get<int>();
    inst.edges = j.at("edges").get<std::vector<std::pair<int, int>>>();
    instance = inst;
  } else if (tag == "scheduling") {
    SchedulingInstance inst;
    inst.processing = j.at("processing").get<std::vector<double>>();
    inst.weights = j.at("weights").get<std::vector<double>>();
    instance = inst;
  } else {
    throw std::invalid_argument("instance_from_json: unknown problem '" + tag + "'");
  }
  validate(instance);
  return instance;
}

}  // namespace qudo
