#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "qudo/core.hpp"
#include "qudo/dary_model.hpp"
#include "qudo/problems.hpp"

namespace qudo {

enum class Encoding { qubo, qudo };

inline std::string to_string(Encoding e) { return e == Encoding::qubo ? "qubo" : "qudo"; }

/// Register shapes and Hilbert-space sizes for both encodings of an instance.
/// qubo_dim is 128-bit because (N+D)(N+V) reaches 64 variables at the larger
/// benchmark sizes, where 2^64 no longer fits in 64 bits.
struct ResourceSummary {
  int qubo_vars = 0;
  unsigned __int128 qubo_dim = 0;
  int qudo_sites = 0;
  int qudo_local_dim = 0;
  std::uint64_t qudo_dim = 0;
};

/// A decoded assignment: feasibility, the penalty-free objective value
/// (undefined for infeasible assignments), and a structured rendering.
/// For routing problems `routes` lists the customers served between
/// consecutive depot occurrences, one list per vehicle. For colouring,
/// `proper` flags a zero-conflict assignment; such assignments are always
/// "feasible" since every labelling is a valid state of the native model.
struct DecodedSolution {
  bool feasible = false;
  bool proper = false;
  std::optional<double> true_objective;
  std::vector<int> labels;
  std::vector<std::vector<int>> routes;
};

namespace detail {

struct Shape {
  int sites;      // qudo register length
  int local_dim;  // qudo local dimension; qubo uses sites * local_dim bits
};

inline Shape shape_of(const ProblemInstance& instance) {
  return std::visit(
      [](const auto& inst) -> Shape {
        using T = std::decay_t<decltype(inst)>;
        if constexpr (std::is_same_v<T, TspInstance>) {
          return {inst.num_cities(), inst.num_cities()};
        } else if constexpr (std::is_same_v<T, SdvrpInstance>) {
          return {inst.num_customers() + inst.vehicles, inst.num_customers() + 1};
        } else if constexpr (std::is_same_v<T, MdvrpInstance>) {
          return {inst.num_customers + inst.total_vehicles(),
                  inst.num_customers + inst.num_depots()};
        } else if constexpr (std::is_same_v<T, MaxKCutInstance>) {
          return {inst.num_vertices, inst.partitions};
        } else if constexpr (std::is_same_v<T, ColoringInstance>) {
          return {inst.num_vertices, inst.colors};
        } else {
          static_assert(std::is_same_v<T, SchedulingInstance>);
          return {inst.num_jobs(), inst.num_jobs()};
        }
      },
      instance);
}

inline double max_distance(const std::vector<std::vector<double>>& d) {
  double m = 0.0;
  for (const auto& row : d)
    for (double v : row) m = std::max(m, v);
  return m;
}

}  // namespace detail

inline ResourceSummary resource_summary(const ProblemInstance& instance) {
  validate(instance);
  const auto [sites, local_dim] = detail::shape_of(instance);
  ResourceSummary s;
  s.qudo_sites = sites;
  s.qudo_local_dim = local_dim;
  s.qudo_dim = pow_u64(local_dim, sites);
  s.qubo_vars = sites * local_dim;
  s.qubo_dim = static_cast<unsigned __int128>(1) << s.qubo_vars;
  return s;
}

/// Default penalty weights: a = 2 * n * (largest objective coefficient), with
/// the softer tiers at a/2 and a/4. For Max-K-Cut and colouring the objective
/// coefficient is the unit edge weight, so the edge tier stays at 1 and only
/// the one-hot tier scales with n. Large enough that a single constraint
/// violation always costs more than it can save in objective; the model tests
/// confirm this exhaustively at the benchmark sizes.
inline PenaltyWeights default_penalties(const ProblemInstance& instance) {
  validate(instance);
  const int n = detail::shape_of(instance).sites;
  return std::visit(
      [n](const auto& inst) -> PenaltyWeights {
        using T = std::decay_t<decltype(inst)>;
        if constexpr (std::is_same_v<T, MaxKCutInstance> || std::is_same_v<T, ColoringInstance>) {
          const double a = 2.0 * n;
          return {a, 1.0, 0.5};
        } else if constexpr (std::is_same_v<T, SchedulingInstance>) {
          double max_coeff = 0.0;
          for (int i = 0; i < inst.num_jobs(); ++i)
            max_coeff = std::max(max_coeff, inst.weights[i] * inst.processing[i] * n);
          const double a = 2.0 * n * max_coeff;
          return {a, a / 2.0, a / 4.0};
        } else {
          const double a = 2.0 * n * detail::max_distance(inst.distances);
          return {a, a / 2.0, a / 4.0};
        }
      },
      instance);
}

namespace detail {

inline void require_positive(double w, const char* name) {
  if (!(w > 0.0))
    throw std::invalid_argument(std::string("penalty weight ") + name + " must be positive");
}

// --- qudo building blocks ---------------------------------------------------

/// Cost of a cyclic sequence: sum_j D[v_j][v_{(j+1) mod M}].
inline void add_cyclic_cost(DAryQuadraticModel& m, const std::vector<std::vector<double>>& d) {
  const int sites = m.num_sites;
  for (int j = 0; j < sites; ++j) {
    const int next = (j + 1) % sites;
    for (int a = 0; a < m.local_dim; ++a)
      for (int b = 0; b < m.local_dim; ++b)
        if (d[a][b] != 0.0) m.add_coupling(j, next, a, b, d[a][b]);
  }
}

/// Collision penalty: weight per pair of sites holding the same label from
/// [first_label, last_label].
inline void add_collisions(DAryQuadraticModel& m, int first_label, int last_label,
                           double weight) {
  for (int p = 0; p < m.num_sites; ++p)
    for (int q = p + 1; q < m.num_sites; ++q)
      for (int a = first_label; a <= last_label; ++a) m.add_coupling(p, q, a, a, weight);
}

/// weight * (sum_j delta(v_j = label) - target)^2, expanded to
/// constant + linear + pairwise terms.
inline void add_count_penalty(DAryQuadraticModel& m, int label, int target, double weight) {
  m.offset += weight * target * target;
  for (int j = 0; j < m.num_sites; ++j) m.add_linear(j, label, weight * (1.0 - 2.0 * target));
  for (int p = 0; p < m.num_sites; ++p)
    for (int q = p + 1; q < m.num_sites; ++q) m.add_coupling(p, q, label, label, 2.0 * weight);
}

// --- qubo building blocks ---------------------------------------------------

/// weight * (sum_{v in vars} x_v - target)^2.
inline void add_count_penalty(QuboModel& m, const std::vector<int>& vars, int target,
                              double weight) {
  m.offset += weight * target * target;
  for (int v : vars) m.add(v, v, weight * (1.0 - 2.0 * target));
  for (std::size_t p = 0; p < vars.size(); ++p)
    for (std::size_t q = p + 1; q < vars.size(); ++q) m.add(vars[p], vars[q], 2.0 * weight);
}

inline void add_exactly_one(QuboModel& m, const std::vector<int>& vars, double weight) {
  add_count_penalty(m, vars, 1, weight);
}

}  // namespace detail

/// Builds the d-ary Hamiltonian of an instance. Sequence problems place one
/// label per position; graph problems place one colour per vertex. Counting
/// constraints are expanded into constant, linear and pairwise terms.
inline DAryQuadraticModel encode_qudo(const ProblemInstance& instance, const PenaltyWeights& w) {
  validate(instance);
  const auto [sites, local_dim] = detail::shape_of(instance);
  DAryQuadraticModel m(sites, local_dim);

  std::visit(
      [&](const auto& inst) {
        using T = std::decay_t<decltype(inst)>;
        if constexpr (std::is_same_v<T, TspInstance>) {
          detail::require_positive(w.a, "a");
          detail::add_cyclic_cost(m, inst.distances);
          detail::add_collisions(m, 0, inst.num_cities() - 1, w.a);
        } else if constexpr (std::is_same_v<T, SdvrpInstance>) {
          detail::require_positive(w.a, "a");
          detail::require_positive(w.b, "b");
          detail::add_cyclic_cost(m, inst.distances);
          // Label 0 is the depot; only customers 1..N are collision-protected.
          detail::add_collisions(m, 1, inst.num_customers(), w.a);
          detail::add_count_penalty(m, 0, inst.vehicles, w.b);
        } else if constexpr (std::is_same_v<T, MdvrpInstance>) {
          detail::require_positive(w.a, "a");
          detail::require_positive(w.b, "b");
          detail::require_positive(w.c, "c");
          detail::add_cyclic_cost(m, inst.distances);
          detail::add_collisions(m, 0, inst.num_customers - 1, w.a);
          for (int d = 0; d < inst.num_depots(); ++d)
            detail::add_count_penalty(m, inst.depot_label(d), inst.vehicles_per_depot[d], w.b);
          // No two depot labels (equal or distinct) may be cyclically adjacent.
          for (int j = 0; j < m.num_sites; ++j) {
            const int next = (j + 1) % m.num_sites;
            for (int d1 = 0; d1 < inst.num_depots(); ++d1)
              for (int d2 = 0; d2 < inst.num_depots(); ++d2)
                m.add_coupling(j, next, inst.depot_label(d1), inst.depot_label(d2), w.c);
          }
        } else if constexpr (std::is_same_v<T, MaxKCutInstance>) {
          // Maximizing the cut = minimizing -(cut): each edge contributes -1
          // plus +1 when its endpoints share a label.
          m.offset -= static_cast<double>(inst.edges.size());
          for (auto [u, v] : inst.edges)
            for (int a = 0; a < inst.partitions; ++a) m.add_coupling(u, v, a, a, 1.0);
        } else if constexpr (std::is_same_v<T, ColoringInstance>) {
          detail::require_positive(w.b, "b");
          for (auto [u, v] : inst.edges)
            for (int a = 0; a < inst.colors; ++a) m.add_coupling(u, v, a, a, w.b);
        } else {
          static_assert(std::is_same_v<T, SchedulingInstance>);
          detail::require_positive(w.a, "a");
          // Job at position j (1-based) contributes w_i * p_i * j.
          for (int j = 0; j < m.num_sites; ++j)
            for (int i = 0; i < inst.num_jobs(); ++i)
              m.add_linear(j, i, inst.weights[i] * inst.processing[i] * (j + 1));
          detail::add_collisions(m, 0, inst.num_jobs() - 1, w.a);
        }
      },
      instance);
  return m;
}

/// Builds the one-hot binary Hamiltonian. Variable x_{i,j} (label i at
/// position j, or vertex i with colour j) takes flat index i * M + j where M
/// is the range of the second subscript.
inline QuboModel encode_qubo(const ProblemInstance& instance, const PenaltyWeights& w) {
  validate(instance);
  const auto [sites, local_dim] = detail::shape_of(instance);
  QuboModel m(sites * local_dim);

  std::visit(
      [&](const auto& inst) {
        using T = std::decay_t<decltype(inst)>;
        if constexpr (std::is_same_v<T, MaxKCutInstance> || std::is_same_v<T, ColoringInstance>) {
          const int K = local_dim;
          auto var = [K](int vertex, int colour) { return vertex * K + colour; };
          detail::require_positive(w.a, "a");
          double edge_weight;
          if constexpr (std::is_same_v<T, MaxKCutInstance>) {
            edge_weight = 1.0;
            m.offset -= static_cast<double>(inst.edges.size());
          } else {
            detail::require_positive(w.b, "b");
            edge_weight = w.b;
          }
          for (auto [u, v] : inst.edges)
            for (int k = 0; k < K; ++k) m.add(var(u, k), var(v, k), edge_weight);
          for (int vtx = 0; vtx < inst.num_vertices; ++vtx) {
            std::vector<int> block(K);
            for (int k = 0; k < K; ++k) block[k] = var(vtx, k);
            detail::add_exactly_one(m, block, w.a);
          }
        } else {
          // Sequence problems: x_{i,j} = label i at position j, M positions.
          const int M = sites;
          const int labels = local_dim;
          auto var = [M](int label, int pos) { return label * M + pos; };
          detail::require_positive(w.a, "a");

          // One node per position.
          for (int j = 0; j < M; ++j) {
            std::vector<int> block(labels);
            for (int i = 0; i < labels; ++i) block[i] = var(i, j);
            detail::add_exactly_one(m, block, w.a);
          }

          auto position_block = [&](int label) {
            std::vector<int> block(M);
            for (int j = 0; j < M; ++j) block[j] = var(label, j);
            return block;
          };

          if constexpr (std::is_same_v<T, SchedulingInstance>) {
            for (int i = 0; i < labels; ++i)
              for (int j = 0; j < M; ++j)
                m.add(var(i, j), var(i, j), inst.weights[i] * inst.processing[i] * (j + 1));
            for (int i = 0; i < labels; ++i) detail::add_exactly_one(m, position_block(i), w.a);
          } else {
            // Routing: cyclic transition costs between consecutive positions.
            for (int j = 0; j < M; ++j) {
              const int next = (j + 1) % M;
              for (int i = 0; i < labels; ++i)
                for (int k = 0; k < labels; ++k)
                  if (inst.distances[i][k] != 0.0)
                    m.add(var(i, j), var(k, next), inst.distances[i][k]);
            }
            if constexpr (std::is_same_v<T, TspInstance>) {
              for (int i = 0; i < labels; ++i) detail::add_exactly_one(m, position_block(i), w.a);
            } else if constexpr (std::is_same_v<T, SdvrpInstance>) {
              detail::require_positive(w.b, "b");
              for (int i = 1; i <= inst.num_customers(); ++i)
                detail::add_exactly_one(m, position_block(i), w.a);
              detail::add_count_penalty(m, position_block(0), inst.vehicles, w.b);
            } else {
              static_assert(std::is_same_v<T, MdvrpInstance>);
              detail::require_positive(w.b, "b");
              detail::require_positive(w.c, "c");
              for (int i = 0; i < inst.num_customers; ++i)
                detail::add_exactly_one(m, position_block(i), w.a);
              for (int d = 0; d < inst.num_depots(); ++d)
                detail::add_count_penalty(m, position_block(inst.depot_label(d)),
                                          inst.vehicles_per_depot[d], w.b);
              for (int j = 0; j < M; ++j) {
                const int next = (j + 1) % M;
                for (int d1 = 0; d1 < inst.num_depots(); ++d1)
                  for (int d2 = 0; d2 < inst.num_depots(); ++d2)
                    m.add(var(inst.depot_label(d1), j), var(inst.depot_label(d2), next), w.c);
              }
            }
          }
        }
      },
      instance);
  return m;
}

namespace detail {

inline double cyclic_cost(const std::vector<std::vector<double>>& d, std::span<const int> seq) {
  double cost = 0.0;
  const int m = static_cast<int>(seq.size());
  for (int j = 0; j < m; ++j) cost += d[seq[j]][seq[(j + 1) % m]];
  return cost;
}

inline bool is_permutation_of_all(std::span<const int> seq, int n) {
  std::vector<char> seen(n, 0);
  for (int v : seq) {
    if (v < 0 || v >= n || seen[v]) return false;
    seen[v] = 1;
  }
  return static_cast<int>(seq.size()) == n;
}

/// Occurrence counts of each label in [0, labels).
inline std::vector<int> label_counts(std::span<const int> seq, int labels) {
  std::vector<int> counts(labels, 0);
  for (int v : seq) ++counts[v];
  return counts;
}

/// Splits a cyclic sequence at separator occurrences: one list of in-between
/// labels per separator, starting from the earliest separator position.
inline std::vector<std::vector<int>> split_routes(std::span<const int> seq,
                                                  const std::vector<char>& is_separator) {
  const int m = static_cast<int>(seq.size());
  std::vector<int> separators;
  for (int j = 0; j < m; ++j)
    if (is_separator[seq[j]]) separators.push_back(j);
  std::vector<std::vector<int>> routes;
  const int v = static_cast<int>(separators.size());
  for (int r = 0; r < v; ++r) {
    const int start = separators[r];
    const int stop = separators[(r + 1) % v];
    std::vector<int> route;
    for (int j = (start + 1) % m; j != stop; j = (j + 1) % m) route.push_back(seq[j]);
    routes.push_back(std::move(route));
  }
  return routes;
}

/// Native feasibility of a label sequence / labelling, independent of any
/// penalty expansion.
inline bool sequence_feasible(const ProblemInstance& instance, std::span<const int> seq) {
  return std::visit(
      [seq](const auto& inst) -> bool {
        using T = std::decay_t<decltype(inst)>;
        if constexpr (std::is_same_v<T, TspInstance>) {
          return is_permutation_of_all(seq, inst.num_cities());
        } else if constexpr (std::is_same_v<T, SdvrpInstance>) {
          const auto counts = label_counts(seq, inst.num_customers() + 1);
          if (counts[0] != inst.vehicles) return false;
          for (int i = 1; i <= inst.num_customers(); ++i)
            if (counts[i] != 1) return false;
          return true;
        } else if constexpr (std::is_same_v<T, MdvrpInstance>) {
          const int nodes = inst.num_customers + inst.num_depots();
          const auto counts = label_counts(seq, nodes);
          for (int i = 0; i < inst.num_customers; ++i)
            if (counts[i] != 1) return false;
          for (int d = 0; d < inst.num_depots(); ++d)
            if (counts[inst.depot_label(d)] != inst.vehicles_per_depot[d]) return false;
          const int m = static_cast<int>(seq.size());
          for (int j = 0; j < m; ++j)
            if (seq[j] >= inst.num_customers && seq[(j + 1) % m] >= inst.num_customers)
              return false;
          return true;
        } else if constexpr (std::is_same_v<T, SchedulingInstance>) {
          return is_permutation_of_all(seq, inst.num_jobs());
        } else {
          return true;  // every labelling is a valid cut / colouring state
        }
      },
      instance);
}

/// Penalty-free objective of a (feasible) sequence. For Max-K-Cut this is the
/// cut size, the quantity being maximized; everything else is minimized.
inline double sequence_objective(const ProblemInstance& instance, std::span<const int> seq) {
  return std::visit(
      [seq](const auto& inst) -> double {
        using T = std::decay_t<decltype(inst)>;
        if constexpr (std::is_same_v<T, TspInstance> || std::is_same_v<T, SdvrpInstance> ||
                      std::is_same_v<T, MdvrpInstance>) {
          return cyclic_cost(inst.distances, seq);
        } else if constexpr (std::is_same_v<T, MaxKCutInstance>) {
          int cut = 0;
          for (auto [u, v] : inst.edges) cut += seq[u] != seq[v];
          return cut;
        } else if constexpr (std::is_same_v<T, ColoringInstance>) {
          int clashes = 0;
          for (auto [u, v] : inst.edges) clashes += seq[u] == seq[v];
          return clashes;
        } else {
          static_assert(std::is_same_v<T, SchedulingInstance>);
          double cost = 0.0;
          for (std::size_t j = 0; j < seq.size(); ++j)
            cost += inst.weights[seq[j]] * inst.processing[seq[j]] * (j + 1);
          return cost;
        }
      },
      instance);
}

/// Recovers the label sequence from a one-hot bitstring, or nothing if any
/// block does not have exactly one bit set. bits[label * M + pos] follows the
/// encode_qubo layout.
inline std::optional<std::vector<int>> onehot_to_sequence(std::span<const int> bits, int sites,
                                                          int local_dim) {
  std::vector<int> seq(sites, -1);
  for (int j = 0; j < sites; ++j) {
    int count = 0;
    for (int i = 0; i < local_dim; ++i) {
      if (bits[static_cast<std::size_t>(i) * sites + j]) {
        ++count;
        seq[j] = i;
      }
    }
    if (count != 1) return std::nullopt;
  }
  return seq;
}

}  // namespace detail

/// Interprets an assignment (d-ary values for qudo, bits for qubo) as a
/// structured solution. Infeasible assignments get an empty structure and no
/// objective value.
inline DecodedSolution decode(const ProblemInstance& instance, Encoding encoding,
                              std::span<const int> assignment) {
  validate(instance);
  const auto [sites, local_dim] = detail::shape_of(instance);

  std::vector<int> seq;
  if (encoding == Encoding::qudo) {
    if (static_cast<int>(assignment.size()) != sites)
      throw std::invalid_argument("decode: expected " + std::to_string(sites) + " values, got " +
                                  std::to_string(assignment.size()));
    for (int v : assignment)
      if (v < 0 || v >= local_dim)
        throw std::invalid_argument("decode: value " + std::to_string(v) + " out of range");
    seq.assign(assignment.begin(), assignment.end());
  } else {
    const int vars = sites * local_dim;
    if (static_cast<int>(assignment.size()) != vars)
      throw std::invalid_argument("decode: expected " + std::to_string(vars) + " bits, got " +
                                  std::to_string(assignment.size()));
    for (int b : assignment)
      if (b != 0 && b != 1) throw std::invalid_argument("decode: bits must be 0 or 1");
    // Graph problems one-hot over colours per vertex (x_{v,k} = v*K + k);
    // sequence problems one-hot over labels per position (x_{i,j} = i*M + j).
    const bool vertex_major = std::holds_alternative<MaxKCutInstance>(instance) ||
                              std::holds_alternative<ColoringInstance>(instance);
    std::optional<std::vector<int>> maybe_seq;
    if (vertex_major) {
      std::vector<int> transposed(static_cast<std::size_t>(sites) * local_dim);
      for (int v = 0; v < sites; ++v)
        for (int k = 0; k < local_dim; ++k)
          transposed[static_cast<std::size_t>(k) * sites + v] =
              assignment[static_cast<std::size_t>(v) * local_dim + k];
      maybe_seq = detail::onehot_to_sequence(transposed, sites, local_dim);
    } else {
      maybe_seq = detail::onehot_to_sequence(assignment, sites, local_dim);
    }
    if (!maybe_seq) return {};  // a broken one-hot block: infeasible, no structure
    seq = std::move(*maybe_seq);
  }

  DecodedSolution out;
  out.labels = seq;
  out.feasible = detail::sequence_feasible(instance, seq);
  if (!out.feasible) {
    out.labels.clear();
    return out;
  }
  out.true_objective = detail::sequence_objective(instance, seq);

  if (std::holds_alternative<ColoringInstance>(instance))
    out.proper = *out.true_objective == 0.0;
  if (const auto* sdvrp = std::get_if<SdvrpInstance>(&instance)) {
    std::vector<char> is_depot(sdvrp->num_customers() + 1, 0);
    is_depot[0] = 1;
    out.routes = detail::split_routes(seq, is_depot);
  }
  if (const auto* mdvrp = std::get_if<MdvrpInstance>(&instance)) {
    std::vector<char> is_depot(mdvrp->num_customers + mdvrp->num_depots(), 0);
    for (int d = 0; d < mdvrp->num_depots(); ++d) is_depot[mdvrp->depot_label(d)] = 1;
    out.routes = detail::split_routes(seq, is_depot);
  }
  return out;
}

}  // namespace qudo
