#pragma once

#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace qudo {

/// Symmetric travelling-salesman instance over a full distance matrix.
struct TspInstance {
  std::vector<std::vector<double>> distances;

  int num_cities() const { return static_cast<int>(distances.size()); }
};

/// Single-depot VRP. Node 0 is the depot, nodes 1..N are the customers, so
/// the matrix is (N+1) x (N+1). Every tour visits the depot `vehicles` times.
struct SdvrpInstance {
  std::vector<std::vector<double>> distances;
  int vehicles = 0;

  int num_customers() const { return static_cast<int>(distances.size()) - 1; }
};

/// Multi-depot VRP. Customers are labelled 0..N-1 and depot d is labelled
/// N+d, so the matrix is (N+D) x (N+D) with depots in the trailing block.
/// Depot d hosts vehicles_per_depot[d] vehicles.
struct MdvrpInstance {
  std::vector<std::vector<double>> distances;
  int num_customers = 0;
  std::vector<int> vehicles_per_depot;

  int num_depots() const { return static_cast<int>(vehicles_per_depot.size()); }
  int total_vehicles() const {
    return std::accumulate(vehicles_per_depot.begin(), vehicles_per_depot.end(), 0);
  }
  int depot_label(int depot) const { return num_customers + depot; }
};

/// Undirected graph whose vertices are split into `partitions` groups to
/// maximise the number of edges with endpoints in different groups.
struct MaxKCutInstance {
  int num_vertices = 0;
  std::vector<std::pair<int, int>> edges;
  int partitions = 0;
};

/// Undirected graph to be vertex-coloured with `colors` colours.
struct ColoringInstance {
  int num_vertices = 0;
  std::vector<std::pair<int, int>> edges;
  int colors = 0;
};

/// Single-machine scheduling of N jobs minimising the total weighted
/// completion time sum_i w_i C_i under unit job order (no idle time).
struct SchedulingInstance {
  std::vector<double> processing;
  std::vector<double> weights;

  int num_jobs() const { return static_cast<int>(processing.size()); }
};

using ProblemInstance = std::variant<TspInstance, SdvrpInstance, MdvrpInstance, MaxKCutInstance,
                                     ColoringInstance, SchedulingInstance>;

/// Constraint-penalty weights. a scales hard structural constraints
/// (collisions / one-hot), b the next tier (vehicle counts, colour clashes),
/// c the softest tier (depot adjacency). Not every problem uses every tier.
struct PenaltyWeights {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

namespace detail {

inline void validate_distance_matrix(const std::vector<std::vector<double>>& d,
                                     const std::string& who) {
  const std::size_t n = d.size();
  if (n < 2) throw std::invalid_argument(who + ": need at least two nodes");
  for (std::size_t i = 0; i < n; ++i) {
    if (d[i].size() != n) throw std::invalid_argument(who + ": distance matrix must be square");
    for (std::size_t j = 0; j < n; ++j) {
      if (!std::isfinite(d[i][j]) || d[i][j] < 0.0)
        throw std::invalid_argument(who + ": distances must be finite and nonnegative");
      if (std::abs(d[i][j] - d[j][i]) > 1e-12)
        throw std::invalid_argument(who + ": distance matrix must be symmetric");
    }
    if (d[i][i] != 0.0) throw std::invalid_argument(who + ": diagonal distances must be zero");
  }
}

inline void validate_edges(int num_vertices, const std::vector<std::pair<int, int>>& edges,
                           const std::string& who) {
  if (num_vertices < 1) throw std::invalid_argument(who + ": need at least one vertex");
  std::set<std::pair<int, int>> seen;
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= num_vertices || v >= num_vertices)
      throw std::invalid_argument(who + ": edge endpoint out of range");
    if (u == v) throw std::invalid_argument(who + ": self-loops are not allowed");
    if (u > v) std::swap(u, v);
    if (!seen.insert({u, v}).second)
      throw std::invalid_argument(who + ": duplicate edge (" + std::to_string(u) + ", " +
                                  std::to_string(v) + ")");
  }
}

}  // namespace detail

/// Checks structural invariants, throwing std::invalid_argument on violation.
inline void validate(const ProblemInstance& instance) {
  std::visit(
      [](const auto& inst) {
        using T = std::decay_t<decltype(inst)>;
        if constexpr (std::is_same_v<T, TspInstance>) {
          detail::validate_distance_matrix(inst.distances, "tsp");
        } else if constexpr (std::is_same_v<T, SdvrpInstance>) {
          detail::validate_distance_matrix(inst.distances, "sdvrp");
          if (inst.num_customers() < 1) throw std::invalid_argument("sdvrp: need a customer");
          if (inst.vehicles < 1) throw std::invalid_argument("sdvrp: need at least one vehicle");
        } else if constexpr (std::is_same_v<T, MdvrpInstance>) {
          detail::validate_distance_matrix(inst.distances, "mdvrp");
          if (inst.num_customers < 1) throw std::invalid_argument("mdvrp: need a customer");
          if (inst.num_depots() < 1) throw std::invalid_argument("mdvrp: need a depot");
          for (int v : inst.vehicles_per_depot)
            if (v < 1) throw std::invalid_argument("mdvrp: every depot needs a vehicle");
          const int nodes = inst.num_customers + inst.num_depots();
          if (static_cast<int>(inst.distances.size()) != nodes)
            throw std::invalid_argument("mdvrp: distance matrix must cover customers and depots");
        } else if constexpr (std::is_same_v<T, MaxKCutInstance>) {
          detail::validate_edges(inst.num_vertices, inst.edges, "maxkcut");
          if (inst.partitions < 2) throw std::invalid_argument("maxkcut: need k >= 2");
        } else if constexpr (std::is_same_v<T, ColoringInstance>) {
          detail::validate_edges(inst.num_vertices, inst.edges, "coloring");
          if (inst.colors < 1) throw std::invalid_argument("coloring: need at least one colour");
        } else {
          static_assert(std::is_same_v<T, SchedulingInstance>);
          if (inst.processing.empty())
            throw std::invalid_argument("scheduling: need at least one job");
          if (inst.processing.size() != inst.weights.size())
            throw std::invalid_argument("scheduling: processing/weights size mismatch");
          for (double p : inst.processing)
            if (!(p > 0.0) || !std::isfinite(p))
              throw std::invalid_argument("scheduling: processing times must be positive");
          for (double w : inst.weights)
            if (!(w > 0.0) || !std::isfinite(w))
              throw std::invalid_argument("scheduling: weights must be positive");
        }
      },
      instance);
}

}  // namespace qudo
