#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "qudo/core.hpp"
#include "qudo/encoders.hpp"
#include "qudo/problems.hpp"

namespace qudo {

enum class Sense { minimize, maximize };

/// Exhaustive ground truth: the optimal penalty-free objective and every
/// native solution attaining it. Symmetric copies (tour rotations,
/// reflections, colour permutations) are all listed.
struct ExactResult {
  double optimal_value = 0.0;
  std::vector<std::vector<int>> optimizers;
  Sense sense = Sense::minimize;
};

inline Sense objective_sense(const ProblemInstance& instance) {
  return std::holds_alternative<MaxKCutInstance>(instance) ? Sense::maximize : Sense::minimize;
}

namespace detail {

// Enumeration caps. Beyond these the native spaces (N!, multiset
// arrangements, K^N) are too large for exhaustive search.
inline constexpr int kMaxPermutationJobs = 9;   // TSP and scheduling: N <= 9
inline constexpr int kMaxSequenceLength = 9;    // VRPs: N + V <= 9
inline constexpr std::uint64_t kMaxLabelings = 10'000'000;  // cut/colouring: K^N

inline std::uint64_t factorial_u64(int n) {
  std::uint64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

/// Calls fn for every feasible native sequence/labelling, in ascending
/// lexicographic order. Throws resource_limit_error past the caps above.
inline void for_each_feasible_sequence(const ProblemInstance& instance,
                                       const std::function<void(const std::vector<int>&)>& fn) {
  std::visit(
      [&](const auto& inst) {
        using T = std::decay_t<decltype(inst)>;
        if constexpr (std::is_same_v<T, TspInstance> || std::is_same_v<T, SchedulingInstance>) {
          int n;
          if constexpr (std::is_same_v<T, TspInstance>)
            n = inst.num_cities();
          else
            n = inst.num_jobs();
          if (n > kMaxPermutationJobs)
            throw resource_limit_error(
                "oracle: " + std::to_string(n) + "! permutations exceed the enumeration cap of " +
                    std::to_string(kMaxPermutationJobs) + "!",
                factorial_u64(n));
          std::vector<int> seq(n);
          for (int i = 0; i < n; ++i) seq[i] = i;
          do {
            fn(seq);
          } while (std::next_permutation(seq.begin(), seq.end()));
        } else if constexpr (std::is_same_v<T, SdvrpInstance> || std::is_same_v<T, MdvrpInstance>) {
          std::vector<int> seq;
          if constexpr (std::is_same_v<T, SdvrpInstance>) {
            seq.assign(inst.vehicles, 0);
            for (int i = 1; i <= inst.num_customers(); ++i) seq.push_back(i);
          } else {
            for (int i = 0; i < inst.num_customers; ++i) seq.push_back(i);
            for (int d = 0; d < inst.num_depots(); ++d)
              seq.insert(seq.end(), inst.vehicles_per_depot[d], inst.depot_label(d));
          }
          std::sort(seq.begin(), seq.end());
          if (static_cast<int>(seq.size()) > kMaxSequenceLength)
            throw resource_limit_error("oracle: sequence length " + std::to_string(seq.size()) +
                                           " exceeds the enumeration cap of " +
                                           std::to_string(kMaxSequenceLength),
                                       factorial_u64(static_cast<int>(seq.size())));
          // next_permutation over the sorted multiset yields each distinct
          // arrangement exactly once; only depot adjacency still needs a check.
          do {
            if (sequence_feasible(instance, seq)) fn(seq);
          } while (std::next_permutation(seq.begin(), seq.end()));
        } else {
          static_assert(std::is_same_v<T, MaxKCutInstance> || std::is_same_v<T, ColoringInstance>);
          int n, k;
          if constexpr (std::is_same_v<T, MaxKCutInstance>) {
            n = inst.num_vertices;
            k = inst.partitions;
          } else {
            n = inst.num_vertices;
            k = inst.colors;
          }
          const std::uint64_t count = pow_u64(k, n);
          if (count > kMaxLabelings)
            throw resource_limit_error("oracle: " + std::to_string(count) +
                                           " labellings exceed the enumeration cap of " +
                                           std::to_string(kMaxLabelings),
                                       count);
          std::vector<int> seq(n, 0);
          for (std::uint64_t z = 0;; ++z) {
            fn(seq);
            int site = n - 1;
            while (site >= 0 && seq[site] == k - 1) seq[site--] = 0;
            if (site < 0) break;
            ++seq[site];
          }
        }
      },
      instance);
}

}  // namespace detail

/// Exhaustive optimum over the native solution space (never the encoded
/// Hilbert space). Minimizes cost everywhere except Max-K-Cut, which
/// maximizes the cut size.
inline ExactResult brute_force_optimum(const ProblemInstance& instance) {
  validate(instance);
  ExactResult result;
  result.sense = objective_sense(instance);
  const bool maximize = result.sense == Sense::maximize;
  result.optimal_value =
      maximize ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
  constexpr double tol = 1e-9;

  detail::for_each_feasible_sequence(instance, [&](const std::vector<int>& seq) {
    const double value = detail::sequence_objective(instance, seq);
    const double gain = maximize ? value - result.optimal_value : result.optimal_value - value;
    if (gain > tol) {
      result.optimal_value = value;
      result.optimizers.clear();
      result.optimizers.push_back(seq);
    } else if (std::abs(value - result.optimal_value) <= tol) {
      result.optimizers.push_back(seq);
    }
  });
  return result;
}

/// All basis indices of the (inst, encoding) register whose decode is
/// feasible, ascending. The register dimension must fit the element budget
/// even though no dense array is built: the indices address that register.
inline std::vector<std::uint64_t> enumerate_feasible(
    const ProblemInstance& instance, Encoding encoding,
    std::uint64_t max_elements = kDefaultElementBudget) {
  validate(instance);
  const auto [sites, local_dim] = detail::shape_of(instance);

  std::vector<std::uint64_t> indices;
  if (encoding == Encoding::qudo) {
    const std::uint64_t dim = pow_u64(local_dim, sites);
    if (dim > max_elements)
      throw resource_limit_error("enumerate_feasible: dimension " + std::to_string(dim) +
                                     " exceeds budget of " + std::to_string(max_elements),
                                 dim);
    detail::for_each_feasible_sequence(instance, [&](const std::vector<int>& seq) {
      indices.push_back(assignment_to_index(seq, local_dim));
    });
    return indices;  // lexicographic enumeration = ascending indices
  }

  const int vars = sites * local_dim;
  if (vars >= 64 || (std::uint64_t{1} << vars) > max_elements)
    throw resource_limit_error(
        "enumerate_feasible: qubo dimension 2^" + std::to_string(vars) + " exceeds budget of " +
            std::to_string(max_elements),
        vars >= 64 ? UINT64_MAX : std::uint64_t{1} << vars);

  const bool vertex_major = std::holds_alternative<MaxKCutInstance>(instance) ||
                            std::holds_alternative<ColoringInstance>(instance);
  detail::for_each_feasible_sequence(instance, [&](const std::vector<int>& seq) {
    // One-hot image of the sequence: variable bit f is worth 2^(vars-1-f).
    std::uint64_t index = 0;
    for (int j = 0; j < sites; ++j) {
      const int var = vertex_major ? j * local_dim + seq[j] : seq[j] * sites + j;
      index |= std::uint64_t{1} << (vars - 1 - var);
    }
    indices.push_back(index);
  });
  std::sort(indices.begin(), indices.end());
  return indices;
}

/// found / optimal, or nothing when the optimum is zero (the ratio is then
/// undefined and reported as a blank cell).
inline std::optional<double> approximation_ratio(double found, const ExactResult& exact) {
  if (exact.optimal_value == 0.0) return std::nullopt;
  return found / exact.optimal_value;
}

}  // namespace qudo
