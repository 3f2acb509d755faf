#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "qudo/bench.hpp"
#include "qudo/oracle.hpp"
#include "qudo/problems.hpp"

using namespace qudo;
using Catch::Approx;

TEST_CASE("three-city tours all traverse the same triangle", "[oracle]") {
  const TspInstance tri{{{0, 2, 7}, {2, 0, 3}, {7, 3, 0}}};
  const ExactResult exact = brute_force_optimum(tri);
  CHECK(exact.optimal_value == Approx(2.0 + 3.0 + 7.0));
  CHECK(exact.optimizers.size() == 6);  // every permutation is optimal
  CHECK(exact.sense == Sense::minimize);
}

TEST_CASE("four-city tour optimum and its symmetry orbit", "[oracle]") {
  const TspInstance tsp{{{0, 1, 4, 2}, {1, 0, 2, 5}, {4, 2, 0, 1}, {2, 5, 1, 0}}};
  const ExactResult exact = brute_force_optimum(tsp);
  CHECK(exact.optimal_value == 6.0);
  // The cyclic order (0,1,2,3) in 4 rotations times 2 directions.
  CHECK(exact.optimizers.size() == 8);
  for (const auto& tour : exact.optimizers) {
    CHECK(detail::sequence_feasible(tsp, tour));
    CHECK(detail::sequence_objective(tsp, tour) == Approx(6.0));
  }
}

TEST_CASE("two-job schedule matches the positional cost arithmetic", "[oracle]") {
  // p = (1,2), w = (2,1): both orders cost 2*1*1 + 1*2*2 = 6, a tie.
  const SchedulingInstance jobs{{1, 2}, {2, 1}};
  const ExactResult exact = brute_force_optimum(jobs);
  CHECK(exact.optimal_value == 6.0);
  REQUIRE(exact.optimizers.size() == 2);
  CHECK(exact.optimizers[0] == std::vector<int>{0, 1});
  CHECK(exact.optimizers[1] == std::vector<int>{1, 0});
}

TEST_CASE("scheduling optimum equals the descending w*p exchange rule", "[oracle]") {
  // For cost sum_j w_j p_j * position, swapping adjacent jobs i before k
  // changes the cost by w_k p_k - w_i p_i, so sorting by descending w*p is
  // optimal. Cross-check the enumerator against that greedy on 100 instances.
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = uniform_int(rng, 2, 8);
    SchedulingInstance inst;
    for (int i = 0; i < n; ++i) {
      inst.processing.push_back(uniform_int(rng, 1, 9));
      inst.weights.push_back(uniform_int(rng, 1, 9));
    }
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return inst.weights[a] * inst.processing[a] > inst.weights[b] * inst.processing[b];
    });
    double greedy = 0.0;
    for (int j = 0; j < n; ++j)
      greedy += inst.weights[order[j]] * inst.processing[order[j]] * (j + 1);

    const ExactResult exact = brute_force_optimum(inst);
    CHECK(exact.optimal_value == Approx(greedy).margin(1e-9));
  }
}

TEST_CASE("complete graphs cut everything with enough partitions", "[oracle]") {
  MaxKCutInstance k4;
  k4.num_vertices = 4;
  k4.partitions = 4;
  for (int u = 0; u < 4; ++u)
    for (int v = u + 1; v < 4; ++v) k4.edges.push_back({u, v});
  const ExactResult exact = brute_force_optimum(k4);
  CHECK(exact.sense == Sense::maximize);
  CHECK(exact.optimal_value == 6.0);

  // A 4-cycle is bipartite: 2 partitions already cut all 4 edges.
  const MaxKCutInstance c4{4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}}, 2};
  CHECK(brute_force_optimum(c4).optimal_value == 4.0);
  const MaxKCutInstance tri{3, {{0, 1}, {1, 2}, {0, 2}}, 2};
  CHECK(brute_force_optimum(tri).optimal_value == 2.0);
}

TEST_CASE("coloring counts minimum clashes", "[oracle]") {
  const ColoringInstance tri3{3, {{0, 1}, {1, 2}, {0, 2}}, 3};
  const ExactResult proper = brute_force_optimum(tri3);
  CHECK(proper.optimal_value == 0.0);
  CHECK(proper.optimizers.size() == 6);  // 3! colour assignments

  const ColoringInstance tri2{3, {{0, 1}, {1, 2}, {0, 2}}, 2};
  CHECK(brute_force_optimum(tri2).optimal_value == 1.0);
}

TEST_CASE("vrp enumeration respects multiset and adjacency constraints", "[oracle]") {
  // 2 customers, 2 vehicles: arrangements of {0,0,1,2} = 4!/2! = 12.
  const SdvrpInstance sdvrp{{{0, 2, 3}, {2, 0, 4}, {3, 4, 0}}, 2};
  CHECK(enumerate_feasible(sdvrp, Encoding::qudo).size() == 12);
  const ExactResult exact = brute_force_optimum(sdvrp);
  CHECK(exact.optimal_value == 9.0);

  // 2 customers, 2 depots, 1 vehicle each: depots may never sit next to each
  // other on the cycle, leaving 8 of the 24 arrangements.
  const MdvrpInstance mdvrp{{{0, 1, 2, 3}, {1, 0, 4, 5}, {2, 4, 0, 6}, {3, 5, 6, 0}}, 2, {1, 1}};
  const auto feasible = enumerate_feasible(mdvrp, Encoding::qudo);
  CHECK(feasible.size() == 8);
  const ExactResult mexact = brute_force_optimum(mdvrp);
  for (const auto& seq : mexact.optimizers) {
    CHECK(detail::sequence_feasible(mdvrp, seq));
    const auto counts = detail::label_counts(seq, 4);
    CHECK(counts == std::vector<int>{1, 1, 1, 1});
  }
}

TEST_CASE("feasible indices are exact, sorted, and encoding-consistent", "[oracle]") {
  const TspInstance tsp3{{{0, 1, 2}, {1, 0, 3}, {2, 3, 0}}};
  // Permutations of (0,1,2) as base-3 numbers: 012->5, 021->7, 102->11,
  // 120->15, 201->19, 210->21.
  CHECK(enumerate_feasible(tsp3, Encoding::qudo) ==
        std::vector<std::uint64_t>{5, 7, 11, 15, 19, 21});

  const TspInstance tsp2{{{0, 1}, {1, 0}}};
  // One-hot layout x_{city,pos} = city*2 + pos over 4 bits, big-endian:
  // tour (0,1) sets bits 0 and 3 -> 0b1001, tour (1,0) sets 1 and 2 -> 0b0110.
  CHECK(enumerate_feasible(tsp2, Encoding::qubo) == std::vector<std::uint64_t>{6, 9});

  // Both encodings decode to the same structured solutions.
  for (const ProblemInstance& inst :
       {ProblemInstance{tsp3}, ProblemInstance{SdvrpInstance{{{0, 2, 3}, {2, 0, 4}, {3, 4, 0}}, 2}},
        ProblemInstance{ColoringInstance{3, {{0, 1}, {1, 2}}, 2}}}) {
    const auto [sites, local_dim] = detail::shape_of(inst);
    const auto qudo_idx = enumerate_feasible(inst, Encoding::qudo);
    const auto qubo_idx = enumerate_feasible(inst, Encoding::qubo);
    REQUIRE(qudo_idx.size() == qubo_idx.size());
    CHECK(std::is_sorted(qudo_idx.begin(), qudo_idx.end()));
    CHECK(std::is_sorted(qubo_idx.begin(), qubo_idx.end()));

    std::vector<std::vector<int>> qudo_solutions, qubo_solutions;
    for (std::uint64_t idx : qudo_idx)
      qudo_solutions.push_back(
          decode(inst, Encoding::qudo, index_to_assignment(idx, sites, local_dim)).labels);
    for (std::uint64_t idx : qubo_idx)
      qubo_solutions.push_back(
          decode(inst, Encoding::qubo, index_to_assignment(idx, sites * local_dim, 2)).labels);
    std::sort(qudo_solutions.begin(), qudo_solutions.end());
    std::sort(qubo_solutions.begin(), qubo_solutions.end());
    CHECK(qudo_solutions == qubo_solutions);
  }
}

TEST_CASE("enumeration caps throw resource errors", "[oracle]") {
  // 10 cities: 10! permutations exceed the cap.
  std::vector<std::vector<double>> big(10, std::vector<double>(10, 1.0));
  for (int i = 0; i < 10; ++i) big[i][i] = 0.0;
  CHECK_THROWS_AS(brute_force_optimum(TspInstance{big}), resource_limit_error);

  // 2^24 > 10^7 labellings.
  ColoringInstance wide;
  wide.num_vertices = 24;
  wide.colors = 2;
  for (int v = 1; v < 24; ++v) wide.edges.push_back({0, v});
  CHECK_THROWS_AS(brute_force_optimum(wide), resource_limit_error);

  // Feasible-set enumeration also guards the register dimension.
  const TspInstance tsp4{{{0, 1, 4, 2}, {1, 0, 2, 5}, {4, 2, 0, 1}, {2, 5, 1, 0}}};
  CHECK_THROWS_AS(enumerate_feasible(tsp4, Encoding::qubo, 1024), resource_limit_error);
  CHECK_NOTHROW(enumerate_feasible(tsp4, Encoding::qudo, 1024));
}

TEST_CASE("approximation ratio handles both senses and zero optima", "[oracle]") {
  ExactResult min_exact;
  min_exact.optimal_value = 6.0;
  min_exact.sense = Sense::minimize;
  CHECK(*approximation_ratio(9.0, min_exact) == Approx(1.5));
  CHECK(*approximation_ratio(6.0, min_exact) == Approx(1.0));

  ExactResult max_exact;
  max_exact.optimal_value = 4.0;
  max_exact.sense = Sense::maximize;
  CHECK(*approximation_ratio(3.0, max_exact) == Approx(0.75));

  ExactResult zero;
  zero.optimal_value = 0.0;
  CHECK(!approximation_ratio(0.0, zero).has_value());
  CHECK(!approximation_ratio(2.0, zero).has_value());
}

TEST_CASE("optimizer lists carry ties within tolerance", "[oracle]") {
  // Square metric: the perimeter tour wins in all 8 rotations/reflections.
  const TspInstance square{{{0, 1, 2, 1}, {1, 0, 1, 2}, {2, 1, 0, 1}, {1, 2, 1, 0}}};
  const ExactResult exact = brute_force_optimum(square);
  CHECK(exact.optimal_value == 4.0);
  CHECK(exact.optimizers.size() == 8);
  for (const auto& tour : exact.optimizers)
    CHECK(detail::sequence_objective(square, tour) == Approx(4.0));
}
