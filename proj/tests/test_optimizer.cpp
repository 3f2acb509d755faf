#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <span>
#include <vector>

#include "qudo/optimizer.hpp"

using namespace qudo;
using Catch::Approx;

TEST_CASE("bowl objective converges to its minimum", "[optimizer]") {
  const Objective bowl = [](std::span<const double> x) {
    return (x[0] - 1.0) * (x[0] - 1.0) + (x[1] + 2.0) * (x[1] + 2.0);
  };
  OptimizerConfig cfg;
  const std::vector<double> start = {4.0, 3.0};
  const RunTrace trace = minimize(bowl, 1, cfg, start);

  REQUIRE(!trace.failed);
  CHECK(trace.best_objective < 1e-4);
  CHECK(trace.best_params[0] == Approx(1.0).margin(0.05));
  CHECK(trace.best_params[1] == Approx(-2.0).margin(0.05));
}

TEST_CASE("trace records every call with its iteration", "[optimizer]") {
  const Objective bowl = [](std::span<const double> x) { return x[0] * x[0] + x[1] * x[1]; };
  OptimizerConfig cfg;
  cfg.max_iterations = 20;
  const RunTrace trace = minimize(bowl, 1, cfg, std::vector<double>{2.0, -1.0});

  REQUIRE(!trace.evaluations.empty());
  CHECK(trace.evaluations.front().iteration == 1);
  int prev = 1;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& e : trace.evaluations) {
    CHECK(e.iteration >= prev);         // iterations never go backwards
    CHECK(e.iteration <= cfg.max_iterations);
    prev = e.iteration;
    best = std::min(best, e.value);
    CHECK(e.params.size() == 2);
  }
  CHECK(trace.best_objective == best);
  CHECK(trace.iterations_used >= 1);
  CHECK(trace.iterations_used <= cfg.max_iterations);
  // best_params reproduces best_objective.
  CHECK(bowl(trace.best_params) == Approx(trace.best_objective));
}

TEST_CASE("constant objective shrinks the step to the tolerance", "[optimizer]") {
  int calls = 0;
  const Objective flat = [&calls](std::span<const double>) {
    ++calls;
    return 7.0;
  };
  OptimizerConfig cfg;  // step 0.5, tolerance 1e-4
  const RunTrace trace = minimize(flat, 1, cfg, std::vector<double>{0.0, 0.0});

  REQUIRE(!trace.failed);
  CHECK(trace.best_objective == 7.0);
  // On a flat landscape every iteration probes 2 * dim = 4 points, none
  // improves, and the step halves. 0.5 * 2^-13 < 1e-4 <= 0.5 * 2^-12, so the
  // step halves exactly 13 times after the initial evaluation before the
  // tolerance stops the loop.
  CHECK(trace.iterations_used == 1 + 13);
  CHECK(static_cast<int>(trace.evaluations.size()) == 1 + 13 * 4);
  CHECK(calls == static_cast<int>(trace.evaluations.size()));
}

TEST_CASE("max_iterations caps the loop", "[optimizer]") {
  const Objective slope = [](std::span<const double> x) { return x[0]; };
  OptimizerConfig cfg;
  cfg.max_iterations = 5;
  const RunTrace trace = minimize(slope, 1, cfg, std::vector<double>{0.0, 0.0});
  CHECK(trace.iterations_used == 5);
  for (const auto& e : trace.evaluations) CHECK(e.iteration <= 5);
}

TEST_CASE("non-finite objective aborts the run but keeps the trace", "[optimizer]") {
  int calls = 0;
  const Objective poisoned = [&calls](std::span<const double>) {
    ++calls;
    return calls == 3 ? std::numeric_limits<double>::quiet_NaN() : 1.0 / calls;
  };
  OptimizerConfig cfg;
  const RunTrace trace = minimize(poisoned, 1, cfg, std::vector<double>{0.0, 0.0});
  CHECK(trace.failed);
  CHECK(trace.evaluations.size() == 3);
  CHECK(std::isnan(trace.evaluations.back().value));
  CHECK(trace.best_objective == 0.5);  // best finite value seen before the abort
}

TEST_CASE("start vectors sample the full angle ranges deterministically", "[optimizer]") {
  std::set<std::uint64_t> seeds;
  for (int r = 0; r < 10; ++r) {
    seeds.insert(child_seed(42, r));
    const std::vector<double> params = initial_params(42, r, 3);
    REQUIRE(params.size() == 6);
    for (int l = 0; l < 3; ++l) {
      CHECK(params[l] >= 0.0);
      CHECK(params[l] < 2.0 * std::numbers::pi);
      CHECK(params[3 + l] >= 0.0);
      CHECK(params[3 + l] < std::numbers::pi);
    }
    CHECK(initial_params(42, r, 3) == params);  // reproducible
  }
  CHECK(seeds.size() == 10);  // restarts get distinct streams
  CHECK(initial_params(42, 0, 3) != initial_params(43, 0, 3));
}

TEST_CASE("multi_start runs every restart and is reproducible", "[optimizer]") {
  const Objective bowl = [](std::span<const double> x) {
    return std::cos(x[0]) * std::sin(x[1]) + 0.1 * x[0] * x[0];
  };
  OptimizerConfig cfg;
  cfg.restarts = 6;
  cfg.max_iterations = 30;
  cfg.seed = 7;

  const auto traces_a = multi_start(bowl, 1, cfg);
  const auto traces_b = multi_start(bowl, 1, cfg);
  REQUIRE(traces_a.size() == 6);
  REQUIRE(traces_b.size() == 6);
  for (std::size_t r = 0; r < 6; ++r) {
    CHECK(traces_a[r].best_objective == traces_b[r].best_objective);
    CHECK(traces_a[r].best_params == traces_b[r].best_params);
    CHECK(traces_a[r].evaluations.size() == traces_b[r].evaluations.size());
  }

  // Restarts start from different points.
  CHECK(traces_a[0].evaluations.front().params != traces_a[1].evaluations.front().params);
}

TEST_CASE("config validation rejects nonsense", "[optimizer]") {
  const Objective f = [](std::span<const double>) { return 0.0; };
  OptimizerConfig bad;
  bad.max_iterations = 0;
  CHECK_THROWS_AS(minimize(f, 1, bad, std::vector<double>{0, 0}), std::invalid_argument);
  bad = {};
  bad.initial_step = 0.0;
  CHECK_THROWS_AS(minimize(f, 1, bad, std::vector<double>{0, 0}), std::invalid_argument);
  bad = {};
  bad.restarts = 0;
  CHECK_THROWS_AS(multi_start(f, 1, bad), std::invalid_argument);
  CHECK_THROWS_AS(minimize(f, 1, OptimizerConfig{}, std::vector<double>{0, 0, 0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(minimize(f, 0, OptimizerConfig{}, std::vector<double>{}),
                  std::invalid_argument);
}

TEST_CASE("deeper parameter vectors are handled", "[optimizer]") {
  const Objective f = [](std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += (v - 0.5) * (v - 0.5);
    return s;
  };
  OptimizerConfig cfg;
  const std::vector<double> start(6, 2.0);
  const RunTrace trace = minimize(f, 3, cfg, start);
  CHECK(trace.best_objective < 1e-3);
  for (const auto& e : trace.evaluations) CHECK(e.params.size() == 6);
}
