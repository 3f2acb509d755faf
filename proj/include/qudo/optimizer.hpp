#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qudo/core.hpp"

namespace qudo {

struct OptimizerConfig {
  int max_iterations = 100;
  double initial_step = 0.5;      // radians
  double final_tolerance = 1e-4;  // terminal trust-region radius
  std::uint64_t seed = 0;
  int restarts = 10;
};

inline void validate(const OptimizerConfig& cfg) {
  if (cfg.max_iterations < 1) throw std::invalid_argument("optimizer: max_iterations must be >= 1");
  if (!(cfg.initial_step > 0.0)) throw std::invalid_argument("optimizer: initial_step must be > 0");
  if (!(cfg.final_tolerance > 0.0))
    throw std::invalid_argument("optimizer: final_tolerance must be > 0");
  if (cfg.restarts < 1) throw std::invalid_argument("optimizer: restarts must be >= 1");
}

/// One objective call: where, what it returned, and during which 1-based
/// iteration it happened. "Steps" count iterations, "evals" count entries of
/// this list; one iteration makes several calls.
struct Evaluation {
  std::vector<double> params;
  double value = 0.0;
  int iteration = 0;
};

struct RunTrace {
  std::vector<Evaluation> evaluations;
  int iterations_used = 0;
  std::vector<double> best_params;
  double best_objective = std::numeric_limits<double>::infinity();
  bool failed = false;  // objective returned a non-finite value; run aborted
};

using Objective = std::function<double(std::span<const double>)>;

/// Derivative-free local minimizer: compass search over the 2p angles. Each
/// iteration probes +-step along every coordinate, moves to the best
/// improving probe, and halves the step when nothing improves; the search
/// stops once the step falls below final_tolerance or after max_iterations
/// iterations. Every objective call is recorded in order; one iteration
/// makes several calls.
inline RunTrace minimize(const Objective& objective, int depth, const OptimizerConfig& cfg,
                         std::span<const double> start) {
  validate(cfg);
  const int dim = 2 * depth;
  if (depth < 1) throw std::invalid_argument("minimize: depth must be >= 1");
  if (static_cast<int>(start.size()) != dim)
    throw std::invalid_argument("minimize: expected " + std::to_string(dim) +
                                " parameters, got " + std::to_string(start.size()));

  RunTrace trace;
  struct abort_run {};  // unwinds to the catch below on a non-finite value
  int current_iteration = 1;

  auto evaluate = [&](const std::vector<double>& params) -> double {
    const double value = objective(params);
    trace.evaluations.push_back({params, value, current_iteration});
    if (!std::isfinite(value)) {
      trace.failed = true;
      throw abort_run{};
    }
    if (value < trace.best_objective) {
      trace.best_objective = value;
      trace.best_params = params;
    }
    return value;
  };

  std::vector<double> x(start.begin(), start.end());
  trace.best_params = x;

  try {
    double fx = evaluate(x);
    double step = cfg.initial_step;
    while (current_iteration < cfg.max_iterations && step >= cfg.final_tolerance) {
      ++current_iteration;
      std::vector<double> best_point;
      double best_value = fx;
      for (int i = 0; i < dim; ++i) {
        for (double sign : {1.0, -1.0}) {
          std::vector<double> probe = x;
          probe[i] += sign * step;
          const double value = evaluate(probe);
          if (value < best_value) {
            best_value = value;
            best_point = std::move(probe);
          }
        }
      }
      if (best_point.empty()) {
        step *= 0.5;
      } else {
        x = std::move(best_point);
        fx = best_value;
      }
    }
  } catch (const abort_run&) {
    // trace.failed already set; keep the partial trace
  }

  trace.iterations_used = std::min(current_iteration, cfg.max_iterations);
  return trace;
}

/// Restart r's deterministic seed.
inline std::uint64_t child_seed(std::uint64_t seed, int restart) {
  return splitmix64(seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(restart + 1));
}

/// Restart r's starting point: gammas uniform in [0, 2*pi) followed by betas
/// uniform in [0, pi), covering one period of each layer.
inline std::vector<double> initial_params(std::uint64_t seed, int restart, int depth) {
  std::mt19937_64 rng(child_seed(seed, restart));
  std::vector<double> params(2 * static_cast<std::size_t>(depth));
  for (int l = 0; l < depth; ++l) params[l] = 2.0 * std::numbers::pi * uniform_double(rng);
  for (int l = 0; l < depth; ++l)
    params[depth + l] = std::numbers::pi * uniform_double(rng);
  return params;
}

/// cfg.restarts independent runs from seeded random starts. Failed runs are
/// returned flagged, not thrown.
inline std::vector<RunTrace> multi_start(const Objective& objective, int depth,
                                         const OptimizerConfig& cfg) {
  validate(cfg);
  std::vector<RunTrace> traces;
  traces.reserve(cfg.restarts);
  for (int r = 0; r < cfg.restarts; ++r)
    traces.push_back(minimize(objective, depth, cfg, initial_params(cfg.seed, r, depth)));
  return traces;
}

}  // namespace qudo
