#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace skewspec {

struct OptimizerConfig {
  int max_iters = 50000;
  double step_init = 0.1;
  double armijo_c = 1e-4;
  double shrink = 0.5;
  std::optional<double> grad_tol;  // default 1e-6 * p
  double boundary_floor = 1e-8;
  int restarts = 8;
  std::uint64_t seed = 0;
  double perturbation_sigma = 0.1;
  int trace_stride = 1;
  int threads = 1;

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

struct TraceSample {
  int iteration = 0;
  double value = 0.0;
  double max_norm = 0.0;  // largest |z_k| of the iterate
};

/// Objective over interleaved planar coordinates (x1, y1, x2, y2, ...):
/// returns the value and writes the gradient; +inf marks infeasible points.
using Objective = std::function<double(std::span<const double>, std::span<double>)>;
/// Value only (line-search trials).
using ValueFn = std::function<double(std::span<const double>)>;

struct DescentResult {
  std::vector<double> x;
  double value = 0.0;
  double grad_norm_inf = 0.0;  // of the projected gradient
  int iterations = 0;
  bool converged = false;
  std::vector<TraceSample> trace;
};

/// Projected gradient descent on the box [lower, upper] with Armijo
/// backtracking. The trial step starts at step_init and grows by 1/shrink after
/// every accepted step. Accepted iterates never increase the objective.
DescentResult projected_gradient_descent(const Objective& objective, const ValueFn& value,
                                         std::vector<double> x0, double lower, double upper, double grad_tol,
                                         const OptimizerConfig& cfg);

/// Runs `count` independent jobs on up to `threads` threads; job i receives i.
void parallel_for(int count, int threads, const std::function<void(int)>& job);

}  // namespace skewspec
