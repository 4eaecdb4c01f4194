#include "skewspec/optimize.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace skewspec {

namespace {

constexpr double kMinStep = 1e-20;
constexpr double kMaxStep = 1e6;
// Relative accuracy assumed for objective values (sums of many logarithms).
constexpr double kValueNoise = 1e-13;

double max_point_norm(std::span<const double> xy) {
  double m = 0.0;
  for (std::size_t k = 0; k + 1 < xy.size(); k += 2) m = std::max(m, std::hypot(xy[k], xy[k + 1]));
  return m;
}

double projected_grad_inf(std::span<const double> x, std::span<const double> g, double lower, double upper) {
  double m = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if ((x[i] <= lower && g[i] > 0.0) || (x[i] >= upper && g[i] < 0.0)) continue;
    m = std::max(m, std::abs(g[i]));
  }
  return m;
}

double projected_grad_sq(std::span<const double> x, std::span<const double> g, double lower, double upper) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if ((x[i] <= lower && g[i] > 0.0) || (x[i] >= upper && g[i] < 0.0)) continue;
    s += g[i] * g[i];
  }
  return s;
}

}  // namespace

void OptimizerConfig::validate() const {
  if (max_iters < 0) throw std::invalid_argument("OptimizerConfig: max_iters must be >= 0");
  if (!(step_init > 0.0)) throw std::invalid_argument("OptimizerConfig: step_init must be > 0");
  if (!(armijo_c > 0.0 && armijo_c < 1.0))
    throw std::invalid_argument("OptimizerConfig: armijo_c must lie in (0, 1)");
  if (!(shrink > 0.0 && shrink < 1.0))
    throw std::invalid_argument("OptimizerConfig: shrink must lie in (0, 1)");
  if (grad_tol && !(*grad_tol >= 0.0)) throw std::invalid_argument("OptimizerConfig: grad_tol must be >= 0");
  if (!(boundary_floor > 0.0)) throw std::invalid_argument("OptimizerConfig: boundary_floor must be > 0");
  if (restarts < 0) throw std::invalid_argument("OptimizerConfig: restarts must be >= 0");
  if (trace_stride < 1) throw std::invalid_argument("OptimizerConfig: trace_stride must be >= 1");
  if (threads < 1) throw std::invalid_argument("OptimizerConfig: threads must be >= 1");
}

DescentResult projected_gradient_descent(const Objective& objective, const ValueFn& value,
                                         std::vector<double> x0, double lower, double upper, double grad_tol,
                                         const OptimizerConfig& cfg) {
  DescentResult res;
  res.x = std::move(x0);
  for (double& v : res.x) v = std::clamp(v, lower, upper);
  std::vector<double> g(res.x.size()), trial(res.x.size()), g_trial(res.x.size());

  res.value = objective(res.x, g);
  if (!std::isfinite(res.value)) return res;
  res.trace.push_back({0, res.value, max_point_norm(res.x)});

  double eta = cfg.step_init;
  int it = 0;
  for (;; ++it) {
    res.grad_norm_inf = projected_grad_inf(res.x, g, lower, upper);
    if (res.grad_norm_inf <= grad_tol) {
      res.converged = true;
      break;
    }
    if (it == cfg.max_iters) break;

    bool accepted = false;
    double trial_value = 0.0;
    while (eta >= kMinStep) {
      double decrease = 0.0;
      for (std::size_t i = 0; i < trial.size(); ++i) {
        trial[i] = std::clamp(res.x[i] - eta * g[i], lower, upper);
        decrease += g[i] * (res.x[i] - trial[i]);
      }
      if (decrease <= 0.0) break;
      trial_value = value(trial);
      if (std::isfinite(trial_value)) {
        // Below round-off of the value a sufficient decrease cannot be
        // observed; there a non-increasing step must shrink the projected gradient.
        const double noise = kValueNoise * std::max(1.0, std::abs(res.value));
        if (cfg.armijo_c * decrease > noise) {
          if (trial_value <= res.value - cfg.armijo_c * decrease) {
            objective(trial, g_trial);
            accepted = true;
            break;
          }
        } else if (trial_value <= res.value) {
          objective(trial, g_trial);
          if (projected_grad_sq(trial, g_trial, lower, upper) < projected_grad_sq(res.x, g, lower, upper)) {
            accepted = true;
            break;
          }
        }
      }
      eta *= cfg.shrink;
    }
    if (!accepted) break;

    res.x.swap(trial);
    g.swap(g_trial);
    res.value = trial_value;
    eta = std::min(eta / cfg.shrink, kMaxStep);
    if ((it + 1) % cfg.trace_stride == 0) res.trace.push_back({it + 1, res.value, max_point_norm(res.x)});
  }
  res.iterations = it;
  if (res.trace.back().iteration != it) res.trace.push_back({it, res.value, max_point_norm(res.x)});
  return res;
}

void parallel_for(int count, int threads, const std::function<void(int)>& job) {
  if (threads <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::jthread> pool;
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  const int workers = std::min(threads, count);
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          job(i);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      }
    });
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace skewspec
