#include "skewspec/fekete.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "skewspec/density.hpp"
#include "skewspec/errors.hpp"
#include "skewspec/kernels.hpp"
#include "skewspec/rng.hpp"

namespace skewspec {

namespace {

// Interleaved (x1, y1, ...) <-> SoA buffers for the pair kernels.
struct SoaScratch {
  std::vector<double> xs, ys, gx, gy;
  explicit SoaScratch(std::size_t m) : xs(m), ys(m), gx(m), gy(m) {}
  void load(std::span<const double> xy) {
    for (std::size_t k = 0; k < xs.size(); ++k) {
      xs[k] = xy[2 * k];
      ys[k] = xy[2 * k + 1];
    }
  }
  void store_gradient(std::span<double> g) const {
    for (std::size_t k = 0; k < xs.size(); ++k) {
      g[2 * k] = gx[k];
      g[2 * k + 1] = gy[k];
    }
  }
};

std::vector<double> interleave(std::span<const Point> pts) {
  std::vector<double> out;
  out.reserve(2 * pts.size());
  for (const auto& z : pts) {
    out.push_back(z.x);
    out.push_back(z.y);
  }
  return out;
}

template <class Points>
SpacingStats spacing_impl(const Points& pts) {
  const std::size_t m = pts.size();
  if (m < 2) throw std::invalid_argument("spacing_stats: need at least two points");
  std::vector<double> nn(m, std::numeric_limits<double>::infinity());
  double max_norm = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const auto [xi, yi] = pts[i];
    max_norm = std::max(max_norm, std::hypot(xi, yi));
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      const auto [xj, yj] = pts[j];
      nn[i] = std::min(nn[i], std::hypot(xi - xj, yi - yj));
    }
  }
  double mean = 0.0;
  for (double d : nn) mean += d;
  mean /= static_cast<double>(m);
  double var = 0.0;
  for (double d : nn) var += (d - mean) * (d - mean);
  var /= static_cast<double>(m);
  return {mean, mean > 0.0 ? std::sqrt(var) / mean : 0.0, max_norm};
}

}  // namespace

SkewSpectrum grid_initialization(int p) {
  if (p < 1) throw std::invalid_argument("grid_initialization: p must be >= 1");
  int q = 1;
  while (q * q < p) ++q;
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(p));
  for (int a = 1; a <= q && static_cast<int>(pts.size()) < p; ++a)
    for (int b = 1; b <= q && static_cast<int>(pts.size()) < p; ++b)
      pts.push_back({static_cast<double>(a), static_cast<double>(b)});
  return SkewSpectrum(std::move(pts));
}

double k_bound_lhs(double k, int p) {
  const double pp = static_cast<double>(p);
  return 0.5 * k * k - (3.0 * pp + 4.0 * pp * pp) * std::log(k) - 0.5 * pp * pp * std::log(400.0) -
         4.0 * pp * pp;
}

double solve_k_bound(int p) {
  if (p < 1) throw std::invalid_argument("solve_k_bound: p must be >= 1");
  // k_bound_lhs is increasing on [3p, inf) since 9p^2 > 4p^2 + 3p.
  double lo = 3.0 * p;
  if (k_bound_lhs(lo, p) > 0.0) return lo;
  double hi = 2.0 * lo;
  while (!(k_bound_lhs(hi, p) > 0.0)) {
    lo = hi;
    hi *= 2.0;
  }
  while (hi - lo > 1e-7) {
    const double mid = 0.5 * (lo + hi);
    (k_bound_lhs(mid, p) > 0.0 ? hi : lo) = mid;
  }
  return hi;
}

FeketeResult minimize_tau(int p, const OptimizerConfig& cfg) {
  if (p < 1) throw std::invalid_argument("minimize_tau: p must be >= 1");
  cfg.validate();
  const double k_bound = solve_k_bound(p);
  const double grad_tol = cfg.grad_tol.value_or(1e-6 * p);
  const SkewSpectrum grid = grid_initialization(p);
  const std::vector<double> start = interleave(grid.points());
  const int runs = cfg.restarts + 1;

  std::vector<DescentResult> results(static_cast<std::size_t>(runs));
  parallel_for(runs, cfg.threads, [&](int r) {
    std::vector<double> x0 = start;
    if (r > 0) {
      Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(r)));
      for (double& v : x0) v *= std::exp(cfg.perturbation_sigma * rng.normal());
    }
    SoaScratch scratch(static_cast<std::size_t>(p));
    const Objective objective = [&scratch](std::span<const double> xy, std::span<double> g) {
      scratch.load(xy);
      const double v = tau_with_gradient(scratch.xs, scratch.ys, scratch.gx, scratch.gy);
      if (std::isfinite(v)) scratch.store_gradient(g);
      return v;
    };
    const ValueFn value = [&scratch](std::span<const double> xy) {
      scratch.load(xy);
      return tau_soa(scratch.xs, scratch.ys);
    };
    results[static_cast<std::size_t>(r)] = projected_gradient_descent(
        objective, value, std::move(x0), cfg.boundary_floor, k_bound, grad_tol, cfg);
  });

  int best = -1;
  for (int r = 0; r < runs; ++r) {
    const auto& res = results[static_cast<std::size_t>(r)];
    if (!std::isfinite(res.value)) continue;
    if (best < 0 || res.value < results[static_cast<std::size_t>(best)].value) best = r;
  }
  if (best < 0) throw Error("minimize_tau: no restart reached a finite tau");

  auto& win = results[static_cast<std::size_t>(best)];
  FeketeResult out{SkewSpectrum::from_interleaved(win.x).sorted(),
                   win.value,
                   win.grad_norm_inf,
                   win.iterations,
                   k_bound,
                   win.converged,
                   best,
                   win.trace,
                   {},
                   tau(grid)};
  out.restart_traces.reserve(results.size());
  for (auto& r : results) out.restart_traces.push_back(std::move(r.trace));
  return out;
}

SkewSpectrum fekete_set(const FeketeResult& maximizer) {
  const double p = static_cast<double>(maximizer.points.size());
  return maximizer.points.scaled(1.0 / std::sqrt(p));
}

SkewSpectrum fekete_set(int p, const OptimizerConfig& cfg) { return fekete_set(minimize_tau(p, cfg)); }

CommutingResult minimize_commuting(int n, double gamma, const OptimizerConfig& cfg) {
  if (n < 1) throw std::invalid_argument("minimize_commuting: n must be >= 1");
  if (!(gamma > 0.0)) throw std::invalid_argument("minimize_commuting: gamma must be positive");
  cfg.validate();
  const double half_width = 4.0 * std::sqrt(static_cast<double>(n));
  const double grad_tol = cfg.grad_tol.value_or(1e-6 * n);
  const double spacing = 1.0 / std::sqrt(gamma);

  int q = 1;
  while (q * q < n) ++q;
  std::vector<double> start;
  start.reserve(static_cast<std::size_t>(2 * n));
  const double centre = 0.5 * (q - 1);
  for (int a = 0; a < q && static_cast<int>(start.size()) < 2 * n; ++a)
    for (int b = 0; b < q && static_cast<int>(start.size()) < 2 * n; ++b) {
      start.push_back((a - centre) * spacing);
      start.push_back((b - centre) * spacing);
    }

  const int runs = cfg.restarts + 1;
  std::vector<DescentResult> results(static_cast<std::size_t>(runs));
  parallel_for(runs, cfg.threads, [&](int r) {
    std::vector<double> x0 = start;
    if (r > 0) {
      Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(r)));
      for (double& v : x0) v += cfg.perturbation_sigma * spacing * rng.normal();
    }
    SoaScratch scratch(static_cast<std::size_t>(n));
    const auto energy = [&scratch, gamma]() {
      const double pairs = kernels::active().log_sqdist_sum(scratch.xs, scratch.ys);
      if (pairs == -std::numeric_limits<double>::infinity()) return std::numeric_limits<double>::infinity();
      double conf = 0.0;
      for (std::size_t k = 0; k < scratch.xs.size(); ++k)
        conf += scratch.xs[k] * scratch.xs[k] + scratch.ys[k] * scratch.ys[k];
      return gamma * conf - pairs;
    };
    const Objective objective = [&scratch, energy, gamma](std::span<const double> xy, std::span<double> g) {
      scratch.load(xy);
      const double v = energy();
      if (!std::isfinite(v)) return v;
      kernels::active().log_sqdist_grad(scratch.xs, scratch.ys, scratch.gx, scratch.gy);
      for (std::size_t k = 0; k < scratch.xs.size(); ++k) {
        scratch.gx[k] = 2.0 * gamma * scratch.xs[k] - scratch.gx[k];
        scratch.gy[k] = 2.0 * gamma * scratch.ys[k] - scratch.gy[k];
      }
      scratch.store_gradient(g);
      return v;
    };
    const ValueFn value = [&scratch, energy](std::span<const double> xy) {
      scratch.load(xy);
      return energy();
    };
    results[static_cast<std::size_t>(r)] =
        projected_gradient_descent(objective, value, std::move(x0), -half_width, half_width, grad_tol, cfg);
  });

  int best = -1;
  for (int r = 0; r < runs; ++r) {
    const auto& res = results[static_cast<std::size_t>(r)];
    if (!std::isfinite(res.value)) continue;
    if (best < 0 || res.value < results[static_cast<std::size_t>(best)].value) best = r;
  }
  if (best < 0) throw Error("minimize_commuting: no restart reached a finite value");

  auto& win = results[static_cast<std::size_t>(best)];
  CommutingResult out;
  for (std::size_t k = 0; k + 1 < win.x.size(); k += 2) out.points.push_back({win.x[k], win.x[k + 1]});
  std::sort(out.points.begin(), out.points.end());
  out.value_final = win.value;
  out.grad_norm_final = win.grad_norm_inf;
  out.iterations = win.iterations;
  out.converged = win.converged;
  out.best_restart = best;
  out.trace = std::move(win.trace);
  return out;
}

SpacingStats spacing_stats(std::span<const Point> points) {
  std::vector<std::array<double, 2>> pts;
  pts.reserve(points.size());
  for (const auto& z : points) pts.push_back({z.x, z.y});
  return spacing_impl(pts);
}

SpacingStats spacing_stats(std::span<const std::array<double, 2>> points) { return spacing_impl(points); }

}  // namespace skewspec
