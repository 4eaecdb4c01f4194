#include <doctest.h>

#include <atomic>
#include <cmath>
#include <stdexcept>

#include "skewspec/density.hpp"
#include "skewspec/fekete.hpp"
#include "skewspec/optimize.hpp"

using namespace skewspec;

TEST_SUITE("optimize") {
  TEST_CASE("config validation") {
    OptimizerConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.shrink = 1.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.max_iters = -1;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.restarts = -1;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  }

  TEST_CASE("box-constrained quadratic") {
    // minimum of sum (x_i - c_i)^2 on [0, 1]: clamps c = 2 to 1 and c = -1 to 0
    const std::vector<double> c{0.25, 2.0, -1.0, 0.75};
    const Objective obj = [&](std::span<const double> x, std::span<double> g) {
      double v = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        v += (x[i] - c[i]) * (x[i] - c[i]);
        g[i] = 2 * (x[i] - c[i]);
      }
      return v;
    };
    const ValueFn val = [&](std::span<const double> x) {
      std::vector<double> g(x.size());
      return obj(x, g);
    };
    OptimizerConfig cfg;
    const auto r = projected_gradient_descent(obj, val, {0.5, 0.5, 0.5, 0.5}, 0.0, 1.0, 1e-10, cfg);
    CHECK(r.converged);
    CHECK(r.x[0] == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(r.x[1] == 1.0);
    CHECK(r.x[2] == 0.0);
    CHECK(r.x[3] == doctest::Approx(0.75).epsilon(1e-9));
    for (std::size_t i = 1; i < r.trace.size(); ++i) CHECK(r.trace[i].value <= r.trace[i - 1].value);
  }

  TEST_CASE("parallel_for runs every job once and propagates errors") {
    std::vector<std::atomic<int>> hits(37);
    parallel_for(37, 4, [&](int i) { hits[static_cast<std::size_t>(i)]++; });
    for (const auto& h : hits) CHECK(h.load() == 1);
    CHECK_THROWS_AS(parallel_for(5, 2,
                                 [](int i) {
                                   if (i == 3) throw std::runtime_error("job failed");
                                 }),
                    std::runtime_error);
  }
}

TEST_SUITE("fekete") {
  TEST_CASE("grid initialization") {
    const auto g4 = grid_initialization(4);
    CHECK(g4.interleaved() == std::vector<double>{1, 1, 1, 2, 2, 1, 2, 2});
    const auto g3 = grid_initialization(3);
    CHECK(g3.interleaved() == std::vector<double>{1, 1, 1, 2, 2, 1});
    CHECK(tau(g3) <= 36.0);
    CHECK(grid_initialization(1).interleaved() == std::vector<double>{1, 1});
    CHECK(tau(grid_initialization(1)) == doctest::Approx(1 - 0.5 * std::log(2.0)));
    for (int p = 1; p <= 64; ++p) CHECK(tau(grid_initialization(p)) <= 4.0 * p * p);
  }

  TEST_CASE("radius bound") {
    const double k1 = solve_k_bound(1);
    CHECK(k1 > 6.0);
    CHECK(k1 < 6.5);
    CHECK(k_bound_lhs(6.0, 1) < 0.0);
    CHECK(k_bound_lhs(6.5, 1) > 0.0);
    CHECK(k_bound_lhs(3.0, 1) <= 0.0);
    for (int p : {1, 2, 5, 10, 40}) {
      const double k = solve_k_bound(p);
      CHECK(k >= 3.0 * p);
      CHECK(k_bound_lhs(k, p) > 0.0);
      CHECK((k - 1e-3 < 3.0 * p || k_bound_lhs(k - 1e-3, p) <= 0.0));
    }
    CHECK(solve_k_bound(10) >= 30.0);
  }

  TEST_CASE("p = 1 optimum") {
    OptimizerConfig cfg;
    cfg.grad_tol = 1e-9;
    const auto r = minimize_tau(1, cfg);
    CHECK(r.converged);
    CHECK(std::abs(r.points[0].x - std::sqrt(1.5)) <= 1e-6);
    CHECK(std::abs(r.points[0].y - std::sqrt(1.5)) <= 1e-6);
    CHECK(r.grad_norm_final <= 1e-8);
    const auto f = fekete_set(r);
    CHECK(f[0].x == r.points[0].x);
  }

  TEST_CASE("n = 20 maximizer") {
    OptimizerConfig cfg;
    const auto r = minimize_tau(10, cfg);
    CHECK(r.converged);
    CHECK(r.grad_norm_final <= 1e-6 * 10);
    const double radius = 1.1 * 2.0 * std::sqrt(20.0);
    for (const auto& z : r.points.points()) {
      CHECK(z.x > 0.0);
      CHECK(z.y > 0.0);
      CHECK(std::sqrt(z.norm_squared()) <= radius);
    }
    for (std::size_t k = 1; k < r.points.size(); ++k) CHECK(r.points[k - 1].x <= r.points[k].x);
    CHECK(spacing_stats(r.points.points()).nn_cv < 0.5);
    CHECK(r.tau_final <= r.tau_initial);
    // optimum cross-checked with an independent Nelder-Mead + BFGS minimization (20 random starts)
    CHECK(r.tau_final == doctest::Approx(-559.3699344449112).epsilon(1e-9));
    CHECK(spacing_stats(r.points.points()).max_norm == doctest::Approx(7.8341815401664965).epsilon(1e-5));
    REQUIRE(r.restart_traces.size() == 9);
    for (const auto& trace : r.restart_traces) {
      for (std::size_t i = 1; i < trace.size(); ++i) CHECK(trace[i].value <= trace[i - 1].value);
      for (const auto& t : trace)
        if (t.value <= 4.0 * 100) CHECK(t.max_norm <= r.k_bound);
    }
    // scale relation
    const auto f = fekete_set(r);
    CHECK(tau(f.scaled(std::sqrt(10.0))) == doctest::Approx(r.tau_final).epsilon(1e-12));
    const double m = spacing_stats(f.points()).max_norm;
    CHECK(std::abs(m / std::sqrt(8.0) - 1.0) <= 0.15);
  }

  TEST_CASE("determinism, threads and restarts") {
    OptimizerConfig cfg;
    cfg.seed = 5;
    cfg.restarts = 4;
    const auto a = minimize_tau(6, cfg);
    const auto b = minimize_tau(6, cfg);
    CHECK(a.points.interleaved() == b.points.interleaved());
    cfg.threads = 3;
    const auto c = minimize_tau(6, cfg);
    CHECK(a.points.interleaved() == c.points.interleaved());
    CHECK(a.tau_final == c.tau_final);
    cfg.restarts = 8;
    CHECK(minimize_tau(6, cfg).tau_final <= a.tau_final);
  }

  TEST_CASE("commuting maximizers") {
    OptimizerConfig cfg;
    const auto two = minimize_commuting(2, 0.5, cfg);
    REQUIRE(two.points.size() == 2);
    CHECK(two.points[0][0] == doctest::Approx(-two.points[1][0]).epsilon(1e-6));
    CHECK(two.points[0][1] == doctest::Approx(-two.points[1][1]).epsilon(1e-6));
    // stationarity of gamma sum |l|^2 - log |l1 - l2|^2: |l| = 1/sqrt(2 gamma) each
    CHECK(std::hypot(two.points[0][0], two.points[0][1]) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(two.grad_norm_final <= 1e-6 * 2);

    // optimum cross-checked with an independent BFGS minimization (30 random starts)
    const auto forty = minimize_commuting(40, 0.5, cfg);
    CHECK(forty.converged);
    CHECK(forty.value_final == doctest::Approx(-2321.395712109888).epsilon(1e-8));
    CHECK(spacing_stats(forty.points).max_norm == doctest::Approx(7.780264721115855).epsilon(1e-3));
    for (std::size_t i = 1; i < forty.trace.size(); ++i)
      CHECK(forty.trace[i].value <= forty.trace[i - 1].value);
  }

  TEST_CASE("spacing statistics") {
    std::vector<Point> grid;
    for (int i = 1; i <= 3; ++i)
      for (int j = 1; j <= 3; ++j) grid.push_back({double(i), double(j)});
    const auto s = spacing_stats(grid);
    CHECK(s.nn_mean == 1.0);
    CHECK(s.nn_cv == 0.0);
    CHECK(s.max_norm == doctest::Approx(std::sqrt(18.0)));
    const std::vector<std::array<double, 2>> pair{{0, 0}, {3, 4}};
    CHECK(spacing_stats(pair).nn_cv == 0.0);
    CHECK(spacing_stats(pair).nn_mean == 5.0);
    CHECK_THROWS_AS(spacing_stats(std::vector<Point>{{1, 1}}), std::invalid_argument);
  }
}
