#include "skewspec/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "skewspec/fekete.hpp"

namespace skewspec {

namespace {

constexpr int kAdaptWindow = 100;
constexpr double kTailMass = 1e-10;

double p1_unnormalized(double x, double y, double gamma) {
  const double r2 = x * x + y * y;
  return std::exp(-gamma * r2) * x * y * std::sqrt(r2);
}

// Fraction of the p = 1 mass outside the disk of radius L (the square [0, L]^2
// contains that disk's quarter): int_L^inf r^4 e^{-g r^2} dr / int_0^inf.
double radial_tail_fraction(double length, double gamma) {
  const double total = 3.0 * std::sqrt(std::numbers::pi) / (8.0 * std::pow(gamma, 2.5));
  const double upper = length + 40.0 / std::sqrt(gamma);
  const int steps = 20000;
  const double h = (upper - length) / steps;
  double tail = 0.0;
  for (int i = 0; i <= steps; ++i) {
    const double r = length + i * h;
    const double v = r * r * r * r * std::exp(-gamma * r * r);
    tail += (i == 0 || i == steps) ? 0.5 * v : v;
  }
  return tail * h / total;
}

double interpolate(const std::vector<double>& grid, const std::vector<double>& values, double a) {
  if (a <= grid.front()) return 0.0;
  if (a >= grid.back()) return values.back();
  const double h = grid[1] - grid[0];
  const auto i = std::min(static_cast<std::size_t>(a / h), grid.size() - 2);
  const double t = (a - grid[i]) / h;
  return (1.0 - t) * values[i] + t * values[i + 1];
}

}  // namespace

ChainState ChainState::start(SkewSpectrum config, const WeightSpec& w, double step_scale) {
  const LogDensityValue lr = log_rho(config, w);
  if (!lr.finite) throw std::invalid_argument("ChainState: starting configuration has zero density");
  return ChainState{std::move(config), lr.log_unnormalized, step_scale, 0, 0};
}

double acceptance_probability(const ChainState& state, std::span<const Point> proposal, const WeightSpec& w) {
  const LogDensityValue lr = log_rho(proposal, w);
  if (!lr.finite) return 0.0;
  const double delta = lr.log_unnormalized - state.log_density;
  return delta >= 0.0 ? 1.0 : std::exp(delta);
}

void metropolis_step(ChainState& state, const WeightSpec& w, Rng& rng) {
  ++state.proposed;
  std::vector<Point> proposal(state.config.points().begin(), state.config.points().end());
  bool inside = true;
  for (auto& z : proposal) {
    z.x += state.step_scale * rng.normal();
    z.y += state.step_scale * rng.normal();
    inside = inside && z.x > 0.0 && z.y > 0.0;
  }
  if (!inside) return;
  const LogDensityValue lr = log_rho(proposal, w);
  if (!lr.finite) return;
  const double delta = lr.log_unnormalized - state.log_density;
  if (delta < 0.0 && !(std::log(rng.uniform()) < delta)) return;
  state.config = SkewSpectrum(std::move(proposal));
  state.log_density = lr.log_unnormalized;
  ++state.accepted;
}

ChainReport run_chain(int p, const WeightSpec& w, const ChainSettings& settings) {
  if (p < 1) throw std::invalid_argument("run_chain: p must be >= 1");
  if (settings.n_samples < 1) throw std::invalid_argument("run_chain: n_samples must be >= 1");
  ChainReport rep;
  rep.burn_in = settings.burn_in >= 0 ? settings.burn_in : 10 * p * 1000;
  rep.thinning = settings.thinning >= 0 ? settings.thinning : 10 * p;
  if (rep.thinning < 1) throw std::invalid_argument("run_chain: thinning must be >= 1");
  rep.seed = settings.seed;

  Rng rng(settings.seed);
  ChainState state = ChainState::start(grid_initialization(p), w, settings.initial_step);

  std::uint64_t window_start = 0;
  for (int step = 0; step < rep.burn_in; ++step) {
    metropolis_step(state, w, rng);
    if (state.proposed % kAdaptWindow == 0) {
      const double rate =
          static_cast<double>(state.accepted - window_start) / static_cast<double>(kAdaptWindow);
      state.step_scale *= std::exp(rate - settings.target_acceptance);
      window_start = state.accepted;
    }
  }
  state.accepted = 0;
  state.proposed = 0;

  rep.samples.reserve(static_cast<std::size_t>(settings.n_samples));
  while (static_cast<int>(rep.samples.size()) < settings.n_samples) {
    for (int t = 0; t < rep.thinning; ++t) metropolis_step(state, w, rng);
    rep.samples.push_back(state.config);
  }
  rep.acceptance_rate =
      static_cast<double>(state.accepted) / static_cast<double>(std::max<std::uint64_t>(state.proposed, 1));
  rep.step_scale = state.step_scale;
  return rep;
}

HermitianPair sample_ambient_pair(const ChainReport& chain, std::size_t index, Rng& rng) {
  if (index >= chain.samples.size())
    throw std::out_of_range("sample_ambient_pair: sample index out of range");
  const SkewSpectrum& s = chain.samples[index];
  return conjugate(build_block_diag(s), haar_unitary(static_cast<int>(2 * s.size()), rng));
}

double QuadratureCdf::joint(double a, double b) const {
  if (a <= 0.0 || b <= 0.0) return 0.0;
  const double h = grid[1] - grid[0];
  const auto n = static_cast<std::size_t>(resolution);
  const double ca = std::min(a, length), cb = std::min(b, length);
  const auto i = std::min(static_cast<std::size_t>(ca / h), n - 2);
  const auto j = std::min(static_cast<std::size_t>(cb / h), n - 2);
  const double s = (ca - grid[i]) / h, t = (cb - grid[j]) / h;
  const auto at = [&](std::size_t r, std::size_t c) { return cdf[r * n + c]; };
  return (1 - s) * (1 - t) * at(i, j) + s * (1 - t) * at(i + 1, j) + (1 - s) * t * at(i, j + 1) +
         s * t * at(i + 1, j + 1);
}

double QuadratureCdf::marginal_cdf_x(double a) const { return interpolate(grid, marginal_x, a); }
double QuadratureCdf::marginal_cdf_y(double b) const { return interpolate(grid, marginal_y, b); }

double QuadratureCdf::density(double x, double y, const WeightSpec& w) const {
  if (!(x > 0.0 && y > 0.0)) return 0.0;
  return normalization * p1_unnormalized(x, y, w.gamma);
}

QuadratureCdf p1_quadrature_cdf(const WeightSpec& w, int resolution) {
  if (resolution < 64) throw std::invalid_argument("p1_quadrature_cdf: resolution must be >= 64");
  QuadratureCdf q;
  q.resolution = resolution;
  q.length = 1.0;
  while (radial_tail_fraction(q.length, w.gamma) >= kTailMass) q.length *= 2.0;

  const auto n = static_cast<std::size_t>(resolution);
  const double h = q.length / static_cast<double>(resolution - 1);
  q.grid.resize(n);
  for (std::size_t i = 0; i < n; ++i) q.grid[i] = h * static_cast<double>(i);

  std::vector<double> node(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) node[i * n + j] = p1_unnormalized(q.grid[i], q.grid[j], w.gamma);

  // cdf via 2-D prefix sums of trapezoid cell masses
  q.cdf.assign(n * n, 0.0);
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = 1; j < n; ++j) {
      const double cell =
          0.25 * h * h *
          (node[(i - 1) * n + j - 1] + node[(i - 1) * n + j] + node[i * n + j - 1] + node[i * n + j]);
      q.cdf[i * n + j] = cell + q.cdf[(i - 1) * n + j] + q.cdf[i * n + j - 1] - q.cdf[(i - 1) * n + j - 1];
    }
  const double total = q.cdf.back();
  q.normalization = 1.0 / total;
  for (double& c : q.cdf) c /= total;
  q.marginal_x.resize(n);
  q.marginal_y.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    q.marginal_x[i] = q.cdf[i * n + n - 1];
    q.marginal_y[i] = q.cdf[(n - 1) * n + i];
  }
  return q;
}

KsResult ks_compare(std::span<const SkewSpectrum> samples, const QuadratureCdf& cdf) {
  if (samples.size() < 1000) throw std::invalid_argument("ks_compare: need at least 1000 samples");
  std::vector<double> xs, ys;
  xs.reserve(samples.size());
  ys.reserve(samples.size());
  for (const auto& s : samples) {
    if (s.size() != 1) throw std::invalid_argument("ks_compare: samples must have p = 1");
    xs.push_back(s[0].x);
    ys.push_back(s[0].y);
  }
  KsResult r;
  r.samples = samples.size();
  r.statistic_x = ks_statistic(std::move(xs), [&](double a) { return cdf.marginal_cdf_x(a); });
  r.statistic_y = ks_statistic(std::move(ys), [&](double b) { return cdf.marginal_cdf_y(b); });
  return r;
}

}  // namespace skewspec
