#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "skewspec/density.hpp"
#include "skewspec/ensemble.hpp"
#include "skewspec/rng.hpp"
#include "skewspec/spectrum.hpp"

namespace skewspec {

/// Random-walk Metropolis state targeting rho_n.
struct ChainState {
  SkewSpectrum config;
  double log_density = 0.0;  // log_rho(config), cached
  double step_scale = 0.1;
  std::uint64_t accepted = 0;
  std::uint64_t proposed = 0;

  static ChainState start(SkewSpectrum config, const WeightSpec& w, double step_scale);
};

/// min(1, exp(log_rho(proposal) - state.log_density)); 0 outside the open quadrant.
double acceptance_probability(const ChainState& state, std::span<const Point> proposal, const WeightSpec& w);

/// One step: isotropic Gaussian proposal of scale step_scale on all 2p coordinates.
void metropolis_step(ChainState& state, const WeightSpec& w, Rng& rng);

struct ChainSettings {
  int n_samples = 1000;
  int burn_in = -1;   // default 10 p 10^3
  int thinning = -1;  // default 10 p
  std::uint64_t seed = 0;
  double target_acceptance = 0.3;
  double initial_step = 0.5;
};

struct ChainReport {
  std::vector<SkewSpectrum> samples;
  double acceptance_rate = 0.0;  // over the post-burn-in steps
  double step_scale = 0.0;       // frozen value after adaptation
  int burn_in = 0;
  int thinning = 0;
  std::uint64_t seed = 0;
};

/// Starts at the grid configuration, adapts the step scale during burn-in
/// toward the target acceptance, then freezes it and records every
/// `thinning`-th state.
ChainReport run_chain(int p, const WeightSpec& w, const ChainSettings& settings);

/// Haar conjugate of build_block_diag(chain.samples[index]); std::out_of_range on a bad index.
HermitianPair sample_ambient_pair(const ChainReport& chain, std::size_t index, Rng& rng);

/// Tabulated distribution of the p = 1 skew spectrum on [0, L]^2 (trapezoid rule).
struct QuadratureCdf {
  double length = 0.0;             // L
  int resolution = 0;              // nodes per axis
  double normalization = 0.0;      // C_1: rho_1 = C_1 w x y |z|
  std::vector<double> grid;        // node coordinates, size resolution
  std::vector<double> cdf;         // row-major, cdf[i * resolution + j] = P(x <= grid[i], y <= grid[j])
  std::vector<double> marginal_x;  // P(x <= grid[i])
  std::vector<double> marginal_y;

  double joint(double a, double b) const;  // bilinear interpolation
  double marginal_cdf_x(double a) const;
  double marginal_cdf_y(double b) const;
  double density(double x, double y, const WeightSpec& w) const;  // normalized rho_1
};

/// L is doubled until the mass beyond [0, L]^2 is below 1e-10.
/// Throws std::invalid_argument for resolution < 64.
QuadratureCdf p1_quadrature_cdf(const WeightSpec& w, int resolution);

/// One-sample Kolmogorov-Smirnov statistic sup |F_n - F|.
template <class Cdf>
double ks_statistic(std::vector<double> samples, const Cdf& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

struct KsResult {
  double statistic_x = 0.0;
  double statistic_y = 0.0;
  std::size_t samples = 0;
};

/// KS statistics of the x and y marginals of p = 1 samples against the
/// quadrature marginals. Throws std::invalid_argument below 1000 samples or for p != 1.
KsResult ks_compare(std::span<const SkewSpectrum> samples, const QuadratureCdf& cdf);

}  // namespace skewspec
