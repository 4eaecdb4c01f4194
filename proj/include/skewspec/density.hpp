#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "skewspec/spectrum.hpp"

namespace skewspec {

enum class WeightKind { gaussian };

/// Radial weight w(t) = exp(-gamma t^2 / 2), t = |Z|_F.
struct WeightSpec {
  WeightKind kind = WeightKind::gaussian;
  double gamma = 1.0;

  /// Throws std::invalid_argument unless gamma > 0.
  static WeightSpec gaussian(double gamma);

  double log_weight(double norm) const noexcept { return -0.5 * gamma * norm * norm; }
};

/// log of a density with its normalization constant dropped.
struct LogDensityValue {
  double log_unnormalized = 0.0;
  bool finite = true;
};

/// [(xi-xj)^2+(yi-yj)^2] [(xi+xj)^2+(yi-yj)^2] [(xi-xj)^2+(yi+yj)^2] [(xi+xj)^2+(yi+yj)^2]
double pair_factor_f(Point zi, Point zj) noexcept;

struct RepulsionBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// (128 eps^6 d^2, 200 M^6 d^2), d^2 = |zi - zj|^2; requires all four
/// coordinates in [eps, M] (std::invalid_argument otherwise).
RepulsionBounds repulsion_bounds(Point zi, Point zj, double eps, double m);

/// log[ w(|Z|_F) prod_k x_k y_k |z_k| prod_{i<j} f(z_i, z_j) ], |Z|_F^2 = 2 sum |z_k|^2.
/// Points outside the open quadrant, or coincident points, give finite = false.
LogDensityValue log_rho(std::span<const Point> points, const WeightSpec& w);
inline LogDensityValue log_rho(const SkewSpectrum& s, const WeightSpec& w) { return log_rho(s.points(), w); }

/// tau = 1/2 sum |z_k|^2 - sum log(x_k y_k |z_k|) - sum_{k<l} log f(z_k, z_l);
/// +inf on the boundary. Equal to -log_rho at gamma = 1/2.
double tau(std::span<const Point> points);
inline double tau(const SkewSpectrum& s) { return tau(s.points()); }

/// Gradient of tau, interleaved (d/dx_1, d/dy_1, ...). Throws std::domain_error
/// where tau is infinite.
std::vector<double> grad_tau(std::span<const Point> points);
inline std::vector<double> grad_tau(const SkewSpectrum& s) { return grad_tau(s.points()); }

/// tau and its gradient from structure-of-arrays coordinates; the optimizer's
/// hot path. `gx`, `gy` are only written when the value is finite.
double tau_with_gradient(std::span<const double> xs, std::span<const double> ys, std::span<double> gx,
                         std::span<double> gy);
double tau_soa(std::span<const double> xs, std::span<const double> ys);

/// log[ exp(-gamma sum |l_j|^2) prod_{i<j} |l_i - l_j|^2 ]; rows of `lambdas`
/// (n x d) are points of R^d.
LogDensityValue log_kappa_commuting(const Eigen::MatrixXd& lambdas, double gamma);

/// Radius of the support of the Gaussian-confinement equilibrium measure in R^d.
double equilibrium_radius(int d, double gamma);

/// Equilibrium density at x (|x| = d). d = 1, 2, 3: Lebesgue density;
/// d >= 4: surface density of the uniform measure on the sphere (0 off-sphere).
double equilibrium_density(int d, double gamma, std::span<const double> x);

}  // namespace skewspec
