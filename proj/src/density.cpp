#include "skewspec/density.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "skewspec/kernels.hpp"

namespace skewspec {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Soa {
  std::vector<double> xs, ys;
  explicit Soa(std::span<const Point> pts) {
    xs.reserve(pts.size());
    ys.reserve(pts.size());
    for (const auto& z : pts) {
      xs.push_back(z.x);
      ys.push_back(z.y);
    }
  }
};

bool in_open_quadrant(std::span<const double> xs, std::span<const double> ys) {
  for (std::size_t k = 0; k < xs.size(); ++k)
    if (!(xs[k] > 0.0 && ys[k] > 0.0)) return false;
  return true;
}

// sum_k log(x_k y_k |z_k|) and sum_k |z_k|^2
void single_sums(std::span<const double> xs, std::span<const double> ys, double& log_sum, double& sq_sum) {
  log_sum = 0.0;
  sq_sum = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double r2 = xs[k] * xs[k] + ys[k] * ys[k];
    log_sum += std::log(xs[k]) + std::log(ys[k]) + 0.5 * std::log(r2);
    sq_sum += r2;
  }
}

}  // namespace

WeightSpec WeightSpec::gaussian(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw std::invalid_argument("WeightSpec: gamma must be positive");
  return WeightSpec{WeightKind::gaussian, gamma};
}

double pair_factor_f(Point zi, Point zj) noexcept {
  const double dx = zi.x - zj.x;
  const double sx = zi.x + zj.x;
  const double dy = zi.y - zj.y;
  const double sy = zi.y + zj.y;
  return (dx * dx + dy * dy) * (sx * sx + dy * dy) * (dx * dx + sy * sy) * (sx * sx + sy * sy);
}

RepulsionBounds repulsion_bounds(Point zi, Point zj, double eps, double m) {
  if (!(eps > 0.0) || !(m >= eps)) throw std::invalid_argument("repulsion_bounds: need 0 < eps <= M");
  for (double c : {zi.x, zi.y, zj.x, zj.y})
    if (c < eps || c > m) throw std::invalid_argument("repulsion_bounds: coordinate outside [eps, M]");
  const double dx = zi.x - zj.x;
  const double dy = zi.y - zj.y;
  const double d2 = dx * dx + dy * dy;
  const double e6 = eps * eps * eps * eps * eps * eps;
  const double m6 = m * m * m * m * m * m;
  return {128.0 * e6 * d2, 200.0 * m6 * d2};
}

LogDensityValue log_rho(std::span<const Point> points, const WeightSpec& w) {
  const Soa s(points);
  if (!in_open_quadrant(s.xs, s.ys)) return {-kInf, false};
  const double pairs = kernels::active().log_f_sum(s.xs, s.ys);
  if (pairs == -kInf) return {-kInf, false};
  double log_sum, sq_sum;
  single_sums(s.xs, s.ys, log_sum, sq_sum);
  const double norm_z = std::sqrt(2.0 * sq_sum);
  return {w.log_weight(norm_z) + log_sum + pairs, true};
}

double tau_soa(std::span<const double> xs, std::span<const double> ys) {
  if (!in_open_quadrant(xs, ys)) return kInf;
  const double pairs = kernels::active().log_f_sum(xs, ys);
  if (pairs == -kInf) return kInf;
  double log_sum, sq_sum;
  single_sums(xs, ys, log_sum, sq_sum);
  return 0.5 * sq_sum - log_sum - pairs;
}

double tau(std::span<const Point> points) {
  const Soa s(points);
  return tau_soa(s.xs, s.ys);
}

double tau_with_gradient(std::span<const double> xs, std::span<const double> ys, std::span<double> gx,
                         std::span<double> gy) {
  const double value = tau_soa(xs, ys);
  if (!std::isfinite(value)) return value;
  kernels::active().log_f_grad(xs, ys, gx, gy);
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double x = xs[k];
    const double y = ys[k];
    const double r2 = x * x + y * y;
    gx[k] = x - 1.0 / x - x / r2 - gx[k];
    gy[k] = y - 1.0 / y - y / r2 - gy[k];
  }
  return value;
}

std::vector<double> grad_tau(std::span<const Point> points) {
  const Soa s(points);
  std::vector<double> gx(points.size()), gy(points.size());
  const double value = tau_with_gradient(s.xs, s.ys, gx, gy);
  if (!std::isfinite(value)) throw std::domain_error("grad_tau: tau is infinite here");
  std::vector<double> out;
  out.reserve(2 * points.size());
  for (std::size_t k = 0; k < points.size(); ++k) {
    out.push_back(gx[k]);
    out.push_back(gy[k]);
  }
  return out;
}

LogDensityValue log_kappa_commuting(const Eigen::MatrixXd& lambdas, double gamma) {
  const Eigen::Index n = lambdas.rows();
  double confinement = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) confinement += lambdas.row(i).squaredNorm();
  double pairs = 0.0;
  if (lambdas.cols() == 2) {
    std::vector<double> xs(lambdas.col(0).data(), lambdas.col(0).data() + n);
    std::vector<double> ys(lambdas.col(1).data(), lambdas.col(1).data() + n);
    pairs = kernels::active().log_sqdist_sum(xs, ys);
  } else {
    for (Eigen::Index i = 0; i < n && pairs != -kInf; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j) {
        const double d2 = (lambdas.row(i) - lambdas.row(j)).squaredNorm();
        if (d2 == 0.0) {
          pairs = -kInf;
          break;
        }
        pairs += std::log(d2);
      }
  }
  if (pairs == -kInf) return {-kInf, false};
  return {-gamma * confinement + pairs, true};
}

double equilibrium_radius(int d, double gamma) {
  if (d < 1) throw std::invalid_argument("equilibrium_radius: d must be >= 1");
  if (!(gamma > 0.0)) throw std::invalid_argument("equilibrium_radius: gamma must be positive");
  switch (d) {
    case 1:
      return std::sqrt(2.0 / gamma);
    case 2:
      return 1.0 / std::sqrt(gamma);
    case 3:
      return std::sqrt(2.0 / (3.0 * gamma));
    default:
      return 1.0 / std::sqrt(2.0 * gamma);
  }
}

double equilibrium_density(int d, double gamma, std::span<const double> x) {
  if (static_cast<int>(x.size()) != d)
    throw std::invalid_argument("equilibrium_density: point has the wrong dimension");
  const double r = equilibrium_radius(d, gamma);
  double r2 = 0.0;
  for (double c : x) r2 += c * c;
  const double pi = std::numbers::pi;
  switch (d) {
    case 1:
      return r2 < r * r ? 2.0 / (pi * r * r) * std::sqrt(r * r - r2) : 0.0;
    case 2:
      return r2 < r * r ? 1.0 / (pi * r * r) : 0.0;
    case 3:
      return r2 < r * r ? 1.0 / (pi * pi * r * r) / std::sqrt(r * r - r2) : 0.0;
    default: {
      if (std::abs(std::sqrt(r2) - r) > 1e-9 * r) return 0.0;
      const double half = 0.5 * d;
      const double area = 2.0 * std::pow(pi, half) * std::pow(r, d - 1) / std::tgamma(half);
      return 1.0 / area;
    }
  }
}

}  // namespace skewspec
