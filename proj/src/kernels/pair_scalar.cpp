#include <cmath>
#include <limits>

#include "kernels_impl.hpp"

namespace skewspec::kernels::scalar {

double log_f_sum(std::span<const double> xs, std::span<const double> ys) {
  const std::size_t p = xs.size();
  double total = 0.0;
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = i + 1; j < p; ++j) {
      const double dx = xs[i] - xs[j];
      const double sx = xs[i] + xs[j];
      const double dy = ys[i] - ys[j];
      const double sy = ys[i] + ys[j];
      const double f = (dx * dx + dy * dy) * (sx * sx + dy * dy) * (dx * dx + sy * sy) * (sx * sx + sy * sy);
      if (f == 0.0) return -std::numeric_limits<double>::infinity();
      total += std::log(f);
    }
  }
  return total;
}

void log_f_grad(std::span<const double> xs, std::span<const double> ys, std::span<double> gx,
                std::span<double> gy) {
  const std::size_t p = xs.size();
  for (std::size_t k = 0; k < p; ++k) gx[k] = gy[k] = 0.0;
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = i + 1; j < p; ++j) {
      const double dx = xs[i] - xs[j];
      const double sx = xs[i] + xs[j];
      const double dy = ys[i] - ys[j];
      const double sy = ys[i] + ys[j];
      const double r1 = 2.0 / (dx * dx + dy * dy);
      const double r2 = 2.0 / (sx * sx + dy * dy);
      const double r3 = 2.0 / (dx * dx + sy * sy);
      const double r4 = 2.0 / (sx * sx + sy * sy);
      // d/dx_i and d/dx_j: the dx terms flip sign, the sx terms do not.
      const double ax = dx * (r1 + r3);
      const double bx = sx * (r2 + r4);
      const double ay = dy * (r1 + r2);
      const double by = sy * (r3 + r4);
      gx[i] += ax + bx;
      gx[j] += -ax + bx;
      gy[i] += ay + by;
      gy[j] += -ay + by;
    }
  }
}

double log_sqdist_sum(std::span<const double> xs, std::span<const double> ys) {
  const std::size_t n = xs.size();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = xs[i] - xs[j];
      const double dy = ys[i] - ys[j];
      const double d2 = dx * dx + dy * dy;
      if (d2 == 0.0) return -std::numeric_limits<double>::infinity();
      total += std::log(d2);
    }
  }
  return total;
}

void log_sqdist_grad(std::span<const double> xs, std::span<const double> ys, std::span<double> gx,
                     std::span<double> gy) {
  const std::size_t n = xs.size();
  for (std::size_t k = 0; k < n; ++k) gx[k] = gy[k] = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = xs[i] - xs[j];
      const double dy = ys[i] - ys[j];
      const double r = 2.0 / (dx * dx + dy * dy);
      gx[i] += dx * r;
      gx[j] -= dx * r;
      gy[i] += dy * r;
      gy[j] -= dy * r;
    }
  }
}

}  // namespace skewspec::kernels::scalar
