#include "skewspec/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace skewspec {

namespace {

bool distinct(std::vector<double> v, double relative_gap) {
  std::sort(v.begin(), v.end());
  for (std::size_t i = 1; i < v.size(); ++i) {
    const double scale = std::max(std::abs(v[i]), std::abs(v[i - 1]));
    if (v[i] - v[i - 1] <= relative_gap * scale) return false;
  }
  return true;
}

}  // namespace

SkewSpectrum::SkewSpectrum(std::vector<Point> points) : points_(std::move(points)) {
  if (points_.empty()) throw std::invalid_argument("SkewSpectrum: need at least one point");
  for (const auto& z : points_) {
    if (!(std::isfinite(z.x) && std::isfinite(z.y) && z.x > 0.0 && z.y > 0.0))
      throw std::invalid_argument("SkewSpectrum: coordinates must be finite and positive");
  }
}

SkewSpectrum SkewSpectrum::from_interleaved(std::span<const double> xy) {
  if (xy.size() % 2 != 0) throw std::invalid_argument("SkewSpectrum: interleaved data needs an even length");
  std::vector<Point> pts;
  pts.reserve(xy.size() / 2);
  for (std::size_t k = 0; k + 1 < xy.size(); k += 2) pts.push_back({xy[k], xy[k + 1]});
  return SkewSpectrum(std::move(pts));
}

std::vector<double> SkewSpectrum::interleaved() const {
  std::vector<double> out;
  out.reserve(dim());
  for (const auto& z : points_) {
    out.push_back(z.x);
    out.push_back(z.y);
  }
  return out;
}

bool SkewSpectrum::is_generic(double relative_gap) const {
  std::vector<double> xs, ys;
  xs.reserve(size());
  ys.reserve(size());
  for (const auto& z : points_) {
    xs.push_back(z.x);
    ys.push_back(z.y);
  }
  return distinct(std::move(xs), relative_gap) && distinct(std::move(ys), relative_gap);
}

SkewSpectrum SkewSpectrum::sorted() const {
  auto pts = points_;
  std::stable_sort(pts.begin(), pts.end(),
                   [](const Point& a, const Point& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  return SkewSpectrum(std::move(pts));
}

SkewSpectrum SkewSpectrum::scaled(double t) const {
  auto pts = points_;
  for (auto& z : pts) {
    z.x *= t;
    z.y *= t;
  }
  return SkewSpectrum(std::move(pts));
}

double SkewSpectrum::sum_norm_squared() const noexcept {
  double s = 0.0;
  for (const auto& z : points_) s += z.norm_squared();
  return s;
}

}  // namespace skewspec
