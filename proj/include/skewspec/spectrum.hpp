#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace skewspec {

/// A point z = (x, y) of the quarter plane.
struct Point {
  double x = 0.0;
  double y = 0.0;

  double norm_squared() const noexcept { return x * x + y * y; }
  friend bool operator==(const Point&, const Point&) = default;
};

/// Skew spectrum {(x_j, y_j)} of an anti-commuting Hermitian pair; all
/// coordinates strictly positive. Point order is whatever the producer chose;
/// `sorted()` gives the canonical ascending-x order.
class SkewSpectrum {
 public:
  /// Throws std::invalid_argument on an empty list or a non-positive/non-finite coordinate.
  explicit SkewSpectrum(std::vector<Point> points);

  /// From interleaved (x1, y1, x2, y2, ...).
  static SkewSpectrum from_interleaved(std::span<const double> xy);

  std::size_t size() const noexcept { return points_.size(); }
  std::size_t dim() const noexcept { return 2 * points_.size(); }
  std::span<const Point> points() const noexcept { return points_; }
  const Point& operator[](std::size_t j) const { return points_[j]; }

  std::vector<double> interleaved() const;

  /// All x_j pairwise distinct and all y_j pairwise distinct, gaps compared
  /// relative to the larger magnitude.
  bool is_generic(double relative_gap = 1e-10) const;

  SkewSpectrum sorted() const;
  SkewSpectrum scaled(double t) const;

  /// sum_j |z_j|^2
  double sum_norm_squared() const noexcept;

 private:
  std::vector<Point> points_;
};

}  // namespace skewspec
