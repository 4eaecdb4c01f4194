#pragma once

#include <Eigen/Dense>
#include <vector>

#include "skewspec/matrixcore.hpp"
#include "skewspec/rng.hpp"
#include "skewspec/spectrum.hpp"

namespace skewspec {

/// (X, Y) with XY + YX = 0 to 1e-10 max(1, |X|_F |Y|_F).
class HermitianPair {
 public:
  /// Throws DimensionMismatch for unequal or odd dimensions and NotAntiCommuting
  /// when the residual exceeds the tolerance.
  HermitianPair(HermitianMatrix x, HermitianMatrix y);

  const HermitianMatrix& x() const noexcept { return x_; }
  const HermitianMatrix& y() const noexcept { return y_; }
  Eigen::Index n() const noexcept { return x_.dim(); }
  double anticommutation_residual() const noexcept { return residual_; }

  /// |X|_F^2 + |Y|_F^2
  double norm_squared() const;

 private:
  HermitianMatrix x_;
  HermitianMatrix y_;
  double residual_;
};

/// X = diag(x_1, -x_1, x_2, -x_2, ...), Y = blockdiag([[0, y_j], [y_j, 0]]).
HermitianPair build_block_diag(const SkewSpectrum& s);

/// (U X U*, U Y U*).
HermitianPair conjugate(const HermitianPair& pair, const UnitaryMatrix& u);

/// Haar conjugate of build_block_diag(s); throws NonGenericInput unless s is generic.
HermitianPair sample_generic_pair(const SkewSpectrum& s, Rng& rng);

/// Recovers the skew spectrum, sorted ascending in x. Throws NonGenericInput
/// when X is singular, its spectrum is not +/- symmetric, two x_j coincide,
/// or some y_j vanishes.
SkewSpectrum extract_skew_spectrum(const HermitianPair& pair);

/// Diagonal d-tuple realizing joint eigenvalues: row r of `lambdas` (n x d)
/// is the r-th joint eigenvalue.
std::vector<HermitianMatrix> build_commuting_diag(const Eigen::MatrixXd& lambdas);

/// Uniform draw of a generic spectrum with coordinates in [lo, hi] and
/// pairwise relative gaps at least `min_relative_gap` within x and within y.
SkewSpectrum random_generic_spectrum(int p, double lo, double hi, double min_relative_gap, Rng& rng);

}  // namespace skewspec
