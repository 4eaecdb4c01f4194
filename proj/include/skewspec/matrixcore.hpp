#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "skewspec/rng.hpp"

namespace skewspec {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

/// sqrt(sum |a_ij|^2).
double frobenius_norm(const ComplexMatrix& a);

/// Hermitian n x n matrix. Construction checks A = A* to 1e-12 max(1, |A|_F)
/// and stores the exact Hermitian part.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(ComplexMatrix a);

  static HermitianMatrix zero(Eigen::Index n) { return HermitianMatrix(ComplexMatrix::Zero(n, n)); }
  static HermitianMatrix identity(Eigen::Index n) { return HermitianMatrix(ComplexMatrix::Identity(n, n)); }
  static HermitianMatrix diagonal(const std::vector<double>& d);

  const ComplexMatrix& matrix() const noexcept { return a_; }
  Eigen::Index dim() const noexcept { return a_.rows(); }
  double norm() const { return frobenius_norm(a_); }

 private:
  ComplexMatrix a_;
};

/// Unitary n x n matrix; construction checks |U*U - I|_F <= 1e-10 n.
class UnitaryMatrix {
 public:
  explicit UnitaryMatrix(ComplexMatrix u);

  static UnitaryMatrix identity(Eigen::Index n) { return UnitaryMatrix(ComplexMatrix::Identity(n, n)); }

  const ComplexMatrix& matrix() const noexcept { return u_; }
  Eigen::Index dim() const noexcept { return u_.rows(); }

 private:
  ComplexMatrix u_;
};

/// XY + YX. Throws DimensionMismatch.
HermitianMatrix anticommutator(const HermitianMatrix& x, const HermitianMatrix& y);

struct EigenDecomposition {
  std::vector<double> values;  // ascending
  UnitaryMatrix vectors;       // column k belongs to values[k]
  int sweeps = 0;
};

/// Cyclic Jacobi eigensolver. Converged when the off-diagonal Frobenius mass
/// drops below 1e-13 |A|_F; throws ConvergenceError after 100 sweeps.
EigenDecomposition hermitian_eig(const HermitianMatrix& a);

/// Haar-distributed unitary: QR of a standard complex Ginibre matrix with the
/// phases of diag(R) moved into Q.
UnitaryMatrix haar_unitary(int n, Rng& rng);

}  // namespace skewspec
