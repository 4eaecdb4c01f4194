#include "skewspec/matrixcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "skewspec/errors.hpp"

namespace skewspec {

namespace {

constexpr double kHermitianTol = 1e-12;
constexpr double kUnitaryTol = 1e-10;
constexpr double kJacobiTol = 1e-13;
constexpr int kJacobiMaxSweeps = 100;

double off_diagonal_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

}  // namespace

double frobenius_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i) s += std::norm(a(i, j));
  return std::sqrt(s);
}

HermitianMatrix::HermitianMatrix(ComplexMatrix a) {
  if (a.rows() != a.cols() || a.rows() < 1)
    throw DimensionMismatch("HermitianMatrix: expected a non-empty square matrix");
  const double asym = frobenius_norm(a - a.adjoint());
  const double scale = std::max(1.0, frobenius_norm(a));
  if (!(asym <= kHermitianTol * scale)) {
    std::ostringstream os;
    os << "HermitianMatrix: |A - A*|_F = " << asym << " exceeds tolerance";
    throw Error(os.str());
  }
  a_ = 0.5 * (a + a.adjoint());
}

HermitianMatrix HermitianMatrix::diagonal(const std::vector<double>& d) {
  ComplexMatrix a =
      ComplexMatrix::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) a(i, i) = d[i];
  return HermitianMatrix(std::move(a));
}

UnitaryMatrix::UnitaryMatrix(ComplexMatrix u) : u_(std::move(u)) {
  if (u_.rows() != u_.cols() || u_.rows() < 1)
    throw DimensionMismatch("UnitaryMatrix: expected a non-empty square matrix");
  const auto n = u_.rows();
  const double dev = frobenius_norm(u_.adjoint() * u_ - ComplexMatrix::Identity(n, n));
  if (!(dev <= kUnitaryTol * static_cast<double>(n))) {
    std::ostringstream os;
    os << "UnitaryMatrix: |U*U - I|_F = " << dev << " exceeds tolerance";
    throw Error(os.str());
  }
}

HermitianMatrix anticommutator(const HermitianMatrix& x, const HermitianMatrix& y) {
  if (x.dim() != y.dim()) throw DimensionMismatch("anticommutator: dimension mismatch");
  ComplexMatrix xy = x.matrix() * y.matrix();
  return HermitianMatrix(xy + xy.adjoint());
}

EigenDecomposition hermitian_eig(const HermitianMatrix& h) {
  ComplexMatrix a = h.matrix();
  const Eigen::Index n = a.rows();
  ComplexMatrix v = ComplexMatrix::Identity(n, n);
  const double total = frobenius_norm(a);
  const double target = kJacobiTol * total;

  int sweep = 0;
  double off = off_diagonal_norm(a);
  while (off > target) {
    if (sweep == kJacobiMaxSweeps) {
      std::ostringstream os;
      os << "hermitian_eig: no convergence after " << kJacobiMaxSweeps << " sweeps, off-diagonal mass "
         << off;
      throw ConvergenceError(os.str(), off);
    }
    ++sweep;
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq_abs = std::abs(a(p, q));
        if (apq_abs == 0.0) continue;
        // Skip elements that are negligible against both diagonal entries.
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        if (sweep > 4 && std::abs(app) + 100.0 * apq_abs == std::abs(app) &&
            std::abs(aqq) + 100.0 * apq_abs == std::abs(aqq)) {
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          continue;
        }
        // G = diag(1, e^{-i phi}) * [[c, s], [-s, c]] zeroes a(p, q).
        const Complex phase = a(p, q) / apq_abs;  // e^{i phi}
        const double theta = (aqq - app) / (2.0 * apq_abs);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const Complex gqp = -s * std::conj(phase);
        const Complex gqq = c * std::conj(phase);

        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = c * akp + gqp * akq;
          a(k, q) = s * akp + gqq * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = c * apk + std::conj(gqp) * aqk;
          a(q, k) = s * apk + std::conj(gqq) * aqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex vkp = v(k, p);
          const Complex vkq = v(k, q);
          v(k, p) = c * vkp + gqp * vkq;
          v(k, q) = s * vkp + gqq * vkq;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
    off = off_diagonal_norm(a);
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return a(i, i).real() < a(j, j).real(); });
  std::vector<double> values;
  values.reserve(order.size());
  ComplexMatrix sorted(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    values.push_back(a(order[k], order[k]).real());
    sorted.col(k) = v.col(order[k]);
  }
  return EigenDecomposition{std::move(values), UnitaryMatrix(std::move(sorted)), sweep};
}

UnitaryMatrix haar_unitary(int n, Rng& rng) {
  if (n < 1) throw DimensionMismatch("haar_unitary: n must be positive");
  const double scale = 1.0 / std::sqrt(2.0);
  ComplexMatrix g(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double re = rng.normal();
      const double im = rng.normal();
      g(i, j) = Complex(re, im) * scale;
    }
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
  const ComplexMatrix& r = qr.matrixQR();
  for (int k = 0; k < n; ++k) {
    const double mag = std::abs(r(k, k));
    const Complex phase = mag > 0.0 ? r(k, k) / mag : Complex(1.0, 0.0);
    q.col(k) *= phase;
  }
  return UnitaryMatrix(std::move(q));
}

}  // namespace skewspec
