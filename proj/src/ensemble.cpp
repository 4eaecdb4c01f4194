#include "skewspec/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "skewspec/errors.hpp"

namespace skewspec {

namespace {

constexpr double kAntiCommuteTol = 1e-10;
constexpr double kPairingTol = 1e-8;
constexpr double kSingularTol = 1e-8;
constexpr double kCoincidenceTol = 1e-10;

bool gaps_ok(std::vector<double> v, double min_gap) {
  std::sort(v.begin(), v.end());
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] - v[i - 1] < min_gap * std::max(v[i], v[i - 1])) return false;
  return true;
}

}  // namespace

HermitianPair::HermitianPair(HermitianMatrix x, HermitianMatrix y)
    : x_(std::move(x)), y_(std::move(y)), residual_(0.0) {
  if (x_.dim() != y_.dim()) throw DimensionMismatch("HermitianPair: X and Y differ in size");
  if (x_.dim() % 2 != 0) throw DimensionMismatch("HermitianPair: n must be even");
  residual_ = frobenius_norm(x_.matrix() * y_.matrix() + y_.matrix() * x_.matrix());
  const double scale = std::max(1.0, x_.norm() * y_.norm());
  if (!(residual_ <= kAntiCommuteTol * scale)) {
    std::ostringstream os;
    os << "HermitianPair: |XY + YX|_F = " << residual_ << " exceeds tolerance";
    throw NotAntiCommuting(os.str());
  }
}

double HermitianPair::norm_squared() const {
  const double nx = x_.norm();
  const double ny = y_.norm();
  return nx * nx + ny * ny;
}

HermitianPair build_block_diag(const SkewSpectrum& s) {
  const auto n = static_cast<Eigen::Index>(2 * s.size());
  ComplexMatrix x = ComplexMatrix::Zero(n, n);
  ComplexMatrix y = ComplexMatrix::Zero(n, n);
  for (std::size_t j = 0; j < s.size(); ++j) {
    const auto a = static_cast<Eigen::Index>(2 * j);
    x(a, a) = s[j].x;
    x(a + 1, a + 1) = -s[j].x;
    y(a, a + 1) = s[j].y;
    y(a + 1, a) = s[j].y;
  }
  return HermitianPair(HermitianMatrix(std::move(x)), HermitianMatrix(std::move(y)));
}

HermitianPair conjugate(const HermitianPair& pair, const UnitaryMatrix& u) {
  if (u.dim() != pair.n()) throw DimensionMismatch("conjugate: unitary has wrong size");
  const ComplexMatrix& um = u.matrix();
  return HermitianPair(HermitianMatrix(um * pair.x().matrix() * um.adjoint()),
                       HermitianMatrix(um * pair.y().matrix() * um.adjoint()));
}

HermitianPair sample_generic_pair(const SkewSpectrum& s, Rng& rng) {
  if (!s.is_generic()) throw NonGenericInput("sample_generic_pair: x_j and y_j must be pairwise distinct");
  return conjugate(build_block_diag(s), haar_unitary(static_cast<int>(2 * s.size()), rng));
}

SkewSpectrum extract_skew_spectrum(const HermitianPair& pair) {
  const Eigen::Index n = pair.n();
  const Eigen::Index p = n / 2;
  const auto eig = hermitian_eig(pair.x());
  const auto& lam = eig.values;

  const double xnorm = pair.x().norm();
  double min_abs = std::abs(lam[0]);
  for (double l : lam) min_abs = std::min(min_abs, std::abs(l));
  if (!(min_abs > kSingularTol * xnorm)) throw NonGenericInput("extract_skew_spectrum: X is singular");

  // Ascending order pairs lam[p-1-j] with lam[p+j].
  for (Eigen::Index j = 0; j < p; ++j) {
    const double neg = lam[static_cast<std::size_t>(p - 1 - j)];
    const double pos = lam[static_cast<std::size_t>(p + j)];
    if (!(neg < 0.0 && pos > 0.0) ||
        std::abs(pos + neg) > kPairingTol * std::max(std::abs(pos), std::abs(neg)))
      throw NonGenericInput("extract_skew_spectrum: spectrum of X is not symmetric under x -> -x");
  }
  for (Eigen::Index j = p + 1; j < n; ++j) {
    const double a = lam[static_cast<std::size_t>(j - 1)];
    const double b = lam[static_cast<std::size_t>(j)];
    if (b - a <= kCoincidenceTol * b)
      throw NonGenericInput("extract_skew_spectrum: repeated eigenvalue x_j of X");
  }

  const ComplexMatrix& v = eig.vectors.matrix();
  const double ynorm = pair.y().norm();
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(p));
  for (Eigen::Index j = p; j < n; ++j) {
    // Y u lies in the (-x_j)-eigenspace of X, and |Y u| = y_j.
    const double yj = (pair.y().matrix() * v.col(j)).norm();
    if (!(yj > kSingularTol * std::max(ynorm, 1e-300)) || yj == 0.0)
      throw NonGenericInput("extract_skew_spectrum: Y vanishes on an eigenvector of X (y_j = 0)");
    pts.push_back({lam[static_cast<std::size_t>(j)], yj});
  }
  return SkewSpectrum(std::move(pts)).sorted();
}

std::vector<HermitianMatrix> build_commuting_diag(const Eigen::MatrixXd& lambdas) {
  if (lambdas.cols() < 1 || lambdas.rows() < 1)
    throw std::invalid_argument("build_commuting_diag: need n >= 1 points in R^d, d >= 1");
  std::vector<HermitianMatrix> out;
  out.reserve(static_cast<std::size_t>(lambdas.cols()));
  for (Eigen::Index r = 0; r < lambdas.cols(); ++r) {
    std::vector<double> d(lambdas.col(r).data(), lambdas.col(r).data() + lambdas.rows());
    out.push_back(HermitianMatrix::diagonal(d));
  }
  return out;
}

SkewSpectrum random_generic_spectrum(int p, double lo, double hi, double min_relative_gap, Rng& rng) {
  if (p < 1 || !(lo > 0.0) || !(hi > lo))
    throw std::invalid_argument("random_generic_spectrum: need p >= 1 and 0 < lo < hi");
  for (;;) {
    std::vector<Point> pts;
    std::vector<double> xs, ys;
    for (int k = 0; k < p; ++k) {
      const double x = rng.uniform(lo, hi);
      const double y = rng.uniform(lo, hi);
      pts.push_back({x, y});
      xs.push_back(x);
      ys.push_back(y);
    }
    if (gaps_ok(std::move(xs), min_relative_gap) && gaps_ok(std::move(ys), min_relative_gap))
      return SkewSpectrum(std::move(pts));
  }
}

}  // namespace skewspec
