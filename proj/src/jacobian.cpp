#include "skewspec/jacobian.hpp"

#include <cmath>
#include <numeric>

#include "skewspec/errors.hpp"

namespace skewspec {

namespace {

constexpr double kRankTol = 1e-10;
constexpr std::pair<int, int> kAlphaBeta[4] = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};

ComplexMatrix block_x(const SkewSpectrum& s) {
  const auto n = static_cast<Eigen::Index>(2 * s.size());
  ComplexMatrix a = ComplexMatrix::Zero(n, n);
  for (std::size_t k = 0; k < s.size(); ++k) {
    a(2 * k, 2 * k) = s[k].x;
    a(2 * k + 1, 2 * k + 1) = -s[k].x;
  }
  return a;
}

ComplexMatrix block_y(const SkewSpectrum& s) {
  const auto n = static_cast<Eigen::Index>(2 * s.size());
  ComplexMatrix b = ComplexMatrix::Zero(n, n);
  for (std::size_t k = 0; k < s.size(); ++k) {
    b(2 * k, 2 * k + 1) = s[k].y;
    b(2 * k + 1, 2 * k) = s[k].y;
  }
  return b;
}

// 0-based row/column of E_{2i-a, 2j-b} for 0-based block index i.
Eigen::Index pair_index(int block, int offset) { return 2 * block + 1 - offset; }

}  // namespace

AmbientCoordinates ambient_coordinates(const ComplexMatrix& dx, const ComplexMatrix& dy) {
  const Eigen::Index n = dx.rows();
  Eigen::VectorXd v(2 * n * n);
  Eigen::Index pos = 0;
  const double r2 = std::sqrt(2.0);
  for (const ComplexMatrix* m : {&dx, &dy}) {
    for (Eigen::Index a = 0; a < n; ++a) v(pos++) = (*m)(a, a).real();
    for (Eigen::Index a = 0; a < n; ++a)
      for (Eigen::Index b = a + 1; b < n; ++b) {
        v(pos++) = r2 * (*m)(a, b).real();
        v(pos++) = r2 * (*m)(a, b).imag();
      }
  }
  return {std::move(v)};
}

std::vector<TangentBasisElement> enumerate_tangent_basis(int p) {
  if (p < 1) throw std::invalid_argument("enumerate_tangent_basis: p must be >= 1");
  const Eigen::Index n = 2 * p;
  const double h = 1.0 / std::sqrt(2.0);
  const Complex ih(0.0, h);
  std::vector<TangentBasisElement> basis;
  basis.reserve(static_cast<std::size_t>(4 * p * p + p));

  for (int k = 0; k < p; ++k) {
    const Eigen::Index a = 2 * k, b = 2 * k + 1;
    ComplexMatrix r = ComplexMatrix::Zero(n, n), s = r, t = r;
    r(a, b) = h;
    r(b, a) = -h;
    s(a, b) = ih;
    s(b, a) = ih;
    t(a, a) = ih;
    t(b, b) = -ih;
    basis.push_back({TangentKind::block_r, k, -1, -1, 0, 0, std::move(r)});
    basis.push_back({TangentKind::block_s, k, -1, -1, 0, 0, std::move(s)});
    basis.push_back({TangentKind::block_t, k, -1, -1, 0, 0, std::move(t)});
  }
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j)
      for (auto [alpha, beta] : kAlphaBeta) {
        const Eigen::Index a = pair_index(i, alpha), b = pair_index(j, beta);
        ComplexMatrix r = ComplexMatrix::Zero(n, n), s = r;
        r(a, b) = h;
        r(b, a) = -h;
        s(a, b) = ih;
        s(b, a) = ih;
        basis.push_back({TangentKind::pair_r, -1, i, j, alpha, beta, std::move(r)});
        basis.push_back({TangentKind::pair_s, -1, i, j, alpha, beta, std::move(s)});
      }
  for (int k = 0; k < p; ++k) basis.push_back({TangentKind::slot_x, k, -1, -1, 0, 0, {}});
  for (int k = 0; k < p; ++k) basis.push_back({TangentKind::slot_y, k, -1, -1, 0, 0, {}});
  return basis;
}

namespace {

AmbientCoordinates apply_dG_at(const ComplexMatrix& ax, const ComplexMatrix& by,
                               const TangentBasisElement& v) {
  const Eigen::Index n = ax.rows();
  if (v.is_unitary_direction()) {
    const ComplexMatrix& s = v.matrix;
    return ambient_coordinates(s * ax - ax * s, s * by - by * s);
  }
  ComplexMatrix d = ComplexMatrix::Zero(n, n);
  const Eigen::Index a = 2 * v.k, b = 2 * v.k + 1;
  if (v.kind == TangentKind::slot_x) {
    d(a, a) = 1.0;
    d(b, b) = -1.0;
    return ambient_coordinates(d, ComplexMatrix::Zero(n, n));
  }
  d(a, b) = 1.0;
  d(b, a) = 1.0;
  return ambient_coordinates(ComplexMatrix::Zero(n, n), d);
}

}  // namespace

AmbientCoordinates apply_dG(const SkewSpectrum& s, const TangentBasisElement& v) {
  if (v.is_unitary_direction() && v.matrix.rows() != static_cast<Eigen::Index>(2 * s.size()))
    throw DimensionMismatch("apply_dG: basis element and spectrum sizes differ");
  return apply_dG_at(block_x(s), block_y(s), v);
}

Eigen::MatrixXd assemble_dG(const SkewSpectrum& s) {
  const int p = static_cast<int>(s.size());
  const auto basis = enumerate_tangent_basis(p);
  const ComplexMatrix ax = block_x(s);
  const ComplexMatrix by = block_y(s);
  const Eigen::Index n = 2 * p;
  Eigen::MatrixXd m(2 * n * n, static_cast<Eigen::Index>(basis.size()));
  for (std::size_t c = 0; c < basis.size(); ++c)
    m.col(static_cast<Eigen::Index>(c)) = apply_dG_at(ax, by, basis[c]).values;
  return m;
}

GramResult gram_determinant(const SkewSpectrum& s) {
  const Eigen::MatrixXd m = assemble_dG(s);
  GramResult out;
  out.expected_rank = static_cast<int>(m.cols());
  out.gram = m.transpose() * m;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  const double largest = sv.size() > 0 ? sv(0) : 0.0;
  out.rank = 0;
  out.log_determinant = 0.0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > kRankTol * largest) ++out.rank;
    out.log_determinant += 2.0 * std::log(sv(i));
  }
  if (out.rank < out.expected_rank)
    throw DegenerateJacobian("gram_determinant: dG is rank deficient", out.rank, out.expected_rank,
                             s.interleaved());
  out.determinant = std::exp(out.log_determinant);
  return out;
}

double log_closed_form_gram(const SkewSpectrum& s) {
  double acc = 0.0;
  for (const auto& z : s.points())
    acc += std::log(256.0) + 2.0 * std::log(z.x) + 2.0 * std::log(z.y) + std::log(z.norm_squared());
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j) acc += 2.0 * std::log(pair_factor_f(s[i], s[j]));
  return acc;
}

double closed_form_gram(const SkewSpectrum& s) {
  double acc = 1.0;
  for (const auto& z : s.points()) acc *= 256.0 * z.x * z.x * z.y * z.y * z.norm_squared();
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      const double f = pair_factor_f(s[i], s[j]);
      acc *= f * f;
    }
  return acc;
}

Eigen::MatrixXd single_block_matrix(double x, double y) {
  const double r2 = std::sqrt(2.0);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(6, 5);
  m(0, 1) = -2.0 * x;
  m(1, 0) = 2.0 * x;
  m(2, 3) = -r2;
  m(3, 2) = 2.0 * y;
  m(4, 4) = -r2;
  m(5, 0) = -2.0 * y;
  return m;
}

Eigen::MatrixXd pair_block_matrix(double xi, double xj, double yi, double yj) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(16, 8);
  // first slot: R rows fed by S columns, S rows fed by R columns
  m(0, 4) = xi - xj;
  m(1, 5) = -xi - xj;
  m(2, 6) = xi + xj;
  m(3, 7) = -xi + xj;
  m(4, 0) = xj - xi;
  m(5, 1) = xj + xi;
  m(6, 2) = -xj - xi;
  m(7, 3) = -xj + xi;
  // second slot
  m(8, 5) = -yi;
  m(8, 6) = yj;
  m(9, 4) = -yi;
  m(9, 7) = yj;
  m(10, 4) = yj;
  m(10, 7) = -yi;
  m(11, 5) = yj;
  m(11, 6) = -yi;
  m(12, 1) = yi;
  m(12, 2) = -yj;
  m(13, 0) = yi;
  m(13, 3) = -yj;
  m(14, 0) = -yj;
  m(14, 3) = yi;
  m(15, 1) = -yj;
  m(15, 2) = yi;
  return m;
}

double density_shape_ratio(const SkewSpectrum& s, const WeightSpec& w) {
  const GramResult g = gram_determinant(s);
  const double norm_z = std::sqrt(2.0 * s.sum_norm_squared());
  const LogDensityValue lr = log_rho(s, w);
  return std::exp(0.5 * g.log_determinant + w.log_weight(norm_z) - lr.log_unnormalized);
}

DensityShapeReport verify_density_shape(std::span<const SkewSpectrum> spectra, const WeightSpec& w,
                                        double tolerance) {
  DensityShapeReport rep;
  for (const auto& s : spectra) rep.ratios.push_back(density_shape_ratio(s, w));
  if (rep.ratios.empty()) return rep;
  const double n = static_cast<double>(rep.ratios.size());
  rep.mean = std::accumulate(rep.ratios.begin(), rep.ratios.end(), 0.0) / n;
  double var = 0.0;
  for (double r : rep.ratios) var += (r - rep.mean) * (r - rep.mean);
  var /= n;
  rep.coefficient_of_variation = std::sqrt(var) / std::abs(rep.mean);
  rep.pass = rep.coefficient_of_variation <= tolerance;
  return rep;
}

}  // namespace skewspec
