#pragma once

// Numerical check of the change of variables behind the skew-spectrum density:
// tangent basis of U(n)/T^p x R^{2p}, the derivative dG at the block-diagonal
// base point, and Gram determinants against their closed form.

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "skewspec/density.hpp"
#include "skewspec/matrixcore.hpp"
#include "skewspec/spectrum.hpp"

namespace skewspec {

enum class TangentKind {
  block_r,  // R_k
  block_s,  // S_k
  block_t,  // T_k
  pair_r,   // R_{ij,ab}
  pair_s,   // S_{ij,ab}
  slot_x,   // e^1_k
  slot_y,   // e^2_k
};

struct TangentBasisElement {
  TangentKind kind;
  int k = -1;          // block index (0-based) for block_* and slot_*
  int i = -1, j = -1;  // 0-based, i < j, for pair_*
  int alpha = 0, beta = 0;
  ComplexMatrix matrix;  // skew-Hermitian, unit norm; empty for slot_*

  bool is_unitary_direction() const noexcept {
    return kind != TangentKind::slot_x && kind != TangentKind::slot_y;
  }
};

/// Orthonormal real coordinates of a pair of Hermitian matrices: for each
/// slot the n diagonal entries, then sqrt2 (Re, Im) of each strictly upper entry.
struct AmbientCoordinates {
  Eigen::VectorXd values;
};

AmbientCoordinates ambient_coordinates(const ComplexMatrix& dx, const ComplexMatrix& dy);

/// Ordered basis: R_k, S_k, T_k for each k; then for each i < j and
/// (a, b) in {00, 10, 01, 11}: R_{ij,ab}, S_{ij,ab}; then e^1_k; then e^2_k.
/// 4p^2 + p elements.
std::vector<TangentBasisElement> enumerate_tangent_basis(int p);

/// Image of one basis direction under dG at (I, s).
AmbientCoordinates apply_dG(const SkewSpectrum& s, const TangentBasisElement& v);

/// All images as columns: 2 (2p)^2 rows, 4p^2 + p columns.
Eigen::MatrixXd assemble_dG(const SkewSpectrum& s);

struct GramResult {
  double determinant = 0.0;      // det(dG^T dG); may overflow to inf for large p
  double log_determinant = 0.0;  // always finite when rank is full
  int rank = 0;
  int expected_rank = 0;
  Eigen::MatrixXd gram;  // dG^T dG
};

/// det(dG^T dG) from the singular values of dG. Throws DegenerateJacobian when
/// some singular value is below 1e-10 times the largest.
GramResult gram_determinant(const SkewSpectrum& s);

/// prod_k 256 x_k^2 y_k^2 (x_k^2 + y_k^2) * prod_{i<j} f(z_i, z_j)^2.
double closed_form_gram(const SkewSpectrum& s);
double log_closed_form_gram(const SkewSpectrum& s);

/// The 6x5 per-block matrix (rows R_k, S_k, T_k in both slots; columns R_k,
/// S_k, T_k, e^1_k, e^2_k), global factor i dropped.
Eigen::MatrixXd single_block_matrix(double x, double y);

/// The 16x8 per-pair matrix written out from the commutator table (rows: R, S
/// of both slots in ab order 00, 10, 01, 11; columns R_ab then S_ab).
Eigen::MatrixXd pair_block_matrix(double xi, double xj, double yi, double yj);

/// sqrt(gram) w(|Z|_F) / exp(log_rho): the constant absorbed into C_n (16^p).
double density_shape_ratio(const SkewSpectrum& s, const WeightSpec& w);

struct DensityShapeReport {
  std::vector<double> ratios;
  double mean = 0.0;
  double coefficient_of_variation = 0.0;
  bool pass = false;
};

/// Ratios for every spectrum; pass iff their coefficient of variation <= tolerance.
DensityShapeReport verify_density_shape(std::span<const SkewSpectrum> spectra, const WeightSpec& w,
                                        double tolerance = 1e-8);

}  // namespace skewspec
