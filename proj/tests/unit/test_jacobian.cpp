#include <doctest.h>

#include <cmath>

#include "skewspec/ensemble.hpp"
#include "skewspec/errors.hpp"
#include "skewspec/jacobian.hpp"

using namespace skewspec;

namespace {

// Inverse of ambient_coordinates for one slot.
ComplexMatrix from_slot(const Eigen::VectorXd& c, Eigen::Index offset, Eigen::Index n) {
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  Eigen::Index at = offset;
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = c(at++);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const Complex v(c(at) / std::sqrt(2.0), c(at + 1) / std::sqrt(2.0));
      at += 2;
      m(i, j) = v;
      m(j, i) = std::conj(v);
    }
  return m;
}

int group_of(const TangentBasisElement& e, int p) {
  if (e.kind == TangentKind::pair_r || e.kind == TangentKind::pair_s) return p + e.i * p + e.j;
  return e.k;
}

}  // namespace

TEST_SUITE("jacobian") {
  TEST_CASE("tangent basis size and order") {
    const auto b1 = enumerate_tangent_basis(1);
    REQUIRE(b1.size() == 5);
    CHECK(b1[0].kind == TangentKind::block_r);
    CHECK(b1[1].kind == TangentKind::block_s);
    CHECK(b1[2].kind == TangentKind::block_t);
    CHECK(b1[3].kind == TangentKind::slot_x);
    CHECK(b1[4].kind == TangentKind::slot_y);
    CHECK(enumerate_tangent_basis(2).size() == 18);
    CHECK(enumerate_tangent_basis(5).size() == 105);
  }

  TEST_CASE("tangent basis is orthonormal and skew-hermitian") {
    for (int p : {1, 2, 3}) {
      const auto b = enumerate_tangent_basis(p);
      for (std::size_t a = 0; a < b.size(); ++a) {
        if (!b[a].is_unitary_direction()) continue;
        CHECK((b[a].matrix + b[a].matrix.adjoint()).norm() == 0.0);
        for (std::size_t c = 0; c < b.size(); ++c) {
          if (!b[c].is_unitary_direction()) continue;
          const double ip = (b[a].matrix.adjoint() * b[c].matrix).trace().real();
          CHECK(std::abs(ip - (a == c ? 1.0 : 0.0)) <= 1e-12);
        }
      }
    }
  }

  TEST_CASE("ambient coordinates are an isometry") {
    Rng rng(6);
    for (int t = 0; t < 10; ++t) {
      const int n = 2 + 2 * (t % 3);
      ComplexMatrix a(n, n), b(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          a(i, j) = Complex(rng.normal(), rng.normal());
          b(i, j) = Complex(rng.normal(), rng.normal());
        }
      a = (a + a.adjoint()).eval();
      b = (b + b.adjoint()).eval();
      const auto c = ambient_coordinates(a, b);
      CHECK(c.values.norm() == doctest::Approx(std::sqrt(a.squaredNorm() + b.squaredNorm())).epsilon(1e-12));
      CHECK((from_slot(c.values, 0, n) - a).norm() <= 1e-12 * a.norm());
      CHECK((from_slot(c.values, c.values.size() / 2, n) - b).norm() <= 1e-12 * b.norm());
    }
  }

  TEST_CASE("images of block directions") {
    const SkewSpectrum s({{1.3, 0.4}, {2.1, 1.7}});
    for (const auto& v : enumerate_tangent_basis(2)) {
      if (v.k != 1) continue;
      const auto img = apply_dG(s, v).values;
      switch (v.kind) {
        case TangentKind::block_s:
          CHECK(img.norm() == doctest::Approx(2 * 2.1).epsilon(1e-14));
          break;
        case TangentKind::block_t:
          CHECK(img.norm() == doctest::Approx(2 * 1.7).epsilon(1e-14));
          break;
        case TangentKind::slot_x: {
          CHECK(img.norm() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
          const ComplexMatrix dx = from_slot(img, 0, 4);
          CHECK(dx(2, 2) == Complex(1));
          CHECK(dx(3, 3) == Complex(-1));
          CHECK((dx.norm() * dx.norm()) == doctest::Approx(2.0));
          break;
        }
        default:
          break;
      }
    }
    // [S_k, A_x] lies in the X slot only, [T_k, B_y] in the Y slot only
    const auto basis = enumerate_tangent_basis(1);
    const SkewSpectrum one({{2.0, 3.0}});
    const auto is = apply_dG(one, basis[1]).values, it = apply_dG(one, basis[2]).values;
    CHECK(is.tail(4).norm() == 0.0);
    CHECK(it.head(4).norm() == 0.0);
  }

  TEST_CASE("gram determinant values") {
    const auto g = gram_determinant(SkewSpectrum({{1, 1}}));
    CHECK(g.determinant == doctest::Approx(512.0).epsilon(1e-12));
    CHECK(g.rank == 5);
    CHECK(closed_form_gram(SkewSpectrum({{1, 1}})) == 512.0);
    CHECK(gram_determinant(SkewSpectrum({{2, 1}})).determinant == doctest::Approx(5120.0).epsilon(1e-10));
    CHECK(closed_form_gram(SkewSpectrum({{2, 1}})) == doctest::Approx(5120.0).epsilon(1e-15));
    const SkewSpectrum two({{1, 1}, {2, 2}});
    CHECK(closed_form_gram(two) == doctest::Approx(217432719360000.0).epsilon(1e-14));
    CHECK(gram_determinant(two).determinant == doctest::Approx(217432719360000.0).epsilon(1e-8));
  }

  TEST_CASE("factorization identity of the closed form") {
    Rng rng(14);
    for (int t = 0; t < 20; ++t) {
      const auto s = random_generic_spectrum(1 + t % 4, 0.3, 3.0, 1e-3, rng);
      double prod = 1.0;
      for (const auto& z : s.points()) prod *= 16 * z.x * z.y * std::sqrt(z.norm_squared());
      for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j) prod *= pair_factor_f(s[i], s[j]);
      CHECK(std::sqrt(closed_form_gram(s)) / prod == doctest::Approx(1.0).epsilon(1e-13));
      CHECK(log_closed_form_gram(s) == doctest::Approx(std::log(closed_form_gram(s))).epsilon(1e-13));
    }
  }

  TEST_CASE("equal x with distinct y keeps full rank") {
    const SkewSpectrum s({{1.5, 0.5}, {1.5, 2.0}});
    const auto g = gram_determinant(s);
    CHECK(g.rank == g.expected_rank);
    CHECK(g.determinant == doctest::Approx(closed_form_gram(s)).epsilon(1e-8));
  }

  TEST_CASE("coincident points are degenerate") {
    const SkewSpectrum s({{1.5, 0.5}, {1.5, 0.5}});
    try {
      (void)gram_determinant(s);
      FAIL("expected DegenerateJacobian");
    } catch (const DegenerateJacobian& e) {
      CHECK(e.rank() < e.expected_rank());
      CHECK(e.expected_rank() == 18);
      CHECK(e.spectrum() == std::vector<double>{1.5, 0.5, 1.5, 0.5});
    }
  }

  TEST_CASE("full column rank and block structure") {
    Rng rng(15);
    for (int p : {1, 2, 3, 4}) {
      const auto s = random_generic_spectrum(p, 0.1, 5.0, 1e-3, rng);
      const auto g = gram_determinant(s);
      CHECK(g.rank == 4 * p * p + p);
      const auto basis = enumerate_tangent_basis(p);
      double off = 0.0;
      for (std::size_t a = 0; a < basis.size(); ++a)
        for (std::size_t c = 0; c < basis.size(); ++c)
          if (group_of(basis[a], p) != group_of(basis[c], p))
            off = std::max(off, std::abs(g.gram(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(c))));
      CHECK(off <= 1e-12);
    }
  }

  TEST_CASE("closed form matches the numeric gram determinant") {
    Rng rng(16);
    for (int p : {1, 2, 3, 4})
      for (int t = 0; t < 25; ++t) {
        const auto s = random_generic_spectrum(p, 0.1, 5.0, 1e-3, rng);
        const double ratio = std::exp(gram_determinant(s).log_determinant - log_closed_form_gram(s));
        CHECK(std::abs(ratio - 1.0) <= 1e-8);
      }
  }

  TEST_CASE("block matrices") {
    Rng rng(17);
    for (int t = 0; t < 100; ++t) {
      const double xi = rng.uniform(0.2, 3), xj = rng.uniform(0.2, 3), yi = rng.uniform(0.2, 3),
                   yj = rng.uniform(0.2, 3);
      const Eigen::MatrixXd m = pair_block_matrix(xi, xj, yi, yj);
      REQUIRE(m.rows() == 16);
      REQUIRE(m.cols() == 8);
      const double f = pair_factor_f({xi, yi}, {xj, yj});
      CHECK((m.transpose() * m).determinant() == doctest::Approx(f * f).epsilon(1e-9));
      const Eigen::MatrixXd b = single_block_matrix(xi, yi);
      CHECK((b.transpose() * b).determinant() ==
            doctest::Approx(closed_form_gram(SkewSpectrum({{xi, yi}}))).epsilon(1e-10));
    }
  }

  TEST_CASE("gram determinant is invariant under conjugation") {
    Rng rng(18);
    const auto s = random_generic_spectrum(2, 0.5, 3.0, 1e-2, rng);
    const Eigen::MatrixXd dg = assemble_dG(s);
    const double base = (dg.transpose() * dg).determinant();
    for (int t = 0; t < 3; ++t) {
      const auto u = haar_unitary(4, rng).matrix();
      Eigen::MatrixXd rotated(dg.rows(), dg.cols());
      for (Eigen::Index c = 0; c < dg.cols(); ++c) {
        const Eigen::VectorXd col = dg.col(c);
        const ComplexMatrix dx = u * from_slot(col, 0, 4) * u.adjoint();
        const ComplexMatrix dy = u * from_slot(col, col.size() / 2, 4) * u.adjoint();
        rotated.col(c) = ambient_coordinates(dx, dy).values;
      }
      CHECK((rotated.transpose() * rotated).determinant() == doctest::Approx(base).epsilon(1e-8));
    }
  }

  TEST_CASE("density shape ratio") {
    const auto w = WeightSpec::gaussian(1.0);
    CHECK(density_shape_ratio(SkewSpectrum({{1, 1}}), w) == doctest::Approx(16.0).epsilon(1e-12));
    CHECK(density_shape_ratio(SkewSpectrum({{0.7, 2.3}}), WeightSpec::gaussian(0.3)) ==
          doctest::Approx(16.0).epsilon(1e-12));
    Rng rng(19);
    std::vector<SkewSpectrum> spectra;
    for (int t = 0; t < 50; ++t) spectra.push_back(random_generic_spectrum(2, 0.1, 5.0, 1e-3, rng));
    const auto rep = verify_density_shape(spectra, w);
    CHECK(rep.pass);
    CHECK(rep.coefficient_of_variation <= 1e-8);
    CHECK(rep.mean == doctest::Approx(256.0).epsilon(1e-8));
    const auto s = spectra.front();
    CHECK(density_shape_ratio(s.scaled(1.7), w) == doctest::Approx(density_shape_ratio(s, w)).epsilon(1e-8));
  }
}
