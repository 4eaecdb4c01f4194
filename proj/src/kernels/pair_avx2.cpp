// AVX2 + FMA variants of the pair kernels. Compiled with -mavx2 -mfma; only
// reached through the runtime dispatch in dispatch.cpp.

#include <immintrin.h>

#include <cmath>
#include <cstdint>
#include <limits>

#include "kernels_impl.hpp"

namespace skewspec::kernels::avx2 {

namespace {

inline __m256i tail_mask(std::size_t rem) {
  return _mm256_setr_epi64x(-1, rem > 1 ? -1 : 0, rem > 2 ? -1 : 0, rem > 3 ? -1 : 0);
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// Running product kept as mantissa in [1, 2) and a separate binary exponent,
// so sum log f costs one multiply per pair and log() only once per lane.
struct LogProduct {
  __m256d mantissa = _mm256_set1_pd(1.0);
  __m256d exponent = _mm256_setzero_pd();

  void multiply(__m256d f) {
    const __m256i bits = _mm256_castpd_si256(_mm256_mul_pd(mantissa, f));
    const __m256i biased = _mm256_srli_epi64(bits, 52);
    // small non-negative int64 -> double via the 2^52 trick
    const __m256d magic = _mm256_set1_pd(4503599627370496.0);
    const __m256d e =
        _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(biased, _mm256_castpd_si256(magic))), magic);
    exponent = _mm256_add_pd(exponent, _mm256_sub_pd(e, _mm256_set1_pd(1023.0)));
    const __m256i frac = _mm256_and_si256(bits, _mm256_set1_epi64x(0x000fffffffffffffLL));
    mantissa = _mm256_castsi256_pd(_mm256_or_si256(frac, _mm256_set1_epi64x(0x3ff0000000000000LL)));
  }

  double log() const {
    alignas(32) double m[4];
    alignas(32) double e[4];
    _mm256_store_pd(m, mantissa);
    _mm256_store_pd(e, exponent);
    constexpr double ln2 = 0.693147180559945309417232121458176568;
    return (e[0] + e[1] + e[2] + e[3]) * ln2 +
           (std::log(m[0]) + std::log(m[1]) + std::log(m[2]) + std::log(m[3]));
  }
};

// Factor(dx, sx, dy, sy) -> per-pair factor; invalid lanes are replaced by 1.
template <class Factor>
double log_product_sum(std::span<const double> xs, std::span<const double> ys, Factor factor) {
  const std::size_t p = xs.size();
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d zero = _mm256_setzero_pd();
  LogProduct acc;
  for (std::size_t i = 0; i + 1 < p; ++i) {
    const __m256d xi = _mm256_set1_pd(xs[i]);
    const __m256d yi = _mm256_set1_pd(ys[i]);
    for (std::size_t j = i + 1; j < p; j += 4) {
      const std::size_t rem = p - j;
      __m256d xj, yj, valid;
      if (rem >= 4) {
        xj = _mm256_loadu_pd(&xs[j]);
        yj = _mm256_loadu_pd(&ys[j]);
        valid = _mm256_castsi256_pd(_mm256_set1_epi64x(-1));
      } else {
        const __m256i m = tail_mask(rem);
        xj = _mm256_maskload_pd(&xs[j], m);
        yj = _mm256_maskload_pd(&ys[j], m);
        valid = _mm256_castsi256_pd(m);
      }
      const __m256d f =
          factor(_mm256_sub_pd(xi, xj), _mm256_add_pd(xi, xj), _mm256_sub_pd(yi, yj), _mm256_add_pd(yi, yj));
      const __m256d vanish = _mm256_and_pd(_mm256_cmp_pd(f, zero, _CMP_EQ_OQ), valid);
      if (_mm256_movemask_pd(vanish) != 0) return -std::numeric_limits<double>::infinity();
      acc.multiply(_mm256_blendv_pd(one, f, valid));
    }
  }
  return acc.log();
}

inline __m256d four_factor(__m256d dx, __m256d sx, __m256d dy, __m256d sy) {
  const __m256d dx2 = _mm256_mul_pd(dx, dx);
  const __m256d sx2 = _mm256_mul_pd(sx, sx);
  const __m256d dy2 = _mm256_mul_pd(dy, dy);
  const __m256d sy2 = _mm256_mul_pd(sy, sy);
  const __m256d f12 = _mm256_mul_pd(_mm256_add_pd(dx2, dy2), _mm256_add_pd(sx2, dy2));
  const __m256d f34 = _mm256_mul_pd(_mm256_add_pd(dx2, sy2), _mm256_add_pd(sx2, sy2));
  return _mm256_mul_pd(f12, f34);
}

inline __m256d sq_dist(__m256d dx, __m256d, __m256d dy, __m256d) {
  return _mm256_fmadd_pd(dx, dx, _mm256_mul_pd(dy, dy));
}

// Per-row gradient: every k sums over all l != k, vectorized along l.
template <class Row>
void row_gradient(std::span<const double> xs, std::span<const double> ys, std::span<double> gx,
                  std::span<double> gy, Row row) {
  const std::size_t p = xs.size();
  const __m256d lane = _mm256_setr_pd(0.0, 1.0, 2.0, 3.0);
  for (std::size_t k = 0; k < p; ++k) {
    const __m256d xk = _mm256_set1_pd(xs[k]);
    const __m256d yk = _mm256_set1_pd(ys[k]);
    const __m256d kk = _mm256_set1_pd(static_cast<double>(k));
    __m256d accx = _mm256_setzero_pd();
    __m256d accy = _mm256_setzero_pd();
    for (std::size_t l = 0; l < p; l += 4) {
      const std::size_t rem = p - l;
      __m256d xl, yl, valid;
      if (rem >= 4) {
        xl = _mm256_loadu_pd(&xs[l]);
        yl = _mm256_loadu_pd(&ys[l]);
        valid = _mm256_castsi256_pd(_mm256_set1_epi64x(-1));
      } else {
        const __m256i m = tail_mask(rem);
        xl = _mm256_maskload_pd(&xs[l], m);
        yl = _mm256_maskload_pd(&ys[l], m);
        valid = _mm256_castsi256_pd(m);
      }
      const __m256d idx = _mm256_add_pd(_mm256_set1_pd(static_cast<double>(l)), lane);
      valid = _mm256_and_pd(valid, _mm256_cmp_pd(idx, kk, _CMP_NEQ_OQ));
      __m256d cx, cy;
      row(xk, yk, xl, yl, valid, cx, cy);
      accx = _mm256_add_pd(accx, _mm256_and_pd(cx, valid));
      accy = _mm256_add_pd(accy, _mm256_and_pd(cy, valid));
    }
    gx[k] = 2.0 * hsum(accx);
    gy[k] = 2.0 * hsum(accy);
  }
}

}  // namespace

double log_f_sum(std::span<const double> xs, std::span<const double> ys) {
  return log_product_sum(xs, ys, four_factor);
}

double log_sqdist_sum(std::span<const double> xs, std::span<const double> ys) {
  return log_product_sum(xs, ys, sq_dist);
}

void log_f_grad(std::span<const double> xs, std::span<const double> ys, std::span<double> gx,
                std::span<double> gy) {
  const __m256d one = _mm256_set1_pd(1.0);
  row_gradient(
      xs, ys, gx, gy,
      [one](__m256d xk, __m256d yk, __m256d xl, __m256d yl, __m256d valid, __m256d& cx, __m256d& cy) {
        const __m256d dx = _mm256_sub_pd(xk, xl);
        const __m256d sx = _mm256_add_pd(xk, xl);
        const __m256d dy = _mm256_sub_pd(yk, yl);
        const __m256d sy = _mm256_add_pd(yk, yl);
        const __m256d dx2 = _mm256_mul_pd(dx, dx);
        const __m256d sx2 = _mm256_mul_pd(sx, sx);
        const __m256d dy2 = _mm256_mul_pd(dy, dy);
        const __m256d sy2 = _mm256_mul_pd(sy, sy);
        const __m256d r1 = _mm256_div_pd(one, _mm256_blendv_pd(one, _mm256_add_pd(dx2, dy2), valid));
        const __m256d r2 = _mm256_div_pd(one, _mm256_blendv_pd(one, _mm256_add_pd(sx2, dy2), valid));
        const __m256d r3 = _mm256_div_pd(one, _mm256_blendv_pd(one, _mm256_add_pd(dx2, sy2), valid));
        const __m256d r4 = _mm256_div_pd(one, _mm256_blendv_pd(one, _mm256_add_pd(sx2, sy2), valid));
        cx = _mm256_fmadd_pd(dx, _mm256_add_pd(r1, r3), _mm256_mul_pd(sx, _mm256_add_pd(r2, r4)));
        cy = _mm256_fmadd_pd(dy, _mm256_add_pd(r1, r2), _mm256_mul_pd(sy, _mm256_add_pd(r3, r4)));
      });
}

void log_sqdist_grad(std::span<const double> xs, std::span<const double> ys, std::span<double> gx,
                     std::span<double> gy) {
  const __m256d one = _mm256_set1_pd(1.0);
  row_gradient(
      xs, ys, gx, gy,
      [one](__m256d xk, __m256d yk, __m256d xl, __m256d yl, __m256d valid, __m256d& cx, __m256d& cy) {
        const __m256d dx = _mm256_sub_pd(xk, xl);
        const __m256d dy = _mm256_sub_pd(yk, yl);
        const __m256d d2 = _mm256_fmadd_pd(dx, dx, _mm256_mul_pd(dy, dy));
        const __m256d r = _mm256_div_pd(one, _mm256_blendv_pd(one, d2, valid));
        cx = _mm256_mul_pd(dx, r);
        cy = _mm256_mul_pd(dy, r);
      });
}

}  // namespace skewspec::kernels::avx2
