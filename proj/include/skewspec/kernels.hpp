#pragma once

// Pair-interaction kernels: the O(p^2) inner loops of the density, the
// optimizer and the sampler. Every kernel has a scalar reference version; a
// SIMD version is selected at runtime when the CPU supports it.

#include <span>
#include <string_view>

namespace skewspec::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa) noexcept;

struct PairKernels {
  Isa isa;

  /// sum_{i<j} log f(z_i, z_j), f the four-factor repulsion product.
  /// Returns -inf as soon as some f vanishes.
  double (*log_f_sum)(std::span<const double> xs, std::span<const double> ys);

  /// gx[k] = sum_{l != k} d/dx_k log f(z_k, z_l), same for gy. Overwrites gx, gy.
  /// Undefined when two points coincide.
  void (*log_f_grad)(std::span<const double> xs, std::span<const double> ys, std::span<double> gx,
                     std::span<double> gy);

  /// sum_{i<j} log |l_i - l_j|^2 for planar points; -inf on coincidence.
  double (*log_sqdist_sum)(std::span<const double> xs, std::span<const double> ys);

  /// gx[k] = sum_{l != k} 2 (x_k - x_l) / |l_k - l_l|^2, same for gy.
  void (*log_sqdist_grad)(std::span<const double> xs, std::span<const double> ys, std::span<double> gx,
                          std::span<double> gy);
};

const PairKernels& scalar_kernels() noexcept;

/// nullptr when the build has no AVX2 variant or the CPU lacks AVX2+FMA.
const PairKernels* avx2_kernels() noexcept;

/// The kernel table in use. Defaults to the widest supported ISA; the
/// environment variable SKEWSPEC_ISA=scalar forces the reference path.
const PairKernels& active() noexcept;

/// Overrides the selection (tests, reproducibility across machines).
/// Returns false if `isa` is unavailable; the selection is then unchanged.
bool select(Isa isa) noexcept;

}  // namespace skewspec::kernels
