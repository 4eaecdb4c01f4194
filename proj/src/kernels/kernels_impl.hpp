#pragma once

#include "skewspec/kernels.hpp"

namespace skewspec::kernels {

namespace scalar {
double log_f_sum(std::span<const double> xs, std::span<const double> ys);
void log_f_grad(std::span<const double> xs, std::span<const double> ys, std::span<double> gx,
                std::span<double> gy);
double log_sqdist_sum(std::span<const double> xs, std::span<const double> ys);
void log_sqdist_grad(std::span<const double> xs, std::span<const double> ys, std::span<double> gx,
                     std::span<double> gy);
}  // namespace scalar

#if defined(SKEWSPEC_HAVE_AVX2)
namespace avx2 {
double log_f_sum(std::span<const double> xs, std::span<const double> ys);
void log_f_grad(std::span<const double> xs, std::span<const double> ys, std::span<double> gx,
                std::span<double> gy);
double log_sqdist_sum(std::span<const double> xs, std::span<const double> ys);
void log_sqdist_grad(std::span<const double> xs, std::span<const double> ys, std::span<double> gx,
                     std::span<double> gy);
}  // namespace avx2
#endif

}  // namespace skewspec::kernels
