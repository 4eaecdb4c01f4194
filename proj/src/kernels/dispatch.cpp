#include <atomic>
#include <cstdlib>
#include <string_view>

#include "kernels_impl.hpp"

namespace skewspec::kernels {

namespace {

constexpr PairKernels kScalar{Isa::scalar, scalar::log_f_sum, scalar::log_f_grad, scalar::log_sqdist_sum,
                              scalar::log_sqdist_grad};

#if defined(SKEWSPEC_HAVE_AVX2)
constexpr PairKernels kAvx2{Isa::avx2, avx2::log_f_sum, avx2::log_f_grad, avx2::log_sqdist_sum,
                            avx2::log_sqdist_grad};

bool cpu_has_avx2() noexcept {
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}
#endif

const PairKernels* initial_selection() noexcept {
  if (const char* env = std::getenv("SKEWSPEC_ISA"); env && std::string_view(env) == "scalar")
    return &kScalar;
  if (const PairKernels* k = avx2_kernels()) return k;
  return &kScalar;
}

std::atomic<const PairKernels*>& current() noexcept {
  static std::atomic<const PairKernels*> sel{initial_selection()};
  return sel;
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

const PairKernels& scalar_kernels() noexcept { return kScalar; }

const PairKernels* avx2_kernels() noexcept {
#if defined(SKEWSPEC_HAVE_AVX2)
  static const bool ok = cpu_has_avx2();
  return ok ? &kAvx2 : nullptr;
#else
  return nullptr;
#endif
}

const PairKernels& active() noexcept { return *current().load(std::memory_order_relaxed); }

bool select(Isa isa) noexcept {
  const PairKernels* k = isa == Isa::scalar ? &kScalar : avx2_kernels();
  if (!k) return false;
  current().store(k, std::memory_order_relaxed);
  return true;
}

}  // namespace skewspec::kernels
