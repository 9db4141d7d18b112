#include <atomic>

#include "statlab/kernels.hpp"

namespace statlab::kernels {

namespace {

// -1: detect, otherwise an Isa value.
std::atomic<int> forced{-1};

bool cpu_has_avx2() noexcept {
#if defined(STATLAB_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

}  // namespace

const char* to_string(Isa isa) noexcept { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

bool avx2_available() noexcept {
  static const bool has = cpu_has_avx2();
  return has;
}

Isa active_isa() noexcept {
  const int f = forced.load(std::memory_order_relaxed);
  if (f >= 0) return static_cast<Isa>(f) == Isa::Avx2 && avx2_available() ? Isa::Avx2 : Isa::Scalar;
  return avx2_available() ? Isa::Avx2 : Isa::Scalar;
}

void force_isa(std::optional<Isa> isa) noexcept {
  forced.store(isa ? static_cast<int>(*isa) : -1, std::memory_order_relaxed);
}

void crucial_batch(std::size_t n, std::size_t count, const double* lambda, const double* k,
                   double* lhs, double* psi) {
#if defined(STATLAB_HAVE_AVX2_KERNELS)
  if (active_isa() == Isa::Avx2) return detail::crucial_batch_avx2(n, count, lambda, k, lhs, psi);
#endif
  detail::crucial_batch_scalar(n, count, lambda, k, lhs, psi);
}

void bivector_form_batch(std::size_t m, const double* q, std::size_t count, const double* b,
                         double* out) {
#if defined(STATLAB_HAVE_AVX2_KERNELS)
  if (active_isa() == Isa::Avx2) return detail::bivector_form_batch_avx2(m, q, count, b, out);
#endif
  detail::bivector_form_batch_scalar(m, q, count, b, out);
}

}  // namespace statlab::kernels
