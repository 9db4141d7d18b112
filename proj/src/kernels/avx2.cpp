#include <immintrin.h>

#include "statlab/kernels.hpp"

// Four samples per register. Tails repeat the scalar expression sequence.

namespace statlab::kernels::detail {

void crucial_batch_avx2(std::size_t n, std::size_t count, const double* lambda, const double* k,
                        double* lhs, double* psi) {
  const __m256d two = _mm256_set1_pd(2.0);
  std::size_t s = 0;
  for (; s + 4 <= count; s += 4) {
    __m256d acc = _mm256_setzero_pd();
    __m256d sq = _mm256_setzero_pd();
    std::size_t pair = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const __m256d li = _mm256_loadu_pd(lambda + i * count + s);
      sq = _mm256_add_pd(sq, _mm256_mul_pd(li, li));
      for (std::size_t j = i + 1; j < n; ++j, ++pair) {
        const __m256d lj = _mm256_loadu_pd(lambda + j * count + s);
        const __m256d d = _mm256_sub_pd(lj, li);
        const __m256d w = _mm256_sub_pd(_mm256_mul_pd(d, d), _mm256_mul_pd(two, _mm256_mul_pd(li, lj)));
        acc = _mm256_add_pd(acc, _mm256_mul_pd(w, _mm256_loadu_pd(k + pair * count + s)));
      }
    }
    _mm256_storeu_pd(lhs + s, acc);
    _mm256_storeu_pd(psi + s, sq);
  }
  for (; s < count; ++s) {
    double acc = 0.0;
    double sq = 0.0;
    std::size_t pair = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double li = lambda[i * count + s];
      sq += li * li;
      for (std::size_t j = i + 1; j < n; ++j, ++pair) {
        const double lj = lambda[j * count + s];
        const double d = lj - li;
        acc += (d * d - 2.0 * (li * lj)) * k[pair * count + s];
      }
    }
    lhs[s] = acc;
    psi[s] = sq;
  }
}

void bivector_form_batch_avx2(std::size_t m, const double* q, std::size_t count, const double* b,
                              double* out) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  std::size_t s = 0;
  for (; s + 4 <= count; s += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t p = 0; p < m; ++p) {
      __m256d row = _mm256_setzero_pd();
      for (std::size_t r = 0; r < m; ++r) {
        row = _mm256_add_pd(row, _mm256_mul_pd(_mm256_set1_pd(q[p * m + r]), _mm256_loadu_pd(b + r * count + s)));
      }
      acc = _mm256_add_pd(acc, _mm256_mul_pd(row, _mm256_loadu_pd(b + p * count + s)));
    }
    _mm256_storeu_pd(out + s, _mm256_xor_pd(acc, sign));
  }
  for (; s < count; ++s) {
    double acc = 0.0;
    for (std::size_t p = 0; p < m; ++p) {
      double row = 0.0;
      for (std::size_t r = 0; r < m; ++r) row += q[p * m + r] * b[r * count + s];
      acc += row * b[p * count + s];
    }
    out[s] = -acc;
  }
}

}  // namespace statlab::kernels::detail
