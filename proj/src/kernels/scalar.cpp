#include "statlab/kernels.hpp"

namespace statlab::kernels::detail {

void crucial_batch_scalar(std::size_t n, std::size_t count, const double* lambda, const double* k,
                          double* lhs, double* psi) {
  for (std::size_t s = 0; s < count; ++s) {
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

void bivector_form_batch_scalar(std::size_t m, const double* q, std::size_t count, const double* b,
                                double* out) {
  for (std::size_t s = 0; s < count; ++s) {
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
