#pragma once

// Batch kernels for the sampling sweeps. Each kernel has a scalar reference
// implementation and an AVX2 variant chosen at runtime. Both evaluate the
// same operation sequence per sample, so their outputs are bit-identical.
//
// Batches use structure-of-arrays layout: component c of sample s lives at
// data[c * count + s].

#include <cstddef>
#include <optional>

namespace statlab::kernels {

enum class Isa { Scalar, Avx2 };

const char* to_string(Isa isa) noexcept;

/// True when the AVX2 variants were compiled in and the CPU supports them.
bool avx2_available() noexcept;

/// The variant the dispatchers currently use.
Isa active_isa() noexcept;

/// Pins the dispatchers to one variant (tests); nullopt restores detection.
/// Requesting Avx2 where it is unavailable falls back to Scalar.
void force_isa(std::optional<Isa> isa) noexcept;

/// Spectrum sums for a batch of samples with n eigenvalues each.
/// lambda: n rows; k: n(n-1)/2 rows for the pairs i < j in lexicographic
/// order. Writes
///   lhs = sum_{i<j} ((l_j - l_i)^2 - 2 l_i l_j) k_ij,   psi = sum_i l_i^2.
void crucial_batch(std::size_t n, std::size_t count, const double* lambda, const double* k,
                   double* lhs, double* psi);

/// out_s = -sum_{p,q} q[p * m + q] b_p b_q for a batch of m-vectors b.
void bivector_form_batch(std::size_t m, const double* q, std::size_t count, const double* b,
                         double* out);

namespace detail {
void crucial_batch_scalar(std::size_t n, std::size_t count, const double* lambda, const double* k,
                          double* lhs, double* psi);
void bivector_form_batch_scalar(std::size_t m, const double* q, std::size_t count, const double* b,
                                double* out);
#if defined(STATLAB_HAVE_AVX2_KERNELS)
void crucial_batch_avx2(std::size_t n, std::size_t count, const double* lambda, const double* k,
                        double* lhs, double* psi);
void bivector_form_batch_avx2(std::size_t m, const double* q, std::size_t count, const double* b,
                              double* out);
#endif
}  // namespace detail

}  // namespace statlab::kernels
