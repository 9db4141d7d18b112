#include <algorithm>
#include <cmath>
#include <limits>

#include "statlab/error.hpp"
#include "statlab/inequality.hpp"
#include "statlab/parallel.hpp"

namespace statlab {

namespace {

TensorValue identity_metric(std::size_t n) {
  TensorValue g = TensorValue::covariant(n, 2, {{0, 1, false}});
  for (std::size_t i = 0; i < n; ++i) g(i, i) = 1.0;
  return g;
}

}  // namespace

Eigen::MatrixXd k_matrix(const TensorValue& k, std::size_t x) {
  const std::size_t n = k.dim();
  Eigen::MatrixXd m(n, n);
  for (std::size_t l = 0; l < n; ++l) {
    for (std::size_t c = 0; c < n; ++c) m(l, c) = k(l, x, c);
  }
  return m;
}

TensorValue trace_derivation(const std::vector<Eigen::MatrixXd>& e, const TensorValue& a,
                             const TensorValue& g_inv) {
  const std::size_t n = a.dim();
  TensorValue out = TensorValue::covariant(n, 3, {{1, 2, false}});
  for (std::size_t ai = 0; ai < n; ++ai) {
    for (std::size_t b = 0; b < n; ++b) {
      const double w = g_inv(ai, b);
      if (w == 0.0) continue;
      for (std::size_t x = 0; x < n; ++x) {
        const Eigen::MatrixXd& t = e[ai * n + x];
        for (std::size_t y = 0; y < n; ++y) {
          for (std::size_t z = 0; z < n; ++z) {
            double v = 0.0;
            for (std::size_t l = 0; l < n; ++l) {
              v += t(l, b) * a(l, y, z) + t(l, y) * a(b, l, z) + t(l, z) * a(b, y, l);
            }
            out(x, y, z) -= w * v;
          }
        }
      }
    }
  }
  return out;
}

TensorValue nomizu_f(const TensorValue& a, const TensorValue& g_inv) {
  const std::size_t n = a.dim();
  const TensorValue k = raise_cubic(a, g_inv);
  std::vector<Eigen::MatrixXd> km(n);
  for (std::size_t x = 0; x < n; ++x) km[x] = k_matrix(k, x);
  std::vector<Eigen::MatrixXd> e(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t x = 0; x < n; ++x) e[i * n + x] = km[i] * km[x] - km[x] * km[i];
  }
  TensorValue f = trace_derivation(e, a, g_inv);
  f *= -1.0;
  return f;
}

TensorValue a_prime(const TensorValue& r, const TensorValue& a, const TensorValue& g_inv) {
  const std::size_t n = a.dim();
  std::vector<Eigen::MatrixXd> e(n * n, Eigen::MatrixXd(n, n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t x = 0; x < n; ++x) {
      Eigen::MatrixXd& m = e[i * n + x];
      for (std::size_t l = 0; l < n; ++l) {
        for (std::size_t b = 0; b < n; ++b) m(l, b) = r(i, x, b, l);
      }
    }
  }
  return trace_derivation(e, a, g_inv);
}

double nomizu_gap(const TensorValue& a, const TensorValue& g) {
  const std::size_t n = a.dim();
  const TensorValue g_inv = inverse_spd(g);
  const double tol = 1e-10 * std::max(1.0, a.max_abs());
  for (std::size_t i = 0; i < n; ++i) {
    double t = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) t += g_inv(j, k) * a(i, j, k);
    }
    if (std::abs(t) > tol) throw Error(ErrorCode::NotTraceFree, "cubic form is not trace-free");
  }
  const TensorValue af = transform_covariant(a, coordinate_orthonormal_frame(g));
  const TensorValue id = identity_metric(n);
  const TensorValue f = nomizu_f(af, id);
  const double psi = metric_inner(af, af, id);
  const double nn = static_cast<double>(n);
  return metric_inner(f, af, id) - (nn + 1.0) / (nn * (nn - 1.0)) * psi * psi;
}

NomizuSuiteResult nomizu_sweep(std::size_t n, std::size_t samples, std::uint64_t seed, std::size_t threads,
                               double rel_tol) {
  const TensorValue id = identity_metric(n);
  const double nn = static_cast<double>(n);
  const double c = (nn + 1.0) / (nn * (nn - 1.0));
  // Cubic forms cost far more than spectra, so use smaller chunks.
  constexpr std::size_t chunk_size = 256;
  auto chunk = [&](std::size_t ci, std::size_t begin, std::size_t end) {
    std::mt19937_64 rng = chunk_rng(seed, ci);
    NomizuSuiteResult r;
    r.min_gap = std::numeric_limits<double>::infinity();
    r.min_relative_gap = std::numeric_limits<double>::infinity();
    for (std::size_t s = begin; s < end; ++s) {
      const TensorValue a = random_trace_free_cubic(n, rng);
      const TensorValue f = nomizu_f(a, id);
      const double psi = metric_inner(a, a, id);
      const double gap = metric_inner(f, a, id) - c * psi * psi;
      const double scale = 1.0 + psi * psi;
      ++r.samples;
      if (gap < -rel_tol * scale) ++r.violations;
      r.min_gap = std::min(r.min_gap, gap);
      r.min_relative_gap = std::min(r.min_relative_gap, gap / scale);
    }
    return r;
  };
  const auto parts = parallel_chunks(samples, chunk_size, threads, chunk);
  NomizuSuiteResult total;
  total.min_gap = std::numeric_limits<double>::infinity();
  total.min_relative_gap = std::numeric_limits<double>::infinity();
  for (const auto& r : parts) {
    total.samples += r.samples;
    total.violations += r.violations;
    total.min_gap = std::min(total.min_gap, r.min_gap);
    total.min_relative_gap = std::min(total.min_relative_gap, r.min_relative_gap);
  }
  if (total.samples == 0) total.min_gap = total.min_relative_gap = 0.0;
  return total;
}

}  // namespace statlab
