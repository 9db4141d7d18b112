#include <algorithm>
#include <cmath>
#include <limits>

#include "statlab/error.hpp"
#include "statlab/inequality.hpp"
#include "statlab/kernels.hpp"
#include "statlab/parallel.hpp"

namespace statlab {

CrucialValue crucial_pair(const SpectrumSample& sample) {
  const std::size_t n = sample.lambda.size();
  if (n < 2) throw Error(ErrorCode::InvalidSample, "spectrum needs at least two eigenvalues");
  if (static_cast<std::size_t>(sample.k.rows()) != n || static_cast<std::size_t>(sample.k.cols()) != n) {
    throw Error(ErrorCode::InvalidSample, "k must be n x n");
  }
  double sum = 0.0;
  double scale = 0.0;
  for (const double l : sample.lambda) {
    sum += l;
    scale = std::max(scale, std::abs(l));
  }
  if (std::abs(sum) > 1e-12 * std::max(1.0, scale)) throw Error(ErrorCode::InvalidSample, "eigenvalues must sum to zero");
  for (std::size_t i = 0; i < n; ++i) {
    if (sample.k(i, i) != 0.0) throw Error(ErrorCode::InvalidSample, "k must have zero diagonal");
    for (std::size_t j = i + 1; j < n; ++j) {
      if (sample.k(i, j) != sample.k(j, i)) throw Error(ErrorCode::InvalidSample, "k must be symmetric");
    }
  }
  CrucialValue out;
  for (std::size_t i = 0; i < n; ++i) {
    const double li = sample.lambda[i];
    out.psi += li * li;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double lj = sample.lambda[j];
      const double d = lj - li;
      out.lhs += (d * d - 2.0 * (li * lj)) * sample.k(i, j);
    }
  }
  return out;
}

SweepResult crucial_sweep(std::size_t n, double h3, double eps, std::size_t samples, std::uint64_t seed,
                          std::size_t threads, double rel_tol) {
  if (n < 2) throw Error(ErrorCode::InvalidSample, "sweep dimension must be at least 2");
  const CurvaturePinch pinch = CurvaturePinch::from_h3(n, h3, eps);
  const double lo = pinch.window_lo();
  const double hi = pinch.window_hi();
  const std::size_t pairs = n * (n - 1) / 2;
  const double factor = static_cast<double>(n + 1) * h3;

  auto chunk = [&](std::size_t c, std::size_t begin, std::size_t end) {
    const std::size_t count = end - begin;
    std::mt19937_64 rng = chunk_rng(seed, c);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> window(lo, hi);
    std::vector<double> lambda(n * count);
    std::vector<double> k(pairs * count);
    for (std::size_t s = 0; s < count; ++s) {
      double mean = 0.0;
      for (std::size_t i = 0; i < n; ++i) mean += (lambda[i * count + s] = normal(rng));
      mean /= static_cast<double>(n);
      for (std::size_t i = 0; i < n; ++i) lambda[i * count + s] -= mean;
      for (std::size_t p = 0; p < pairs; ++p) k[p * count + s] = hi > lo ? window(rng) : lo;
    }
    std::vector<double> lhs(count), psi(count);
    kernels::crucial_batch(n, count, lambda.data(), k.data(), lhs.data(), psi.data());
    SweepResult r;
    r.samples = count;
    r.min_slack = std::numeric_limits<double>::infinity();
    r.min_relative_slack = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < count; ++s) {
      const double slack = lhs[s] - factor * psi[s];
      const double scale = 1.0 + std::abs(h3) * psi[s];
      if (slack < -rel_tol * scale) ++r.violations;
      r.min_slack = std::min(r.min_slack, slack);
      r.min_relative_slack = std::min(r.min_relative_slack, slack / scale);
    }
    return r;
  };

  const auto parts = parallel_chunks(samples, kSampleChunk, threads, chunk);
  SweepResult total;
  total.min_slack = std::numeric_limits<double>::infinity();
  total.min_relative_slack = std::numeric_limits<double>::infinity();
  for (const auto& r : parts) {
    total.samples += r.samples;
    total.violations += r.violations;
    total.min_slack = std::min(total.min_slack, r.min_slack);
    total.min_relative_slack = std::min(total.min_relative_slack, r.min_relative_slack);
  }
  if (total.samples == 0) total.min_slack = total.min_relative_slack = 0.0;
  return total;
}

}  // namespace statlab
