#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "statlab/chart.hpp"
#include "statlab/tensor.hpp"

namespace testing {

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); }

/// Rm(a,b,c,d) = sum over terms of s(a,d) s(b,c) - s(a,c) s(b,d), with s
/// random symmetric: a curvature tensor with all algebraic symmetries.
template <class Rng>
statlab::TensorValue random_algebraic_curvature(std::size_t n, Rng& rng, int terms = 3) {
  std::normal_distribution<double> normal(0.0, 1.0);
  statlab::TensorValue rm = statlab::TensorValue::covariant(n, 4);
  for (int t = 0; t < terms; ++t) {
    std::vector<double> s(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) s[i * n + j] = s[j * n + i] = normal(rng);
    }
    const double sign = t % 2 == 0 ? 1.0 : -1.0;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c)
          for (std::size_t d = 0; d < n; ++d)
            rm(a, b, c, d) += sign * (s[a * n + d] * s[b * n + c] - s[a * n + c] * s[b * n + d]);
  }
  return rm;
}

inline statlab::TensorValue identity_metric(std::size_t n) {
  statlab::TensorValue g = statlab::TensorValue::covariant(n, 2);
  for (std::size_t i = 0; i < n; ++i) g(i, i) = 1.0;
  return g;
}

}  // namespace testing
