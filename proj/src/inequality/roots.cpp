#include <algorithm>
#include <cmath>

#include "statlab/error.hpp"
#include "statlab/inequality.hpp"

namespace statlab {

namespace {

// p(x) = c0 x^k - c1 x^(k-1) - ... - ck and p'(x), by Horner.
void evaluate(std::span<const double> c, double x, double& p, double& dp) {
  p = c[0];
  dp = 0.0;
  for (std::size_t i = 1; i < c.size(); ++i) {
    dp = dp * x + p;
    p = p * x - c[i];
  }
}

}  // namespace

double largest_root(std::span<const double> coeffs) {
  if (coeffs.size() < 3) throw Error(ErrorCode::InvalidCoefficients, "polynomial degree must exceed 1");
  if (!(coeffs[0] > 0.0)) throw Error(ErrorCode::InvalidCoefficients, "leading coefficient must be positive");
  for (std::size_t i = 1; i < coeffs.size(); ++i) {
    if (!(coeffs[i] >= 0.0) || !std::isfinite(coeffs[i])) {
      throw Error(ErrorCode::InvalidCoefficients, "lower coefficients must be finite and non-negative");
    }
  }
  // Trailing zero coefficients only contribute roots at 0.
  std::size_t len = coeffs.size();
  while (len > 1 && coeffs[len - 1] == 0.0) --len;
  if (len == 1) return 0.0;
  const std::span<const double> c = coeffs.first(len);
  if (len == 2) return c[1] / c[0];

  // One sign change, so exactly one positive root; p < 0 on (0, root).
  double hi = 1.0;
  for (std::size_t i = 1; i < len; ++i) hi = std::max(hi, 1.0 + c[i] / c[0]);
  double lo = 0.0;
  double p = 0.0, dp = 0.0;
  for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    evaluate(c, mid, p, dp);
    (p < 0.0 ? lo : hi) = mid;
  }
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 8; ++it) {
    evaluate(c, x, p, dp);
    if (dp == 0.0) break;
    const double next = x - p / dp;
    if (!(next >= lo && next <= hi) || next == x) break;
    x = next;
  }
  return x;
}

}  // namespace statlab
