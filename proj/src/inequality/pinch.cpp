#include <cmath>
#include <string>

#include "statlab/error.hpp"
#include "statlab/inequality.hpp"

namespace statlab {

CurvaturePinch CurvaturePinch::from_h3(std::size_t n, double h3, double eps) {
  if (n < 2) throw Error(ErrorCode::InvalidPinch, "pinch dimension must be at least 2");
  if (!(eps >= 0.0) || !std::isfinite(h3) || !std::isfinite(eps)) {
    throw Error(ErrorCode::InvalidPinch, "pinch needs finite H3 and eps >= 0");
  }
  CurvaturePinch p;
  p.n = n;
  p.h3 = h3;
  p.eps = eps;
  p.h2 = h3 + 0.5 * static_cast<double>(n - 2) * eps;
  p.h1 = p.h2 + eps;
  return p;
}

CurvaturePinch CurvaturePinch::from_h1_h2(std::size_t n, double h1, double h2) {
  if (n < 2) throw Error(ErrorCode::InvalidPinch, "pinch dimension must be at least 2");
  if (!(h1 >= h2) || !std::isfinite(h1) || !std::isfinite(h2)) {
    throw Error(ErrorCode::InvalidPinch, "pinch needs finite H1 >= H2");
  }
  CurvaturePinch p;
  p.n = n;
  p.h1 = h1;
  p.h2 = h2;
  p.eps = h1 - h2;
  p.h3 = h2 - 0.5 * static_cast<double>(n - 2) * p.eps;
  return p;
}

BoundsWindows bounds_windows(const CurvaturePinch& pinch) {
  if (pinch.n < 2) throw Error(ErrorCode::InvalidPinch, "pinch dimension must be at least 2");
  if (pinch.h3 > 0.0) throw Error(ErrorCode::InvalidPinch, "windows need H3 <= 0");
  if (!(pinch.eps >= 0.0)) throw Error(ErrorCode::InvalidPinch, "windows need eps >= 0");
  const double n = static_cast<double>(pinch.n);
  const double h3 = pinch.h3;
  const double eps = pinch.eps;
  BoundsWindows w;
  w.ricci_lo = (n - 1.0) * h3 + (n - 1.0) * (n - 2.0) / 2.0 * eps;
  w.ricci_hi = -(n - 1.0) * (n - 1.0) * h3 + (n - 1.0) * n / 2.0 * eps;
  w.scalar_lo = n * (n - 1.0) * h3 + (n - 1.0) * (n - 2.0) * n / 2.0 * eps;
  w.scalar_hi = n * n * (n - 1.0) / 2.0 * eps;
  return w;
}

BoundsWindows bounds_windows_h1h2(std::size_t n_, double h1, double h2) {
  const CurvaturePinch p = CurvaturePinch::from_h1_h2(n_, h1, h2);
  if (p.h3 > 0.0) throw Error(ErrorCode::InvalidPinch, "windows need H3 <= 0");
  const double n = static_cast<double>(n_);
  const double eps = p.eps;
  BoundsWindows w;
  w.ricci_lo = (n - 1.0) * h2;
  w.ricci_hi = (n - 1.0) * ((1.0 - n) * h1 + n * n / 2.0 * eps);
  w.scalar_lo = n * (n - 1.0) * h2;
  w.scalar_hi = n * n * (n - 1.0) / 2.0 * eps;
  return w;
}

double psi_sup_bound(std::size_t n, double h3) {
  if (h3 > 0.0) throw Error(ErrorCode::PositiveH3, "psi bound needs H3 <= 0");
  if (n < 2) throw Error(ErrorCode::InvalidPinch, "dimension must be at least 2");
  if (h3 == 0.0) return 0.0;
  const double nn = static_cast<double>(n);
  return -nn * (nn - 1.0) * h3;
}

std::vector<double> psi_inequality_coefficients(std::size_t n, double h3) {
  const double nn = static_cast<double>(n);
  const double b1 = h3 == 0.0 ? 0.0 : -2.0 * (nn + 1.0) * h3;
  return {2.0 * (nn + 1.0) / (nn * (nn - 1.0)), b1, 0.0};
}

double cubic_sup_bound(std::size_t n, double big_n) {
  if (big_n > 0.0) throw Error(ErrorCode::PositiveN, "cubic bound needs N <= 0");
  if (big_n == 0.0) return 0.0;
  return std::sqrt(-(static_cast<double>(n) + 1.0) * big_n);
}

}  // namespace statlab
