#pragma once

// Pointwise and randomized checks of the curvature inequalities for
// trace-free conjugate symmetric statistical structures, plus the cubic-form
// maximization on the unit sphere.

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "statlab/chart.hpp"
#include "statlab/connection.hpp"
#include "statlab/curvature.hpp"
#include "statlab/tensor.hpp"

namespace statlab {

// ---------------------------------------------------------------------------
// Pinch parameters

/// Sectional curvature bounds H2 <= k <= H1 with eps = H1 - H2 and
/// H3 = H2 - (n - 2) eps / 2.
struct CurvaturePinch {
  std::size_t n = 2;
  double h1 = 0.0;
  double h2 = 0.0;
  double h3 = 0.0;
  double eps = 0.0;

  /// Throws InvalidPinch for n < 2 or eps < 0.
  static CurvaturePinch from_h3(std::size_t n, double h3, double eps);
  /// Throws InvalidPinch for n < 2 or h1 < h2.
  static CurvaturePinch from_h1_h2(std::size_t n, double h1, double h2);

  /// Window H3 + (n-2)/2 eps <= k <= H3 + n/2 eps.
  double window_lo() const noexcept { return h3 + 0.5 * static_cast<double>(n - 2) * eps; }
  double window_hi() const noexcept { return h3 + 0.5 * static_cast<double>(n) * eps; }
};

struct BoundsWindows {
  double ricci_lo = 0.0;
  double ricci_hi = 0.0;
  double scalar_lo = 0.0;
  double scalar_hi = 0.0;
};

/// Ricci and scalar windows in the (H3, eps) form. Throws InvalidPinch when
/// H3 > 0 or eps < 0.
BoundsWindows bounds_windows(const CurvaturePinch& pinch);
/// The same windows written with H1, H2 (eps = H1 - H2).
BoundsWindows bounds_windows_h1h2(std::size_t n, double h1, double h2);

/// psi <= -n(n-1) H3. Throws PositiveH3.
double psi_sup_bound(std::size_t n, double h3);

/// Coefficients b0, b1, b2 of b0 psi^2 - b1 psi - b2 from the Laplacian
/// inequality for psi.
std::vector<double> psi_inequality_coefficients(std::size_t n, double h3);

/// Largest real root of b0 x^k - b1 x^(k-1) - ... - bk. Requires b0 > 0,
/// bi >= 0 and k > 1; throws InvalidCoefficients otherwise.
double largest_root(std::span<const double> coeffs);

/// sqrt(-(n+1) N). Throws PositiveN.
double cubic_sup_bound(std::size_t n, double big_n);

// ---------------------------------------------------------------------------
// Spectrum samples and the crucial inequality

struct SpectrumSample {
  std::vector<double> lambda;  // n eigenvalues, sum 0
  Eigen::MatrixXd k;           // symmetric, zero diagonal
};

struct CrucialValue {
  double lhs = 0.0;
  double psi = 0.0;
};

/// Throws InvalidSample when the sample invariants fail (sum of lambda,
/// symmetry or zero diagonal of k).
CrucialValue crucial_pair(const SpectrumSample& sample);

struct SweepResult {
  std::size_t samples = 0;
  std::size_t violations = 0;
  double min_slack = 0.0;           // min of lhs - (n+1) H3 psi
  double min_relative_slack = 0.0;  // min of slack / (1 + |H3| psi)
};

/// Random spectra with k_ij uniform in the pinch window. A sample violates
/// when slack < -rel_tol (1 + |H3| psi).
SweepResult crucial_sweep(std::size_t n, double h3, double eps, std::size_t samples,
                          std::uint64_t seed, std::size_t threads = 0, double rel_tol = 1e-9);

// ---------------------------------------------------------------------------
// Cubic-form algebra

/// Endomorphism K_X as a matrix acting on components: (K_X)(l, m) = K^l_{x m}.
Eigen::MatrixXd k_matrix(const TensorValue& k, std::size_t x);

/// out(x, y, z) = tr_g (E_{., x} . A)(., y, z), where E holds n*n
/// endomorphisms E[a * n + x] and (T . A)(a,b,c) = -A(Ta,b,c) - A(a,Tb,c) - A(a,b,Tc).
TensorValue trace_derivation(const std::vector<Eigen::MatrixXd>& e, const TensorValue& a,
                             const TensorValue& g_inv);

/// F(X,Y,Z) = -tr_g([K_., K_X] A)(., Y, Z).
TensorValue nomizu_f(const TensorValue& a, const TensorValue& g_inv);

/// A'(X,Y,Z) = tr_g(R(., X) A)(., Y, Z) for a curvature tensor in library storage.
TensorValue a_prime(const TensorValue& r, const TensorValue& a, const TensorValue& g_inv);

/// g(F, A) - (n+1)/(n(n-1)) g(A,A)^2. Throws NotTraceFree.
double nomizu_gap(const TensorValue& a, const TensorValue& g);

/// Fully symmetric, trace-free cubic form with respect to the identity,
/// Gaussian entries before projection.
template <class Rng>
TensorValue random_trace_free_cubic(std::size_t n, Rng& rng);

struct NomizuSuiteResult {
  std::size_t samples = 0;
  std::size_t violations = 0;
  double min_gap = 0.0;
  double min_relative_gap = 0.0;  // gap / (1 + psi^2)
};

NomizuSuiteResult nomizu_sweep(std::size_t n, std::size_t samples, std::uint64_t seed,
                               std::size_t threads = 0, double rel_tol = 1e-9);

// ---------------------------------------------------------------------------
// Sectional curvature sampling

struct SectionalRange {
  double min = 0.0;
  double max = 0.0;
  std::size_t planes = 0;
};

/// Sectional nabla-curvature extremes at one point: all coordinate planes of
/// the orthonormal frame, `random_planes` random planes, then local
/// refinement of the extremal candidates. Estimates, not certified bounds.
SectionalRange sectional_range(const LocalGeometry& geo, const CurvatureBundle& c,
                               std::size_t random_planes, std::uint64_t seed);

struct EmpiricalPinch {
  CurvaturePinch pinch;
  std::size_t points = 0;
  std::size_t planes = 0;
};

/// Pinch from the sampled extremes over the chart grid, `total_planes`
/// random planes split evenly across the grid points.
EmpiricalPinch empirical_pinch(const StatStructure& s, std::size_t total_planes, std::uint64_t seed,
                               std::size_t threads = 0);

// ---------------------------------------------------------------------------
// Laplacian checks at a point

struct DeltaPsiCheck {
  double psi = 0.0;
  double h3 = 0.0;
  double lhs = 0.0;  // Delta psi
  double rhs = 0.0;  // 2(n+1) psi H3 + 2(n+1)/(n(n-1)) psi^2
  double slack = 0.0;
};

/// Uses the pinch measured at p (sectional_range with `planes` random planes).
/// Throws PreconditionViolated unless the structure is trace-free and
/// conjugate symmetric at p within `tol`.
DeltaPsiCheck delta_psi_check(const StatStructure& s, std::span<const double> p,
                              std::size_t planes = 2000, std::uint64_t seed = 0, double tol = 1e-8);

struct SimonsCheck {
  double lhs = 0.0;  // Delta g(A, A)
  double rhs = 0.0;  // 2 g(Delta A, A) + 2 g(nabla A, nabla A)
  double rel_error = 0.0;
};

SimonsCheck simons_check(const StatStructure& s, std::span<const double> p);

struct DeltaACheck {
  double residual = 0.0;  // max |Delta A - (A' + F)|
  double scale = 0.0;     // max |Delta A|
};

DeltaACheck delta_a_check(const StatStructure& s, std::span<const double> p);

struct APrimeCheck {
  double value = 0.0;  // g(A', A)
  double bound = 0.0;  // (n+1) psi H3
  double slack = 0.0;
};

APrimeCheck a_prime_bound_check(const StatStructure& s, std::span<const double> p,
                                std::size_t planes = 2000, std::uint64_t seed = 0);

// ---------------------------------------------------------------------------
// Cubic maximum on the unit sphere

struct SphereOptions {
  std::size_t restarts = 32;
  std::size_t max_iterations = 500;
  double initial_step = 0.1;
  double gradient_tol = 1e-10;
};

struct CubicMaximum {
  Vector v;            // g-unit maximizer, chart components
  double value = 0.0;  // A(V, V, V)
  bool converged = false;
  double gradient_norm = 0.0;
};

/// Maximum of u -> A(u,u,u) on the unit sphere of an orthonormal frame.
CubicMaximum max_cubic_on_sphere(const TensorValue& a_orthonormal, std::uint64_t seed,
                                 const SphereOptions& opts = {});

CubicMaximum max_cubic_direction(const StatStructure& s, std::span<const double> p,
                                 std::size_t restarts = 32, std::uint64_t seed = 0);

struct MaximizerChecks {
  double lambda1 = 0.0;
  double eigvec_residual = 0.0;
  std::vector<double> lambdas;      // lambda_1 first, then the rest of the K_V spectrum
  std::vector<double> lambda_gaps;  // lambda_1 - 2 lambda_i, i >= 2
  double identity_k_lhs = 0.0;
  double identity_k_rhs = 0.0;
  double identity_k_residual = 0.0;
  double identity_r_lhs = 0.0;
  double identity_r_rhs = 0.0;
  double identity_r_residual = 0.0;
};

/// Throws NotUnit when g(V, V) differs from 1 by more than 1e-8.
MaximizerChecks maximizer_checks(const StatStructure& s, std::span<const double> p,
                                 std::span<const double> v);
/// Same checks for orthonormal-frame data: A and the statistical curvature
/// tensor already lowered and expressed in the frame.
MaximizerChecks maximizer_checks_orthonormal(const TensorValue& a, const TensorValue& rm,
                                             std::span<const double> v);

struct DeltaPhiCheck {
  double phi = 0.0;
  double big_n = 0.0;  // sampled sectional minimum at p
  double lhs = 0.0;    // (Delta A)(V, V, V)
  double rhs = 0.0;    // (n+1) N phi + phi^3
  double slack = 0.0;
};

DeltaPhiCheck delta_phi_check(const StatStructure& s, std::span<const double> p,
                              std::size_t planes = 2000, std::uint64_t seed = 0);

// ---------------------------------------------------------------------------

template <class Rng>
TensorValue random_trace_free_cubic(std::size_t n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  TensorValue a = TensorValue::covariant(n, 3, {{0, 1, false}, {1, 2, false}});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      for (std::size_t k = j; k < n; ++k) {
        const double v = normal(rng);
        a(i, j, k) = a(i, k, j) = a(j, i, k) = a(j, k, i) = a(k, i, j) = a(k, j, i) = v;
      }
    }
  }
  std::vector<double> t(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) t[k] += a(i, i, k);
  }
  const double w = 1.0 / static_cast<double>(n + 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        a(i, j, k) -= w * ((i == j ? t[k] : 0.0) + (i == k ? t[j] : 0.0) + (j == k ? t[i] : 0.0));
      }
    }
  }
  return a;
}

}  // namespace statlab
