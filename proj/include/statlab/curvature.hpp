#pragma once

// Curvature tensors of a statistical structure at a point.
//
// Storage: R(i, j, k, l) = (R(e_i, e_j) e_k)^l with
// R(X,Y) = nabla_X nabla_Y - nabla_Y nabla_X - nabla_[X,Y].
// Ric(Y, Z) = tr(X -> R(X,Y)Z). "Lowered" tensors are
// Rm(i, j, k, w) = g(R(e_i, e_j) e_k, e_w).

#include <span>
#include <vector>

#include "statlab/chart.hpp"
#include "statlab/connection.hpp"
#include "statlab/tensor.hpp"

namespace statlab {

struct CurvatureBundle {
  TensorValue r;       // statistical connection
  TensorValue r_bar;   // dual connection, from the curvature formula with -K
  TensorValue r_hat;   // Levi-Civita
  TensorValue r_cal;   // (R + R-bar) / 2
  TensorValue ric;
  TensorValue ric_bar;
  TensorValue ric_hat;
  double rho = 0.0;
  double rho_bar = 0.0;
  double rho_hat = 0.0;
  /// max |R-bar(curvature formula) - R-bar(duality)|.
  double dual_route_residual = 0.0;
};

CurvatureBundle curvature_bundle_at(const StatStructure& s, std::span<const double> p);
CurvatureBundle curvature_bundle(const LocalGeometry& geo);

/// Curvature of an arbitrary torsion-free connection from its coefficients
/// gamma(l, i, j) and derivatives dgamma(k, l, i, j).
TensorValue riemann_from_connection(const TensorValue& gamma, const TensorValue& dgamma);

/// Curvature of nabla-hat + sign * K computed directly from the connection
/// coefficients (d K from symbolic dg and dA). Independent of the
/// decomposition used by curvature_bundle.
TensorValue statistical_curvature_direct(const LocalGeometry& geo, double sign);

/// [K_X, K_Y] in curvature storage.
TensorValue k_bracket(const TensorValue& k);

/// Ric(Y, Z) = sum_i R(i, Y, Z, i).
TensorValue ricci(const TensorValue& r);
double scalar_curvature(const TensorValue& ric, const TensorValue& g_inv);

/// Rm(i, j, k, w) = g_lw R(i, j, k, l).
TensorValue lower_curvature(const TensorValue& r, const TensorValue& g);

/// g(R_cal(e1, e2) e2, e1) for a g-orthonormal basis of the plane.
/// Throws DegeneratePlane when u, v are dependent.
double sectional_nabla_at(const StatStructure& s, std::span<const double> p, const Plane& plane);
double sectional_from(const TensorValue& r_cal_lowered, const TensorValue& g, const Plane& plane);

struct ConjugateSymmetryReport {
  double r_minus_rbar = 0.0;
  double nabla_hat_a_asym = 0.0;
  double zw_skew = 0.0;
};

ConjugateSymmetryReport conjugate_symmetry_report(const StatStructure& s, std::span<const double> p);
ConjugateSymmetryReport conjugate_symmetry_report(const LocalGeometry& geo, const CurvatureBundle& c);

struct IdentityResiduals {
  double eq10 = 0.0;      // R + R-bar = 2 R-hat + 2 [K, K]
  double eq12 = 0.0;      // Ric + Ric-bar = 2 Ric-hat - 2 g(K_Y, K_Z)
  double eq17 = 0.0;      // rho-hat = rho + |A|^2
  double eq15_gap = 0.0;  // smallest g-eigenvalue of sym(Ric-hat - Ric)
};

/// Throws PreconditionViolated when the structure is not trace-free at p
/// (residual above trace_tol).
IdentityResiduals identity_residuals(const StatStructure& s, std::span<const double> p,
                                     double trace_tol = 1e-8);
IdentityResiduals identity_residuals(const LocalGeometry& geo, const CurvatureBundle& c,
                                     double trace_tol = 1e-8);

/// Smallest eigenvalue of the symmetric part of t relative to g.
double min_relative_eigenvalue(const TensorValue& t, const TensorValue& g);
/// Largest eigenvalue of the symmetric part of t relative to g.
double max_relative_eigenvalue(const TensorValue& t, const TensorValue& g);

struct WitnessComponent {
  std::size_t i = 0, j = 0, l = 0;  // 0-based frame indices
  double value = 0.0;               // g(R(e_i, e_j) e_j, e_l)
};

struct ProjectiveWitness {
  std::vector<WitnessComponent> components;
  double max_abs = 0.0;
};

/// Distinct-index components in the Gram-Schmidt frame of the coordinate
/// basis. Requires n >= 3.
ProjectiveWitness projective_witness_at(const StatStructure& s, std::span<const double> p);
ProjectiveWitness projective_witness(const TensorValue& r, const TensorValue& g);

/// Cyclic sum residual R(X,Y)Z + R(Y,Z)X + R(Z,X)Y.
double bianchi_residual(const TensorValue& r);
/// max |R(i,j,k,l) + R(j,i,k,l)|.
double antisymmetry_residual(const TensorValue& r);

}  // namespace statlab
