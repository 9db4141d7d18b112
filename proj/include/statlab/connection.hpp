#pragma once

// Levi-Civita connection, difference tensor, the statistical connection and
// its dual, covariant derivatives of A, and the Laplace-Beltrami operator.
//
// Coefficient layout: gamma(l, i, j) = Gamma^l_ij with nabla_{e_i} e_j =
// Gamma^l_ij e_l. The difference tensor uses the same layout:
// K(e_j, e_k) = K(l, j, k) e_l.

#include <span>

#include "statlab/chart.hpp"
#include "statlab/jet.hpp"
#include "statlab/tensor.hpp"

namespace statlab {

struct ConnectionCoeffs {
  TensorValue gamma;  // (1,2), symmetric in the lower pair
};

/// Every derived quantity at a point that the curvature and inequality code
/// needs. Built once per point; all fields are plain values.
struct LocalGeometry {
  FieldData fields;
  TensorValue gamma;        // Levi-Civita Gamma^l_ij
  TensorValue dgamma;       // dgamma(k, l, i, j) = d_k Gamma^l_ij
  TensorValue k;            // K^l_ij
  TensorValue nabla_a;      // nabla_a(w, i, j, k) = (nabla-hat_w A)_ijk
  TensorValue nabla2_a;     // nabla2_a(a, b, i, j, k) = (nabla-hat^2_{a,b} A)_ijk

  std::size_t dim() const noexcept { return fields.n; }
  const TensorValue& g() const noexcept { return fields.g; }
  const TensorValue& g_inv() const noexcept { return fields.g_inv; }
  const TensorValue& a() const noexcept { return fields.a; }
};

LocalGeometry local_geometry(const StatStructure& s, std::span<const double> p);

ConnectionCoeffs christoffel_at(const StatStructure& s, std::span<const double> p);
/// Christoffel symbols from g, g^-1 and dg.
TensorValue christoffel_from(const FieldData& f);

struct DifferenceTensor {
  TensorValue k;  // (1,2)
  TensorValue a;  // (0,3)
};

DifferenceTensor difference_tensor_at(const StatStructure& s, std::span<const double> p);
/// K^l_ij = g^lm A_mij.
TensorValue raise_cubic(const TensorValue& a, const TensorValue& g_inv);

struct ConnectionTriple {
  ConnectionCoeffs levi_civita;
  ConnectionCoeffs primal;  // nabla = nabla-hat + K
  ConnectionCoeffs dual;    // nabla-bar = nabla-hat - K
};

ConnectionTriple statistical_connections_at(const StatStructure& s, std::span<const double> p);

struct StructureResiduals {
  double codazzi = 0.0;     // max |(nabla_i g)_jk - (nabla_j g)_ik|
  double trace_free = 0.0;  // max_i |g^jk A_ijk|
};

StructureResiduals structure_residuals(const StatStructure& s, std::span<const double> p);
StructureResiduals structure_residuals(const LocalGeometry& geo);

/// Largest |nabla-hat_k g_ij| built from the computed Christoffel symbols.
double metric_compatibility_residual(const LocalGeometry& geo);

/// Largest |g(nabla_i e_j, e_k) + g(e_j, nabla-bar_i e_k) - d_i g_jk|.
double duality_residual(const LocalGeometry& geo);

/// max_i |tr K_{e_i}|.
double k_trace_residual(const LocalGeometry& geo);

TensorValue nabla_hat_a_at(const StatStructure& s, std::span<const double> p);

/// Rough Laplacian (Delta A)_ijk = g^ab (nabla-hat^2_{a,b} A)_ijk.
TensorValue rough_laplacian_a(const LocalGeometry& geo);

/// Delta f = g^ij (d_i d_j f - Gamma^k_ij d_k f) for a scalar given as a jet.
double laplacian_scalar_at(const LocalGeometry& geo, const Jet& f);
double laplacian_scalar_at(const StatStructure& s, const expr::Expr& f, std::span<const double> p);

/// psi = g(A, A) as a second-order jet built from symbolic partials of g and A.
Jet cubic_norm_jet(const FieldData& f);

}  // namespace statlab
