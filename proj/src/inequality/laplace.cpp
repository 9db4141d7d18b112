#include <algorithm>
#include <cmath>
#include <string>

#include "statlab/error.hpp"
#include "statlab/inequality.hpp"

namespace statlab {

namespace {

void require_hypotheses(const LocalGeometry& geo, const CurvatureBundle& c, double psi, double tol) {
  const double scale = std::max(1.0, psi);
  const StructureResiduals sr = structure_residuals(geo);
  if (sr.trace_free > tol * scale) {
    throw Error(ErrorCode::PreconditionViolated, "structure is not trace-free at the point (residual " +
                                                     std::to_string(sr.trace_free) + ")");
  }
  const double rr = max_abs_diff(c.r, c.r_bar);
  if (rr > tol * scale) {
    throw Error(ErrorCode::PreconditionViolated, "structure is not conjugate symmetric at the point (|R - R-bar| = " +
                                                     std::to_string(rr) + ")");
  }
}

double point_h3(const LocalGeometry& geo, const CurvatureBundle& c, std::size_t planes, std::uint64_t seed) {
  const SectionalRange range = sectional_range(geo, c, planes, seed);
  return CurvaturePinch::from_h1_h2(geo.dim(), range.max, range.min).h3;
}

}  // namespace

DeltaPsiCheck delta_psi_check(const StatStructure& s, std::span<const double> p, std::size_t planes,
                              std::uint64_t seed, double tol) {
  const LocalGeometry geo = local_geometry(s, p);
  const CurvatureBundle c = curvature_bundle(geo);
  const Jet psi = cubic_norm_jet(geo.fields);
  require_hypotheses(geo, c, psi.value(), tol);
  const double n = static_cast<double>(geo.dim());
  DeltaPsiCheck out;
  out.psi = psi.value();
  out.h3 = point_h3(geo, c, planes, seed);
  out.lhs = laplacian_scalar_at(geo, psi);
  out.rhs = 2.0 * (n + 1.0) * out.psi * out.h3 + 2.0 * (n + 1.0) / (n * (n - 1.0)) * out.psi * out.psi;
  out.slack = out.lhs - out.rhs;
  return out;
}

SimonsCheck simons_check(const StatStructure& s, std::span<const double> p) {
  const LocalGeometry geo = local_geometry(s, p);
  SimonsCheck out;
  out.lhs = laplacian_scalar_at(geo, cubic_norm_jet(geo.fields));
  const TensorValue lap = rough_laplacian_a(geo);
  out.rhs = 2.0 * metric_inner(lap, geo.a(), geo.g_inv()) + 2.0 * metric_inner(geo.nabla_a, geo.nabla_a, geo.g_inv());
  const double scale = std::max(std::abs(out.lhs), std::abs(out.rhs));
  out.rel_error = scale == 0.0 ? 0.0 : std::abs(out.lhs - out.rhs) / scale;
  return out;
}

DeltaACheck delta_a_check(const StatStructure& s, std::span<const double> p) {
  const LocalGeometry geo = local_geometry(s, p);
  const CurvatureBundle c = curvature_bundle(geo);
  const TensorValue lap = rough_laplacian_a(geo);
  const TensorValue predicted = a_prime(c.r, geo.a(), geo.g_inv()) + nomizu_f(geo.a(), geo.g_inv());
  return {max_abs_diff(lap, predicted), lap.max_abs()};
}

APrimeCheck a_prime_bound_check(const StatStructure& s, std::span<const double> p, std::size_t planes,
                                std::uint64_t seed) {
  const LocalGeometry geo = local_geometry(s, p);
  const CurvatureBundle c = curvature_bundle(geo);
  const double psi = metric_inner(geo.a(), geo.a(), geo.g_inv());
  APrimeCheck out;
  out.value = metric_inner(a_prime(c.r, geo.a(), geo.g_inv()), geo.a(), geo.g_inv());
  out.bound = (static_cast<double>(geo.dim()) + 1.0) * psi * point_h3(geo, c, planes, seed);
  out.slack = out.value - out.bound;
  return out;
}

}  // namespace statlab
