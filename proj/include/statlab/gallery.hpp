#pragma once

// Built-in structures: the two distinct-index families, the flat trivial
// structure, the hyperbolic half-plane, plus generators used by the test
// suites (Hessian potentials, harmonic cubic forms, random constant forms).

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "statlab/chart.hpp"
#include "statlab/report.hpp"

namespace statlab {

struct FixtureSpec {
  std::string name;  // trivial | constant_distinct | linear_distinct | hyperbolic_plane
  std::size_t n = 3;
  double c = 1.0;    // constant_distinct only
  std::optional<std::vector<double>> lo;
  std::optional<std::vector<double>> hi;
  std::size_t grid = 3;
};

const std::vector<std::string>& fixture_names();

/// Throws InvalidSpec for unknown names, n < 3 for the distinct-index
/// families, c <= 0, n != 2 for the half-plane, or a box leaving the
/// family's domain.
StatStructure build(const FixtureSpec& spec);

/// (g, alpha A).
StatStructure alpha_transform(const StatStructure& s, double alpha);

/// Flat metric with A_ijk = d_i d_j d_k f.
StatStructure harmonic_cubic(std::size_t n, std::string_view f, const Chart& chart);

/// g_ij = d_i d_j phi and A_ijk = -1/2 d_i d_j d_k phi (both connections flat).
StatStructure hessian_potential(std::size_t n, std::string_view phi, const Chart& chart);

/// Flat metric with the given constant cubic form.
StatStructure constant_cubic(const TensorValue& a, const Chart& chart);

/// Adds x1 to the component A_{1,2,3} (A_{1,2,2} when n = 2).
StatStructure perturb_cubic(const StatStructure& s);

struct NamedStructure {
  std::string name;
  StatStructure structure;
};

/// Twenty conjugate symmetric structures of varied kind and dimension.
std::vector<NamedStructure> conjugate_symmetric_suite(std::uint64_t seed = 0);

struct WitnessOptions {
  double residual_tol = 1e-8;
  double witness_threshold = 1e-4;
  std::size_t threads = 0;
};

/// Conjugate-symmetry residuals and projective witnesses over the grid.
VerificationReport witness_report(const StatStructure& s, const WitnessOptions& opts = {});

/// Acceptance checks of every built-in fixture plus the conjugate symmetric
/// suite and its perturbations.
VerificationReport gallery_verification(double tol_residual = 1e-8, std::size_t threads = 0);

}  // namespace statlab
