#include "statlab/curvature.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "statlab/error.hpp"

namespace statlab {

namespace {

TensorValue curvature_shape(std::size_t n) {
  return TensorValue(n, {Variance::Down, Variance::Down, Variance::Down, Variance::Up},
                     {{0, 1, true}});
}

TensorValue lowered_shape(std::size_t n) { return TensorValue::covariant(n, 4, {{0, 1, true}}); }

// (nabla-hat_i K)^l_jk stored as (i, l, j, k).
TensorValue nabla_hat_k(const LocalGeometry& geo) {
  const std::size_t n = geo.dim();
  TensorValue out(n, {Variance::Down, Variance::Up, Variance::Down, Variance::Down});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t l = 0; l < n; ++l) {
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) {
          double v = 0.0;
          for (std::size_t m = 0; m < n; ++m) v += geo.g_inv()(l, m) * geo.nabla_a(i, m, j, k);
          out(i, l, j, k) = v;
        }
      }
    }
  }
  return out;
}

// R-hat + sign * ((nabla-hat K) terms) + [K, K].
TensorValue decomposed_curvature(const TensorValue& r_hat, const TensorValue& nk,
                                 const TensorValue& bracket, double sign) {
  const std::size_t n = r_hat.dim();
  TensorValue r = curvature_shape(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t l = 0; l < n; ++l) {
          r(i, j, k, l) = r_hat(i, j, k, l) + sign * (nk(i, l, j, k) - nk(j, l, i, k)) +
                          bracket(i, j, k, l);
        }
      }
    }
  }
  return r;
}

Eigen::MatrixXd sym_matrix(const TensorValue& t) {
  const std::size_t n = t.dim();
  Eigen::MatrixXd m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m(i, j) = 0.5 * (t(i, j) + t(j, i));
  }
  return m;
}

Eigen::VectorXd relative_eigenvalues(const TensorValue& t, const TensorValue& g) {
  const std::size_t n = t.dim();
  Eigen::MatrixXd gm(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) gm(i, j) = g(i, j);
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(sym_matrix(t), gm, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

}  // namespace

TensorValue riemann_from_connection(const TensorValue& gamma, const TensorValue& dgamma) {
  const std::size_t n = gamma.dim();
  TensorValue r = curvature_shape(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t l = 0; l < n; ++l) {
          double v = dgamma(i, l, j, k) - dgamma(j, l, i, k);
          for (std::size_t m = 0; m < n; ++m) {
            v += gamma(m, j, k) * gamma(l, i, m) - gamma(m, i, k) * gamma(l, j, m);
          }
          r(i, j, k, l) = v;
        }
      }
    }
  }
  return r;
}

TensorValue statistical_curvature_direct(const LocalGeometry& geo, double sign) {
  const std::size_t n = geo.dim();
  const auto& f = geo.fields;
  TensorValue gamma = geo.gamma;
  TensorValue dgamma = geo.dgamma;
  for (std::size_t l = 0; l < n; ++l) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) gamma(l, i, j) += sign * geo.k(l, i, j);
    }
  }
  for (std::size_t q = 0; q < n; ++q) {
    // d_q g^lm = -g^la d_q g_ab g^bm
    std::vector<double> dginv(n * n, 0.0);
    for (std::size_t l = 0; l < n; ++l) {
      for (std::size_t m = 0; m < n; ++m) {
        double v = 0.0;
        for (std::size_t a = 0; a < n; ++a) {
          for (std::size_t b = 0; b < n; ++b) v -= f.g_inv(l, a) * f.dg(q, a, b) * f.g_inv(b, m);
        }
        dginv[l * n + m] = v;
      }
    }
    for (std::size_t l = 0; l < n; ++l) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          double dk = 0.0;
          for (std::size_t m = 0; m < n; ++m) dk += dginv[l * n + m] * f.a(m, i, j) + f.g_inv(l, m) * f.da(q, m, i, j);
          dgamma(q, l, i, j) += sign * dk;
        }
      }
    }
  }
  return riemann_from_connection(gamma, dgamma);
}

TensorValue k_bracket(const TensorValue& k) {
  const std::size_t n = k.dim();
  TensorValue out = curvature_shape(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t l = 0; l < n; ++l) {
          double v = 0.0;
          for (std::size_t m = 0; m < n; ++m) v += k(m, j, c) * k(l, i, m) - k(m, i, c) * k(l, j, m);
          out(i, j, c, l) = v;
        }
      }
    }
  }
  return out;
}

TensorValue ricci(const TensorValue& r) {
  const std::size_t n = r.dim();
  TensorValue ric = TensorValue::covariant(n, 2);
  for (std::size_t y = 0; y < n; ++y) {
    for (std::size_t z = 0; z < n; ++z) {
      double v = 0.0;
      for (std::size_t i = 0; i < n; ++i) v += r(i, y, z, i);
      ric(y, z) = v;
    }
  }
  return ric;
}

double scalar_curvature(const TensorValue& ric, const TensorValue& g_inv) {
  const std::size_t n = ric.dim();
  double v = 0.0;
  for (std::size_t y = 0; y < n; ++y) {
    for (std::size_t z = 0; z < n; ++z) v += g_inv(y, z) * ric(y, z);
  }
  return v;
}

TensorValue lower_curvature(const TensorValue& r, const TensorValue& g) {
  const std::size_t n = r.dim();
  TensorValue out = lowered_shape(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t w = 0; w < n; ++w) {
          double v = 0.0;
          for (std::size_t l = 0; l < n; ++l) v += r(i, j, k, l) * g(l, w);
          out(i, j, k, w) = v;
        }
      }
    }
  }
  return out;
}

CurvatureBundle curvature_bundle(const LocalGeometry& geo) {
  const std::size_t n = geo.dim();
  CurvatureBundle c;
  c.r_hat = riemann_from_connection(geo.gamma, geo.dgamma);
  const TensorValue nk = nabla_hat_k(geo);
  const TensorValue bracket = k_bracket(geo.k);
  c.r = decomposed_curvature(c.r_hat, nk, bracket, 1.0);
  c.r_bar = decomposed_curvature(c.r_hat, nk, bracket, -1.0);

  // g(R-bar(X,Y)W, Z) = -g(R(X,Y)Z, W)
  const TensorValue rm = lower_curvature(c.r, geo.g());
  TensorValue rbar_low = lowered_shape(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t w = 0; w < n; ++w) {
        for (std::size_t z = 0; z < n; ++z) rbar_low(i, j, w, z) = -rm(i, j, z, w);
      }
    }
  }
  const TensorValue rbar_dual = raise_last(rbar_low, geo.g_inv());
  c.dual_route_residual = max_abs_diff(c.r_bar, rbar_dual);

  c.r_cal = 0.5 * (c.r + c.r_bar);
  c.ric = ricci(c.r);
  c.ric_bar = ricci(c.r_bar);
  c.ric_hat = ricci(c.r_hat);
  c.rho = scalar_curvature(c.ric, geo.g_inv());
  c.rho_bar = scalar_curvature(c.ric_bar, geo.g_inv());
  c.rho_hat = scalar_curvature(c.ric_hat, geo.g_inv());
  return c;
}

CurvatureBundle curvature_bundle_at(const StatStructure& s, std::span<const double> p) {
  return curvature_bundle(local_geometry(s, p));
}

double sectional_from(const TensorValue& r_cal_lowered, const TensorValue& g, const Plane& plane) {
  std::vector<Vector> e;
  try {
    e = orthonormalize(g, {plane.u, plane.v});
  } catch (const Error& err) {
    if (err.code() == ErrorCode::DegenerateInput) throw Error(ErrorCode::DegeneratePlane, "plane vectors are linearly dependent");
    throw;
  }
  const std::size_t n = g.dim();
  const Vector& e1 = e[0];
  const Vector& e2 = e[1];
  double v = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const double ab = e1[a] * e2[b];
      if (ab == 0.0) continue;
      for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t d = 0; d < n; ++d) v += r_cal_lowered(a, b, c, d) * ab * e2[c] * e1[d];
      }
    }
  }
  return v;
}

double sectional_nabla_at(const StatStructure& s, std::span<const double> p, const Plane& plane) {
  const LocalGeometry geo = local_geometry(s, p);
  const CurvatureBundle c = curvature_bundle(geo);
  return sectional_from(lower_curvature(c.r_cal, geo.g()), geo.g(), plane);
}

ConjugateSymmetryReport conjugate_symmetry_report(const LocalGeometry& geo, const CurvatureBundle& c) {
  const std::size_t n = geo.dim();
  ConjugateSymmetryReport rep;
  rep.r_minus_rbar = max_abs_diff(c.r, c.r_bar);
  for (std::size_t w = 0; w < n; ++w) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) {
          rep.nabla_hat_a_asym =
              std::max(rep.nabla_hat_a_asym, std::abs(geo.nabla_a(w, i, j, k) - geo.nabla_a(i, w, j, k)));
        }
      }
    }
  }
  const TensorValue rm = lower_curvature(c.r, geo.g());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t z = 0; z < n; ++z) {
        for (std::size_t w = 0; w < n; ++w) rep.zw_skew = std::max(rep.zw_skew, std::abs(rm(i, j, z, w) + rm(i, j, w, z)));
      }
    }
  }
  return rep;
}

ConjugateSymmetryReport conjugate_symmetry_report(const StatStructure& s, std::span<const double> p) {
  const LocalGeometry geo = local_geometry(s, p);
  return conjugate_symmetry_report(geo, curvature_bundle(geo));
}

double min_relative_eigenvalue(const TensorValue& t, const TensorValue& g) {
  return relative_eigenvalues(t, g).minCoeff();
}

double max_relative_eigenvalue(const TensorValue& t, const TensorValue& g) {
  return relative_eigenvalues(t, g).maxCoeff();
}

IdentityResiduals identity_residuals(const LocalGeometry& geo, const CurvatureBundle& c, double trace_tol) {
  const std::size_t n = geo.dim();
  const StructureResiduals sr = structure_residuals(geo);
  if (sr.trace_free > trace_tol) {
    throw Error(ErrorCode::PreconditionViolated,
                "structure is not trace-free at the point (residual " + std::to_string(sr.trace_free) + ")");
  }
  IdentityResiduals out;
  const TensorValue bracket = k_bracket(geo.k);
  const TensorValue lhs10 = c.r + c.r_bar;
  const TensorValue rhs10 = 2.0 * (c.r_hat + bracket);
  out.eq10 = max_abs_diff(lhs10, rhs10);

  for (std::size_t y = 0; y < n; ++y) {
    for (std::size_t z = 0; z < n; ++z) {
      double kk = 0.0;  // tr(K_Y K_Z)
      for (std::size_t b = 0; b < n; ++b) {
        for (std::size_t m = 0; m < n; ++m) kk += geo.k(b, y, m) * geo.k(m, z, b);
      }
      const double lhs = c.ric(y, z) + c.ric_bar(y, z);
      const double rhs = 2.0 * c.ric_hat(y, z) - 2.0 * kk;
      out.eq12 = std::max(out.eq12, std::abs(lhs - rhs));
    }
  }

  const double norm_a = metric_inner(geo.a(), geo.a(), geo.g_inv());
  out.eq17 = std::abs(c.rho_hat - (c.rho + norm_a));
  out.eq15_gap = min_relative_eigenvalue(c.ric_hat - c.ric, geo.g());
  return out;
}

IdentityResiduals identity_residuals(const StatStructure& s, std::span<const double> p, double trace_tol) {
  const LocalGeometry geo = local_geometry(s, p);
  return identity_residuals(geo, curvature_bundle(geo), trace_tol);
}

ProjectiveWitness projective_witness(const TensorValue& r, const TensorValue& g) {
  const std::size_t n = r.dim();
  if (n < 3) throw Error(ErrorCode::PreconditionViolated, "projective witness needs dimension >= 3");
  const std::vector<double> frame = coordinate_orthonormal_frame(g);
  const TensorValue rm = transform_covariant(lower_curvature(r, g), frame);
  ProjectiveWitness w;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      for (std::size_t l = 0; l < n; ++l) {
        if (l == i || l == j) continue;
        const double v = rm(i, j, j, l);
        w.components.push_back({i, j, l, v});
        w.max_abs = std::max(w.max_abs, std::abs(v));
      }
    }
  }
  return w;
}

ProjectiveWitness projective_witness_at(const StatStructure& s, std::span<const double> p) {
  if (s.dim() < 3) throw Error(ErrorCode::PreconditionViolated, "projective witness needs dimension >= 3");
  const LocalGeometry geo = local_geometry(s, p);
  return projective_witness(curvature_bundle(geo).r, geo.g());
}

double bianchi_residual(const TensorValue& r) {
  const std::size_t n = r.dim();
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t l = 0; l < n; ++l) {
          worst = std::max(worst, std::abs(r(i, j, k, l) + r(j, k, i, l) + r(k, i, j, l)));
        }
      }
    }
  }
  return worst;
}

double antisymmetry_residual(const TensorValue& r) {
  const std::size_t n = r.dim();
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t l = 0; l < n; ++l) worst = std::max(worst, std::abs(r(i, j, k, l) + r(j, i, k, l)));
      }
    }
  }
  return worst;
}

}  // namespace statlab
