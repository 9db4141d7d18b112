#include "statlab/connection.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "statlab/error.hpp"

namespace statlab {

namespace {

using Mat = Eigen::MatrixXd;

TensorValue gamma_shape(std::size_t n) {
  return TensorValue(n, {Variance::Up, Variance::Down, Variance::Down}, {{1, 2, false}});
}

Mat matrix_of(const TensorValue& t) {
  const std::size_t n = t.dim();
  Mat m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m(i, j) = t(i, j);
  }
  return m;
}

Mat slice_of(const TensorValue& t, std::size_t k) {
  const std::size_t n = t.dim();
  Mat m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m(i, j) = t(k, i, j);
  }
  return m;
}

Mat slice_of(const TensorValue& t, std::size_t k, std::size_t l) {
  const std::size_t n = t.dim();
  Mat m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m(i, j) = t(k, l, i, j);
  }
  return m;
}

// dgamma(k, l, i, j) = d_k Gamma^l_ij from g^-1, dg and d2g.
TensorValue christoffel_derivative(const FieldData& f) {
  const std::size_t n = f.n;
  TensorValue out(n, {Variance::Down, Variance::Up, Variance::Down, Variance::Down}, {{2, 3, false}});
  const Mat ginv = matrix_of(f.g_inv);
  for (std::size_t k = 0; k < n; ++k) {
    const Mat dginv = -ginv * slice_of(f.dg, k) * ginv;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t l = 0; l < n; ++l) {
          double sum = 0.0;
          for (std::size_t m = 0; m < n; ++m) {
            const double s = f.dg(i, m, j) + f.dg(j, m, i) - f.dg(m, i, j);
            const double ds = f.d2g(k, i, m, j) + f.d2g(k, j, m, i) - f.d2g(k, m, i, j);
            sum += dginv(l, m) * s + ginv(l, m) * ds;
          }
          out(k, l, i, j) = 0.5 * sum;
        }
      }
    }
  }
  return out;
}

TensorValue covariant_derivative_a(const FieldData& f, const TensorValue& gamma) {
  const std::size_t n = f.n;
  TensorValue out = TensorValue::covariant(n, 4, {{2, 3, false}, {1, 2, false}});
  for (std::size_t w = 0; w < n; ++w) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) {
          double v = f.da(w, i, j, k);
          for (std::size_t c = 0; c < n; ++c) {
            v -= gamma(c, w, i) * f.a(c, j, k) + gamma(c, w, j) * f.a(i, c, k) +
                 gamma(c, w, k) * f.a(i, j, c);
          }
          out(w, i, j, k) = v;
        }
      }
    }
  }
  return out;
}

TensorValue second_covariant_derivative_a(const FieldData& f, const TensorValue& gamma,
                                          const TensorValue& dgamma, const TensorValue& nabla_a) {
  const std::size_t n = f.n;
  TensorValue out = TensorValue::covariant(n, 5, {{2, 3, false}, {3, 4, false}});
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          for (std::size_t k = 0; k < n; ++k) {
            // d_a of the components of nabla-hat A
            double v = f.d2a(a, b, i, j, k);
            for (std::size_t c = 0; c < n; ++c) {
              v -= dgamma(a, c, b, i) * f.a(c, j, k) + gamma(c, b, i) * f.da(a, c, j, k);
              v -= dgamma(a, c, b, j) * f.a(i, c, k) + gamma(c, b, j) * f.da(a, i, c, k);
              v -= dgamma(a, c, b, k) * f.a(i, j, c) + gamma(c, b, k) * f.da(a, i, j, c);
            }
            for (std::size_t c = 0; c < n; ++c) {
              v -= gamma(c, a, b) * nabla_a(c, i, j, k) + gamma(c, a, i) * nabla_a(b, c, j, k) +
                   gamma(c, a, j) * nabla_a(b, i, c, k) + gamma(c, a, k) * nabla_a(b, i, j, c);
            }
            out(a, b, i, j, k) = v;
          }
        }
      }
    }
  }
  return out;
}

}  // namespace

TensorValue christoffel_from(const FieldData& f) {
  const std::size_t n = f.n;
  TensorValue gamma = gamma_shape(n);
  for (std::size_t l = 0; l < n; ++l) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        double sum = 0.0;
        for (std::size_t m = 0; m < n; ++m) {
          sum += f.g_inv(l, m) * (f.dg(i, m, j) + f.dg(j, m, i) - f.dg(m, i, j));
        }
        gamma(l, i, j) = 0.5 * sum;
        gamma(l, j, i) = 0.5 * sum;
      }
    }
  }
  return gamma;
}

TensorValue raise_cubic(const TensorValue& a, const TensorValue& g_inv) {
  const std::size_t n = a.dim();
  TensorValue k = gamma_shape(n);
  for (std::size_t l = 0; l < n; ++l) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        double sum = 0.0;
        for (std::size_t m = 0; m < n; ++m) sum += g_inv(l, m) * a(m, i, j);
        k(l, i, j) = sum;
      }
    }
  }
  return k;
}

LocalGeometry local_geometry(const StatStructure& s, std::span<const double> p) {
  LocalGeometry geo;
  geo.fields = evaluate_fields(s, p, 2);
  geo.gamma = christoffel_from(geo.fields);
  geo.dgamma = christoffel_derivative(geo.fields);
  geo.k = raise_cubic(geo.fields.a, geo.fields.g_inv);
  geo.nabla_a = covariant_derivative_a(geo.fields, geo.gamma);
  geo.nabla2_a = second_covariant_derivative_a(geo.fields, geo.gamma, geo.dgamma, geo.nabla_a);
  return geo;
}

ConnectionCoeffs christoffel_at(const StatStructure& s, std::span<const double> p) {
  return {christoffel_from(evaluate_fields(s, p, 1))};
}

DifferenceTensor difference_tensor_at(const StatStructure& s, std::span<const double> p) {
  FieldData f = evaluate_fields(s, p, 0);
  TensorValue k = raise_cubic(f.a, f.g_inv);
  return {std::move(k), std::move(f.a)};
}

ConnectionTriple statistical_connections_at(const StatStructure& s, std::span<const double> p) {
  const FieldData f = evaluate_fields(s, p, 1);
  TensorValue hat = christoffel_from(f);
  const TensorValue k = raise_cubic(f.a, f.g_inv);
  TensorValue primal = hat + k;
  TensorValue dual = hat - k;
  return {{std::move(hat)}, {std::move(primal)}, {std::move(dual)}};
}

StructureResiduals structure_residuals(const LocalGeometry& geo) {
  const std::size_t n = geo.dim();
  const auto& f = geo.fields;
  const TensorValue primal = geo.gamma + geo.k;
  // (nabla_i g)_jk
  TensorValue ng = TensorValue::covariant(n, 3);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        double v = f.dg(i, j, k);
        for (std::size_t l = 0; l < n; ++l) v -= primal(l, i, j) * f.g(l, k) + primal(l, i, k) * f.g(j, l);
        ng(i, j, k) = v;
      }
    }
  }
  StructureResiduals r;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) r.codazzi = std::max(r.codazzi, std::abs(ng(i, j, k) - ng(j, i, k)));
    }
    double trace = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) trace += f.g_inv(j, k) * f.a(i, j, k);
    }
    r.trace_free = std::max(r.trace_free, std::abs(trace));
  }
  return r;
}

StructureResiduals structure_residuals(const StatStructure& s, std::span<const double> p) {
  LocalGeometry geo;
  geo.fields = evaluate_fields(s, p, 1);
  geo.gamma = christoffel_from(geo.fields);
  geo.k = raise_cubic(geo.fields.a, geo.fields.g_inv);
  return structure_residuals(geo);
}

double metric_compatibility_residual(const LocalGeometry& geo) {
  const std::size_t n = geo.dim();
  const auto& f = geo.fields;
  double worst = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        double v = f.dg(k, i, j);
        for (std::size_t l = 0; l < n; ++l) v -= geo.gamma(l, k, i) * f.g(l, j) + geo.gamma(l, k, j) * f.g(i, l);
        worst = std::max(worst, std::abs(v));
      }
    }
  }
  return worst;
}

double duality_residual(const LocalGeometry& geo) {
  const std::size_t n = geo.dim();
  const auto& f = geo.fields;
  const TensorValue primal = geo.gamma + geo.k;
  const TensorValue dual = geo.gamma - geo.k;
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        double v = -f.dg(i, j, k);
        for (std::size_t l = 0; l < n; ++l) v += primal(l, i, j) * f.g(l, k) + dual(l, i, k) * f.g(j, l);
        worst = std::max(worst, std::abs(v));
      }
    }
  }
  return worst;
}

double k_trace_residual(const LocalGeometry& geo) {
  const std::size_t n = geo.dim();
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double tr = 0.0;
    for (std::size_t j = 0; j < n; ++j) tr += geo.k(j, i, j);
    worst = std::max(worst, std::abs(tr));
  }
  return worst;
}

TensorValue nabla_hat_a_at(const StatStructure& s, std::span<const double> p) {
  const FieldData f = evaluate_fields(s, p, 1);
  return covariant_derivative_a(f, christoffel_from(f));
}

TensorValue rough_laplacian_a(const LocalGeometry& geo) {
  const std::size_t n = geo.dim();
  TensorValue out = TensorValue::covariant(n, 3, {{0, 1, false}, {1, 2, false}});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        double v = 0.0;
        for (std::size_t a = 0; a < n; ++a) {
          for (std::size_t b = 0; b < n; ++b) v += geo.g_inv()(a, b) * geo.nabla2_a(a, b, i, j, k);
        }
        out(i, j, k) = v;
      }
    }
  }
  return out;
}

double laplacian_scalar_at(const LocalGeometry& geo, const Jet& f) {
  const std::size_t n = geo.dim();
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double v = f.hess(i, j);
      for (std::size_t k = 0; k < n; ++k) v -= geo.gamma(k, i, j) * f.grad(k);
      sum += geo.g_inv()(i, j) * v;
    }
  }
  return sum;
}

double laplacian_scalar_at(const StatStructure& s, const expr::Expr& f, std::span<const double> p) {
  const std::size_t n = s.dim();
  LocalGeometry geo;
  geo.fields = evaluate_fields(s, p, 1);
  geo.gamma = christoffel_from(geo.fields);
  Jet jet(n);
  jet.value() = expr::eval(f, p);
  for (std::size_t i = 0; i < n; ++i) {
    const expr::Expr di = expr::differentiate(f, i);
    jet.grad(i) = expr::eval(di, p);
    for (std::size_t j = 0; j < n; ++j) jet.hess(i, j) = expr::eval(expr::differentiate(di, j), p);
  }
  return laplacian_scalar_at(geo, jet);
}

Jet cubic_norm_jet(const FieldData& f) {
  if (f.order < 2) throw Error(ErrorCode::PreconditionViolated, "cubic_norm_jet needs second derivatives");
  const std::size_t n = f.n;
  const Mat ginv = matrix_of(f.g_inv);

  std::vector<Mat> dginv(n);
  std::vector<Mat> ginv_dg(n);  // G dg_k
  for (std::size_t k = 0; k < n; ++k) {
    ginv_dg[k] = ginv * slice_of(f.dg, k);
    dginv[k] = -ginv_dg[k] * ginv;
  }
  std::vector<Jet> G(n * n, Jet(n));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      Jet& j = G[a * n + b];
      j.value() = ginv(a, b);
      for (std::size_t k = 0; k < n; ++k) j.grad(k) = dginv[k](a, b);
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t l = 0; l < n; ++l) {
      const Mat h = ginv_dg[k] * ginv_dg[l] * ginv + ginv_dg[l] * ginv_dg[k] * ginv -
                    ginv * slice_of(f.d2g, k, l) * ginv;
      for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) G[a * n + b].hess(k, l) = h(a, b);
      }
    }
  }

  const std::size_t n3 = n * n * n;
  std::vector<Jet> A(n3, Jet(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        Jet& x = A[(i * n + j) * n + k];
        x.value() = f.a(i, j, k);
        for (std::size_t l = 0; l < n; ++l) {
          x.grad(l) = f.da(l, i, j, k);
          for (std::size_t m = 0; m < n; ++m) x.hess(l, m) = f.d2a(l, m, i, j, k);
        }
      }
    }
  }

  // Raise the three slots one at a time, then contract with A.
  auto raise = [&](const std::vector<Jet>& t, std::size_t slot) {
    std::vector<Jet> out(n3, Jet(n));
    const std::size_t stride = slot == 0 ? n * n : slot == 1 ? n : 1;
    for (std::size_t flat = 0; flat < n3; ++flat) {
      const std::size_t a = (flat / stride) % n;
      const std::size_t base = flat - a * stride;
      for (std::size_t b = 0; b < n; ++b) out[flat].add_product(G[a * n + b], t[base + b * stride]);
    }
    return out;
  };
  std::vector<Jet> raised = raise(raise(raise(A, 0), 1), 2);
  Jet psi(n);
  for (std::size_t flat = 0; flat < n3; ++flat) psi.add_product(raised[flat], A[flat]);
  return psi;
}

}  // namespace statlab
