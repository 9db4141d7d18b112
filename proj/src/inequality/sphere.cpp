#include <algorithm>
#include <cmath>
#include <limits>

#include "statlab/error.hpp"
#include "statlab/inequality.hpp"
#include "statlab/parallel.hpp"

namespace statlab {

namespace {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// K_u as a symmetric matrix: (K_u)(b, c) = A(u, b, c).
Mat contract_first(const TensorValue& a, const Vec& u) {
  const std::size_t n = a.dim();
  Mat m = Mat::Zero(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (u(i) == 0.0) continue;
    for (std::size_t b = 0; b < n; ++b) {
      for (std::size_t c = 0; c < n; ++c) m(b, c) += u(i) * a(i, b, c);
    }
  }
  return m;
}

double cubic_value(const TensorValue& a, const Vec& u) {
  const Mat k = contract_first(a, u);
  return u.dot(k * u);
}

// Orthonormal basis of the complement of the unit vector u (n x (n-1)).
Mat complement_basis(const Vec& u) {
  const std::size_t n = static_cast<std::size_t>(u.size());
  Eigen::HouseholderQR<Mat> qr(u);
  const Mat q = qr.householderQ() * Mat::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  return q.rightCols(static_cast<Eigen::Index>(n - 1));
}

struct LocalResult {
  Vec u;
  double value = 0.0;
  double grad_norm = 0.0;
};

LocalResult ascend(const TensorValue& a, Vec u, const SphereOptions& opts) {
  double f = cubic_value(a, u);
  double step = opts.initial_step;
  double gnorm = 0.0;
  for (std::size_t it = 0; it < opts.max_iterations; ++it) {
    const Vec grad = 3.0 * contract_first(a, u) * u;
    const Vec tangent = grad - grad.dot(u) * u;
    gnorm = tangent.norm();
    if (gnorm <= opts.gradient_tol) break;
    bool moved = false;
    while (step > 1e-16) {
      const Vec trial = (u + step * tangent).normalized();
      const double ft = cubic_value(a, trial);
      if (ft > f) {
        u = trial;
        f = ft;
        step = std::min(2.0 * step, 1.0);
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
  }

  // Riemannian Newton on the sphere; ascent stalls in f long before the
  // gradient reaches the tolerance, Newton closes that gap quadratically.
  const std::size_t n = a.dim();
  for (int it = 0; it < 30; ++it) {
    const Mat ku = contract_first(a, u);
    const Vec grad = 3.0 * ku * u;
    const Vec tangent = grad - grad.dot(u) * u;
    gnorm = tangent.norm();
    if (gnorm <= 1e-15 || n < 2) break;
    const Mat t = complement_basis(u);
    const Mat hess = t.transpose() * (6.0 * ku - grad.dot(u) * Mat::Identity(n, n)) * t;
    Eigen::SelfAdjointEigenSolver<Mat> es(hess);
    if (es.eigenvalues().maxCoeff() >= 0.0) break;  // not near a strict local maximum
    const Vec delta = -hess.ldlt().solve(t.transpose() * grad);
    const Vec next = (u + t * delta).normalized();
    const Vec g2 = 3.0 * contract_first(a, next) * next;
    const double n2 = (g2 - g2.dot(next) * next).norm();
    if (!(n2 < gnorm)) break;
    u = next;
    f = cubic_value(a, u);
    gnorm = n2;
  }
  return {u, f, gnorm};
}

bool lex_less(const Vec& a, const Vec& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i) != b(i)) return a(i) < b(i);
  }
  return false;
}

}  // namespace

CubicMaximum max_cubic_on_sphere(const TensorValue& a, std::uint64_t seed, const SphereOptions& opts) {
  const std::size_t n = a.dim();
  CubicMaximum out;
  if (a.max_abs() == 0.0) {
    out.v.assign(n, 0.0);
    out.v[0] = 1.0;
    out.converged = true;
    return out;
  }
  std::mt19937_64 rng = chunk_rng(seed, 0);
  std::normal_distribution<double> normal(0.0, 1.0);
  bool have = false;
  LocalResult best;
  const std::size_t restarts = std::max<std::size_t>(opts.restarts, 1);
  for (std::size_t r = 0; r < restarts; ++r) {
    Vec u(n);
    do {
      for (std::size_t i = 0; i < n; ++i) u(i) = normal(rng);
    } while (u.norm() < 1e-8);
    u.normalize();
    LocalResult res = ascend(a, u, opts);
    const bool better = !have || res.value > best.value + 1e-12 ||
                        (std::abs(res.value - best.value) <= 1e-12 && lex_less(res.u, best.u));
    if (better) {
      best = std::move(res);
      have = true;
    }
  }
  out.v.assign(best.u.data(), best.u.data() + n);
  out.value = best.value;
  out.gradient_norm = best.grad_norm;
  out.converged = best.grad_norm <= opts.gradient_tol;
  return out;
}

CubicMaximum max_cubic_direction(const StatStructure& s, std::span<const double> p, std::size_t restarts,
                                 std::uint64_t seed) {
  const std::size_t n = s.dim();
  const FieldData f = evaluate_fields(s, p, 0);
  const std::vector<double> frame = coordinate_orthonormal_frame(f.g);
  SphereOptions opts;
  opts.restarts = restarts;
  CubicMaximum m = max_cubic_on_sphere(transform_covariant(f.a, frame), seed, opts);
  Vector v(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t b = 0; b < n; ++b) v[i] += frame[i * n + b] * m.v[b];
  }
  m.v = std::move(v);
  return m;
}

MaximizerChecks maximizer_checks_orthonormal(const TensorValue& a, const TensorValue& rm, std::span<const double> vin) {
  const std::size_t n = a.dim();
  Vec v(n);
  for (std::size_t i = 0; i < n; ++i) v(i) = vin[i];
  if (std::abs(v.squaredNorm() - 1.0) > 1e-8) throw Error(ErrorCode::NotUnit, "direction is not a unit vector");

  MaximizerChecks out;
  const Mat kv = contract_first(a, v);
  out.lambda1 = v.dot(kv * v);
  out.eigvec_residual = (kv * v - out.lambda1 * v).norm();

  const Mat t = complement_basis(v);
  Eigen::SelfAdjointEigenSolver<Mat> es(t.transpose() * kv * t);
  Mat basis(n, n);
  basis.col(0) = v;
  basis.rightCols(static_cast<Eigen::Index>(n - 1)) = t * es.eigenvectors();
  out.lambdas.push_back(out.lambda1);
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    out.lambdas.push_back(es.eigenvalues()(i));
    out.lambda_gaps.push_back(out.lambda1 - 2.0 * es.eigenvalues()(i));
  }

  // A(x, y, z) for vectors.
  auto a3 = [&](const Vec& x, const Vec& y, const Vec& z) { return x.dot(contract_first(a, y) * z); };
  // R(x, y) w as a vector, from the lowered frame components.
  auto r_apply = [&](const Vec& x, const Vec& y, const Vec& w) {
    Vec out_v = Vec::Zero(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const double xy = x(i) * y(j);
        if (xy == 0.0) continue;
        for (std::size_t k = 0; k < n; ++k) {
          for (std::size_t l = 0; l < n; ++l) out_v(l) += rm(i, j, k, l) * xy * w(k);
        }
      }
    }
    return out_v;
  };

  double lhs_k = 0.0, lhs_r = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec ei = Vec::Unit(n, i);
    const Mat ki = contract_first(a, ei);
    const Mat tt = ki * kv - kv * ki;
    lhs_k += a3(tt * ei, v, v) + 2.0 * a3(ei, tt * v, v);
    lhs_r -= a3(r_apply(ei, v, ei), v, v) + 2.0 * a3(ei, r_apply(ei, v, v), v);
  }
  double rhs_k = 0.0, rhs_r = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double li = out.lambdas[i];
    rhs_k += li * li * (3.0 * out.lambda1 - 2.0 * li);
    if (i > 0) {
      const Vec e = basis.col(static_cast<Eigen::Index>(i));
      const double k_i1 = e.dot(r_apply(e, v, v));
      rhs_r += (out.lambda1 - 2.0 * li) * k_i1;
    }
  }
  out.identity_k_lhs = lhs_k;
  out.identity_k_rhs = rhs_k;
  out.identity_k_residual = std::abs(lhs_k - rhs_k);
  out.identity_r_lhs = lhs_r;
  out.identity_r_rhs = rhs_r;
  out.identity_r_residual = std::abs(lhs_r - rhs_r);
  return out;
}

MaximizerChecks maximizer_checks(const StatStructure& s, std::span<const double> p, std::span<const double> v) {
  const std::size_t n = s.dim();
  const LocalGeometry geo = local_geometry(s, p);
  const CurvatureBundle c = curvature_bundle(geo);
  if (std::abs(metric_dot(geo.g(), v, v) - 1.0) > 1e-8) throw Error(ErrorCode::NotUnit, "direction is not g-unit");
  const std::vector<double> frame = coordinate_orthonormal_frame(geo.g());
  // Frame components of V: g(V, f_b).
  Vector vf(n, 0.0);
  for (std::size_t b = 0; b < n; ++b) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) vf[b] += geo.g()(i, j) * v[i] * frame[j * n + b];
    }
  }
  return maximizer_checks_orthonormal(transform_covariant(geo.a(), frame),
                                      transform_covariant(lower_curvature(c.r, geo.g()), frame), vf);
}

DeltaPhiCheck delta_phi_check(const StatStructure& s, std::span<const double> p, std::size_t planes,
                              std::uint64_t seed) {
  const std::size_t n = s.dim();
  const LocalGeometry geo = local_geometry(s, p);
  const CurvatureBundle c = curvature_bundle(geo);
  const std::vector<double> frame = coordinate_orthonormal_frame(geo.g());
  const CubicMaximum m = max_cubic_on_sphere(transform_covariant(geo.a(), frame), seed);
  const TensorValue lap = transform_covariant(rough_laplacian_a(geo), frame);
  DeltaPhiCheck out;
  out.phi = m.value;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) out.lhs += lap(i, j, k) * m.v[i] * m.v[j] * m.v[k];
    }
  }
  out.big_n = sectional_range(geo, c, planes, seed).min;
  out.rhs = (static_cast<double>(n) + 1.0) * out.big_n * out.phi + out.phi * out.phi * out.phi;
  out.slack = out.lhs - out.rhs;
  return out;
}

}  // namespace statlab
