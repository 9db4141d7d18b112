#include <algorithm>
#include <cmath>
#include <limits>

#include "statlab/error.hpp"
#include "statlab/inequality.hpp"
#include "statlab/kernels.hpp"
#include "statlab/parallel.hpp"

namespace statlab {

namespace {

struct PlanePair {
  Vector u;
  Vector v;
};

double dot(const Vector& a, const Vector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Euclidean Gram-Schmidt; false when the pair is (numerically) dependent.
bool orthonormal_pair(Vector& u, Vector& v) {
  const double nu = std::sqrt(dot(u, u));
  if (!(nu > 1e-12)) return false;
  for (double& x : u) x /= nu;
  const double c = dot(u, v);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * u[i];
  const double nv = std::sqrt(dot(v, v));
  if (!(nv > 1e-12)) return false;
  for (double& x : v) x /= nv;
  return true;
}

// rm(u, v, v, u) in an orthonormal frame.
double plane_value(const TensorValue& rm, const Vector& u, const Vector& v) {
  const std::size_t n = u.size();
  double s = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const double ab = u[a] * v[b];
      if (ab == 0.0) continue;
      for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t d = 0; d < n; ++d) s += rm(a, b, c, d) * ab * v[c] * u[d];
      }
    }
  }
  return s;
}

// Local ascent (direction +1) or descent (-1) of the plane value over
// orthonormal pairs, with step doubling/halving.
double refine(const TensorValue& rm, PlanePair start, double value, double direction) {
  const std::size_t n = start.u.size();
  PlanePair cur = std::move(start);
  double best = value;
  double step = 0.1;
  for (int it = 0; it < 400 && step > 1e-14; ++it) {
    Vector gu(n, 0.0), gv(n, 0.0);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = 0; q < n; ++q) {
          for (std::size_t r = 0; r < n; ++r) {
            gu[a] += rm(a, p, q, r) * cur.v[p] * cur.v[q] * cur.u[r] + rm(r, p, q, a) * cur.u[r] * cur.v[p] * cur.v[q];
            gv[a] += rm(r, a, q, p) * cur.u[r] * cur.v[q] * cur.u[p] + rm(r, q, a, p) * cur.u[r] * cur.v[q] * cur.u[p];
          }
        }
      }
    }
    PlanePair trial{cur.u, cur.v};
    for (std::size_t a = 0; a < n; ++a) {
      trial.u[a] += direction * step * gu[a];
      trial.v[a] += direction * step * gv[a];
    }
    if (!orthonormal_pair(trial.u, trial.v)) {
      step *= 0.5;
      continue;
    }
    const double val = plane_value(rm, trial.u, trial.v);
    if (direction * (val - best) > 0.0) {
      best = val;
      cur = std::move(trial);
      step *= 2.0;
    } else {
      step *= 0.5;
    }
  }
  return best;
}

}  // namespace

SectionalRange sectional_range(const LocalGeometry& geo, const CurvatureBundle& c, std::size_t random_planes,
                               std::uint64_t seed) {
  const std::size_t n = geo.dim();
  const TensorValue rm = transform_covariant(lower_curvature(c.r_cal, geo.g()), coordinate_orthonormal_frame(geo.g()));

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) pairs.emplace_back(a, b);
  }
  const std::size_t m = pairs.size();
  std::vector<double> q(m * m);
  for (std::size_t p = 0; p < m; ++p) {
    for (std::size_t r = 0; r < m; ++r) q[p * m + r] = rm(pairs[p].first, pairs[p].second, pairs[r].first, pairs[r].second);
  }

  // Planes: coordinate planes first, then random ones.
  const std::size_t count = m + random_planes;
  std::vector<PlanePair> planes;
  planes.reserve(count);
  for (const auto& [a, b] : pairs) {
    Vector u(n, 0.0), v(n, 0.0);
    u[a] = 1.0;
    v[b] = 1.0;
    planes.push_back({std::move(u), std::move(v)});
  }
  std::mt19937_64 rng = chunk_rng(seed, 0);
  std::normal_distribution<double> normal(0.0, 1.0);
  while (planes.size() < count) {
    Vector u(n), v(n);
    for (auto& x : u) x = normal(rng);
    for (auto& x : v) x = normal(rng);
    if (orthonormal_pair(u, v)) planes.push_back({std::move(u), std::move(v)});
  }

  std::vector<double> biv(m * count);
  for (std::size_t s = 0; s < count; ++s) {
    for (std::size_t p = 0; p < m; ++p) {
      const auto [a, b] = pairs[p];
      biv[p * count + s] = planes[s].u[a] * planes[s].v[b] - planes[s].u[b] * planes[s].v[a];
    }
  }
  std::vector<double> values(count);
  kernels::bivector_form_batch(m, q.data(), count, biv.data(), values.data());

  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const std::size_t lo_idx = static_cast<std::size_t>(lo_it - values.begin());
  const std::size_t hi_idx = static_cast<std::size_t>(hi_it - values.begin());
  SectionalRange out;
  out.planes = count;
  out.min = std::min(*lo_it, refine(rm, planes[lo_idx], *lo_it, -1.0));
  out.max = std::max(*hi_it, refine(rm, planes[hi_idx], *hi_it, 1.0));
  return out;
}

EmpiricalPinch empirical_pinch(const StatStructure& s, std::size_t total_planes, std::uint64_t seed,
                               std::size_t threads) {
  const std::vector<Point> points = s.chart().grid_points();
  const std::size_t per_point = (total_planes + points.size() - 1) / points.size();
  const auto ranges = parallel_map(points.size(), threads, [&](std::size_t i) {
    const LocalGeometry geo = local_geometry(s, points[i]);
    return sectional_range(geo, curvature_bundle(geo), per_point, splitmix64(seed + i));
  });
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  EmpiricalPinch out;
  for (const auto& r : ranges) {
    lo = std::min(lo, r.min);
    hi = std::max(hi, r.max);
    out.planes += r.planes;
  }
  out.points = points.size();
  out.pinch = CurvaturePinch::from_h1_h2(s.dim(), hi, lo);
  return out;
}

}  // namespace statlab
