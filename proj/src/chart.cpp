#include "statlab/chart.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <string>

#include "statlab/error.hpp"

namespace statlab {

using expr::Expr;

PairKey canonical(PairKey k) noexcept {
  if (k[0] > k[1]) std::swap(k[0], k[1]);
  return k;
}

TripleKey canonical(TripleKey k) noexcept {
  std::sort(k.begin(), k.end());
  return k;
}

// ---------------------------------------------------------------------------
// Chart

Chart::Chart(std::size_t n, std::vector<double> lo, std::vector<double> hi,
             std::vector<std::size_t> grid)
    : n_(n), lo_(std::move(lo)), hi_(std::move(hi)), grid_(std::move(grid)) {
  if (n_ < 2) throw Error(ErrorCode::InvalidSpec, "chart dimension must be at least 2");
  if (n_ > expr::kMaxCoordinates) throw Error(ErrorCode::InvalidSpec, "chart dimension too large");
  if (lo_.size() != n_ || hi_.size() != n_ || grid_.size() != n_) {
    throw Error(ErrorCode::InvalidSpec, "domain and grid must have one entry per coordinate");
  }
  for (std::size_t i = 0; i < n_; ++i) {
    if (!(lo_[i] < hi_[i])) {
      throw Error(ErrorCode::InvalidSpec, "empty domain interval on axis " + std::to_string(i + 1));
    }
    if (grid_[i] < 2) {
      throw Error(ErrorCode::InvalidSpec, "grid needs at least 2 samples per axis");
    }
  }
}

Chart::Chart(std::size_t n, std::vector<double> lo, std::vector<double> hi, std::size_t grid)
    : Chart(n, std::move(lo), std::move(hi), std::vector<std::size_t>(n, grid)) {}

bool Chart::contains(std::span<const double> p) const noexcept {
  if (p.size() != n_) return false;
  for (std::size_t i = 0; i < n_; ++i) {
    if (p[i] < lo_[i] || p[i] > hi_[i]) return false;
  }
  return true;
}

std::vector<Point> Chart::grid_points() const {
  std::size_t total = 1;
  for (const auto g : grid_) total *= g;
  std::vector<Point> points;
  points.reserve(total);
  std::vector<std::size_t> idx(n_, 0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    Point p(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      const double t = static_cast<double>(idx[i]) / static_cast<double>(grid_[i] - 1);
      p[i] = idx[i] + 1 == grid_[i] ? hi_[i] : lo_[i] + t * (hi_[i] - lo_[i]);
    }
    points.push_back(std::move(p));
    for (std::size_t i = n_; i-- > 0;) {
      if (++idx[i] < grid_[i]) break;
      idx[i] = 0;
    }
  }
  return points;
}

Chart Chart::with_grid(std::size_t per_axis) const { return Chart(n_, lo_, hi_, per_axis); }

// ---------------------------------------------------------------------------
// StatStructure

struct StatStructure::Impl {
  Chart chart;
  std::map<PairKey, Expr> metric;
  std::map<TripleKey, Expr> cubic;
  std::vector<Expr> g;    // n^2
  std::vector<Expr> gd;   // n^3: (k, i, j)
  std::vector<Expr> gdd;  // n^4: (k, l, i, j)
  std::vector<Expr> a;    // n^3
  std::vector<Expr> ad;   // n^4: (l, i, j, k)
  std::vector<Expr> add;  // n^5: (l, m, i, j, k)
  bool cubic_zero = true;
};

namespace {

void check_expression(const Expr& e, std::size_t n, const std::string& where) {
  if (n < expr::kMaxCoordinates && (e.dependencies() >> n) != 0) {
    throw Error(ErrorCode::InvalidSpec, where + " references a coordinate beyond x" + std::to_string(n));
  }
}

}  // namespace

StatStructure::StatStructure(Chart chart, const std::map<PairKey, Expr>& metric,
                             const std::map<TripleKey, Expr>& cubic) {
  const std::size_t n = chart.dim();
  auto impl = std::make_shared<Impl>(Impl{std::move(chart), {}, {}, {}, {}, {}, {}, {}, {}, true});

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      impl->metric[{i, j}] = Expr::literal(i == j ? 1.0 : 0.0);
      for (std::size_t k = j; k < n; ++k) impl->cubic[{i, j, k}] = Expr::literal(0.0);
    }
  }
  for (const auto& [key, e] : metric) {
    if (key[0] >= n || key[1] >= n) throw Error(ErrorCode::InvalidSpec, "metric index out of range");
    check_expression(e, n, "metric component");
    impl->metric[canonical(key)] = e;
  }
  for (const auto& [key, e] : cubic) {
    if (key[0] >= n || key[1] >= n || key[2] >= n) {
      throw Error(ErrorCode::InvalidSpec, "cubic form index out of range");
    }
    check_expression(e, n, "cubic form component");
    impl->cubic[canonical(key)] = e;
  }

  const std::size_t n2 = n * n;
  const std::size_t n3 = n2 * n;
  impl->g.resize(n2);
  impl->gd.resize(n3);
  impl->gdd.resize(n3 * n);
  impl->a.resize(n3);
  impl->ad.resize(n3 * n);
  impl->add.resize(n3 * n2);

  for (const auto& [key, e] : impl->metric) {
    const auto [i, j] = key;
    std::vector<Expr> first(n);
    for (std::size_t k = 0; k < n; ++k) first[k] = expr::differentiate(e, k);
    for (const auto& [x, y] : {std::pair{i, j}, std::pair{j, i}}) {
      impl->g[x * n + y] = e;
      for (std::size_t k = 0; k < n; ++k) impl->gd[(k * n + x) * n + y] = first[k];
    }
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t l = k; l < n; ++l) {
        const Expr second = expr::differentiate(first[k], l);
        for (const auto& [x, y] : {std::pair{i, j}, std::pair{j, i}}) {
          impl->gdd[((k * n + l) * n + x) * n + y] = second;
          impl->gdd[((l * n + k) * n + x) * n + y] = second;
        }
      }
    }
  }

  for (const auto& [key, e] : impl->cubic) {
    if (!e.is_literal(0.0)) impl->cubic_zero = false;
    std::array<std::size_t, 3> perm = key;
    std::vector<Expr> first(n);
    for (std::size_t l = 0; l < n; ++l) first[l] = expr::differentiate(e, l);
    std::vector<Expr> second(n2);
    for (std::size_t l = 0; l < n; ++l) {
      for (std::size_t m = l; m < n; ++m) {
        second[l * n + m] = expr::differentiate(first[l], m);
        second[m * n + l] = second[l * n + m];
      }
    }
    do {
      const std::size_t off = (perm[0] * n + perm[1]) * n + perm[2];
      impl->a[off] = e;
      for (std::size_t l = 0; l < n; ++l) {
        impl->ad[l * n3 + off] = first[l];
        for (std::size_t m = 0; m < n; ++m) impl->add[(l * n + m) * n3 + off] = second[l * n + m];
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  impl_ = std::move(impl);
}

const Chart& StatStructure::chart() const noexcept { return impl_->chart; }

const Expr& StatStructure::metric(std::size_t i, std::size_t j) const {
  return impl_->g[i * dim() + j];
}

const Expr& StatStructure::cubic(std::size_t i, std::size_t j, std::size_t k) const {
  const std::size_t n = dim();
  return impl_->a[(i * n + j) * n + k];
}

const Expr& StatStructure::metric_d(std::size_t k, std::size_t i, std::size_t j) const {
  const std::size_t n = dim();
  return impl_->gd[(k * n + i) * n + j];
}

const Expr& StatStructure::metric_dd(std::size_t k, std::size_t l, std::size_t i,
                                     std::size_t j) const {
  const std::size_t n = dim();
  return impl_->gdd[((k * n + l) * n + i) * n + j];
}

const Expr& StatStructure::cubic_d(std::size_t l, std::size_t i, std::size_t j,
                                   std::size_t k) const {
  const std::size_t n = dim();
  return impl_->ad[((l * n + i) * n + j) * n + k];
}

const Expr& StatStructure::cubic_dd(std::size_t l, std::size_t m, std::size_t i, std::size_t j,
                                    std::size_t k) const {
  const std::size_t n = dim();
  return impl_->add[(((l * n + m) * n + i) * n + j) * n + k];
}

const std::map<PairKey, Expr>& StatStructure::metric_components() const { return impl_->metric; }
const std::map<TripleKey, Expr>& StatStructure::cubic_components() const { return impl_->cubic; }
bool StatStructure::cubic_is_zero() const { return impl_->cubic_zero; }

// ---------------------------------------------------------------------------
// Point evaluation

namespace {

using Mat = Eigen::MatrixXd;

Mat as_matrix(const TensorValue& t) {
  const std::size_t n = t.dim();
  Mat m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m(i, j) = t(i, j);
  }
  return m;
}

double value_of(const Expr& e, std::span<const double> p) {
  return e.is_literal() ? e.value() : expr::eval(e, p);
}

}  // namespace

TensorValue inverse_spd(const TensorValue& g) {
  const std::size_t n = g.dim();
  const Mat m = as_matrix(g);
  Eigen::LLT<Mat> llt(m);
  if (llt.info() != Eigen::Success) {
    Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
    throw NotPositiveDefiniteError(es.eigenvalues()(0));
  }
  // Cholesky succeeds for tiny positive pivots too; require a positive
  // smallest eigenvalue as well.
  Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
  if (!(es.eigenvalues()(0) > 0.0)) throw NotPositiveDefiniteError(es.eigenvalues()(0));
  const Mat inv = llt.solve(Mat::Identity(n, n));
  TensorValue out(n, {Variance::Up, Variance::Up}, {{0, 1, false}});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out(i, j) = 0.5 * (inv(i, j) + inv(j, i));
  }
  return out;
}

FieldData evaluate_fields(const StatStructure& s, std::span<const double> p, int order) {
  const std::size_t n = s.dim();
  if (p.size() != n) throw Error(ErrorCode::InvalidSpec, "point dimension mismatch");
  FieldData f;
  f.n = n;
  f.order = order;
  f.p.assign(p.begin(), p.end());

  f.g = TensorValue::covariant(n, 2, {{0, 1, false}});
  if (order >= 1) f.dg = TensorValue::covariant(n, 3, {{1, 2, false}});
  if (order >= 2) f.d2g = TensorValue::covariant(n, 4, {{0, 1, false}, {2, 3, false}});
  for (const auto& [key, e] : s.metric_components()) {
    const auto [i, j] = key;
    const double v = value_of(e, p);
    f.g(i, j) = v;
    f.g(j, i) = v;
    for (std::size_t k = 0; order >= 1 && k < n; ++k) {
      const double d = value_of(s.metric_d(k, i, j), p);
      f.dg(k, i, j) = d;
      f.dg(k, j, i) = d;
      for (std::size_t l = k; order >= 2 && l < n; ++l) {
        const double dd = value_of(s.metric_dd(k, l, i, j), p);
        f.d2g(k, l, i, j) = dd;
        f.d2g(k, l, j, i) = dd;
        f.d2g(l, k, i, j) = dd;
        f.d2g(l, k, j, i) = dd;
      }
    }
  }
  f.g_inv = inverse_spd(f.g);

  f.a = TensorValue::covariant(n, 3, {{0, 1, false}, {1, 2, false}});
  if (order >= 1) f.da = TensorValue::covariant(n, 4, {{1, 2, false}, {2, 3, false}});
  if (order >= 2) {
    f.d2a = TensorValue::covariant(n, 5, {{0, 1, false}, {2, 3, false}, {3, 4, false}});
  }
  std::vector<double> first(n), second(n * n);
  for (const auto& [key, e] : s.cubic_components()) {
    if (e.is_literal(0.0)) continue;
    const double v = value_of(e, p);
    const auto [i, j, k] = key;
    for (std::size_t l = 0; order >= 1 && l < n; ++l) {
      first[l] = value_of(s.cubic_d(l, i, j, k), p);
      for (std::size_t m = l; order >= 2 && m < n; ++m) {
        second[l * n + m] = value_of(s.cubic_dd(l, m, i, j, k), p);
        second[m * n + l] = second[l * n + m];
      }
    }
    std::array<std::size_t, 3> perm = key;
    do {
      const auto [x, y, z] = perm;
      f.a(x, y, z) = v;
      for (std::size_t l = 0; order >= 1 && l < n; ++l) {
        f.da(l, x, y, z) = first[l];
        for (std::size_t m = 0; order >= 2 && m < n; ++m) f.d2a(l, m, x, y, z) = second[l * n + m];
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return f;
}

MetricValue metric_at(const StatStructure& s, std::span<const double> p) {
  FieldData f = evaluate_fields(s, p, 0);
  return {std::move(f.g), std::move(f.g_inv)};
}

double metric_dot(const TensorValue& g, std::span<const double> u, std::span<const double> v) {
  const std::size_t n = g.dim();
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row += g(i, j) * v[j];
    sum += u[i] * row;
  }
  return sum;
}

std::vector<Vector> orthonormalize(const TensorValue& g, const std::vector<Vector>& vectors) {
  const std::size_t m = vectors.size();
  Mat gram(m, m);
  for (std::size_t a = 0; a < m; ++a) {
    if (vectors[a].size() != g.dim()) throw Error(ErrorCode::DegenerateInput, "vector dimension mismatch");
    for (std::size_t b = 0; b < m; ++b) gram(a, b) = metric_dot(g, vectors[a], vectors[b]);
  }
  if (m > 0 && !(gram.determinant() >= 1e-12)) {
    throw Error(ErrorCode::DegenerateInput, "input vectors are linearly dependent (Gram determinant < 1e-12)");
  }
  std::vector<Vector> out;
  out.reserve(m);
  for (const auto& v : vectors) {
    Vector w = v;
    for (const auto& e : out) {
      const double c = metric_dot(g, w, e);
      for (std::size_t i = 0; i < w.size(); ++i) w[i] -= c * e[i];
    }
    const double norm = std::sqrt(metric_dot(g, w, w));
    for (double& x : w) x /= norm;
    out.push_back(std::move(w));
  }
  return out;
}

std::vector<Vector> orthonormalize(const StatStructure& s, std::span<const double> p,
                                   const std::vector<Vector>& vectors) {
  return orthonormalize(metric_at(s, p).g, vectors);
}

std::vector<double> coordinate_orthonormal_frame(const TensorValue& g) {
  const std::size_t n = g.dim();
  std::vector<Vector> basis(n, Vector(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) basis[i][i] = 1.0;
  const auto frame = orthonormalize(g, basis);
  std::vector<double> out(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t i = 0; i < n; ++i) out[i * n + a] = frame[a][i];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Finite differences

TensorValue fd_partial(const Chart& chart, const TensorField& field, std::span<const double> p,
                       std::size_t i, double h, bool richardson) {
  if (i >= chart.dim()) throw Error(ErrorCode::CoordinateOutOfRange, "derivative index out of range");
  Point plus(p.begin(), p.end());
  Point minus(p.begin(), p.end());
  plus[i] += h;
  minus[i] -= h;
  if (!chart.contains(plus) || !chart.contains(minus)) {
    throw Error(ErrorCode::StepOutsideDomain, "finite-difference step leaves the chart domain");
  }
  auto central = [&](double step) {
    Point a(p.begin(), p.end());
    Point b(p.begin(), p.end());
    a[i] += step;
    b[i] -= step;
    TensorValue d = field(a);
    d -= field(b);
    d *= 1.0 / (2.0 * step);
    return d;
  };
  TensorValue coarse = central(h);
  if (!richardson) return coarse;
  TensorValue fine = central(0.5 * h);
  fine *= 4.0 / 3.0;
  coarse *= 1.0 / 3.0;
  fine -= coarse;
  return fine;
}

TensorValue fd_partial(const StatStructure& s, FieldSelector field, std::span<const double> p,
                       std::size_t i, double h, bool richardson) {
  const TensorField f = [&s, field](std::span<const double> q) {
    FieldData d = evaluate_fields(s, q, 0);
    return field == FieldSelector::Metric ? std::move(d.g) : std::move(d.a);
  };
  return fd_partial(s.chart(), f, p, i, h, richardson);
}

}  // namespace statlab
