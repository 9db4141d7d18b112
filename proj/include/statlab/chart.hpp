#pragma once

// Coordinate charts, statistical structures presented as (g, A) component
// expressions, and point evaluation of their fields.
//
// Index convention for the whole library: indices are 0-based in the C++ API
// and 1-based in text (x1, "1,2,3" keys, reports).

#include <array>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <span>
#include <vector>

#include "statlab/expr.hpp"
#include "statlab/tensor.hpp"

namespace statlab {

using Point = std::vector<double>;
using Vector = std::vector<double>;

using PairKey = std::array<std::size_t, 2>;
using TripleKey = std::array<std::size_t, 3>;

PairKey canonical(PairKey k) noexcept;
TripleKey canonical(TripleKey k) noexcept;

/// An axis-aligned coordinate box with per-axis sample counts for sweeps.
class Chart {
 public:
  Chart(std::size_t n, std::vector<double> lo, std::vector<double> hi,
        std::vector<std::size_t> grid);
  /// Same sample count on every axis.
  Chart(std::size_t n, std::vector<double> lo, std::vector<double> hi, std::size_t grid = 3);

  std::size_t dim() const noexcept { return n_; }
  double lo(std::size_t i) const noexcept { return lo_[i]; }
  double hi(std::size_t i) const noexcept { return hi_[i]; }
  std::size_t grid(std::size_t i) const noexcept { return grid_[i]; }

  bool contains(std::span<const double> p) const noexcept;

  /// Tensor-product grid including the box faces, in row-major order.
  std::vector<Point> grid_points() const;

  /// Uniform point in the box shrunk by `margin` (a fraction of each side).
  template <class Rng>
  Point random_point(Rng& rng, double margin = 0.05) const {
    Point p(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      const double w = hi_[i] - lo_[i];
      std::uniform_real_distribution<double> u(lo_[i] + margin * w, hi_[i] - margin * w);
      p[i] = u(rng);
    }
    return p;
  }

  Chart with_grid(std::size_t per_axis) const;

 private:
  std::size_t n_;
  std::vector<double> lo_;
  std::vector<double> hi_;
  std::vector<std::size_t> grid_;
};

/// A statistical structure on a chart given by the metric g and the
/// statistical cubic form A. Both stores are keyed by sorted multi-index, so
/// g is symmetric and A fully symmetric by construction. Immutable; copies
/// share state.
class StatStructure {
 public:
  /// Unspecified metric components default to the identity, unspecified
  /// cubic components to 0. Keys are canonicalized.
  StatStructure(Chart chart, const std::map<PairKey, expr::Expr>& metric,
                const std::map<TripleKey, expr::Expr>& cubic);

  const Chart& chart() const noexcept;
  std::size_t dim() const noexcept { return chart().dim(); }

  const expr::Expr& metric(std::size_t i, std::size_t j) const;
  const expr::Expr& cubic(std::size_t i, std::size_t j, std::size_t k) const;
  /// d/dx_k g_ij and d2/dx_k dx_l g_ij.
  const expr::Expr& metric_d(std::size_t k, std::size_t i, std::size_t j) const;
  const expr::Expr& metric_dd(std::size_t k, std::size_t l, std::size_t i, std::size_t j) const;
  const expr::Expr& cubic_d(std::size_t l, std::size_t i, std::size_t j, std::size_t k) const;
  const expr::Expr& cubic_dd(std::size_t l, std::size_t m, std::size_t i, std::size_t j,
                             std::size_t k) const;

  /// Stored metric and cubic component maps (canonical keys, all entries).
  const std::map<PairKey, expr::Expr>& metric_components() const;
  const std::map<TripleKey, expr::Expr>& cubic_components() const;

  /// True when every cubic component is the literal 0.
  bool cubic_is_zero() const;

  struct Impl;

 private:
  std::shared_ptr<const Impl> impl_;
};

/// Component values and symbolic partial derivatives at one point.
/// `order` says how many derivative levels were evaluated (0, 1 or 2).
struct FieldData {
  std::size_t n = 0;
  int order = 0;
  Point p;
  TensorValue g;      // g_ij
  TensorValue g_inv;  // g^ij
  TensorValue dg;     // dg(k, i, j) = d_k g_ij
  TensorValue d2g;    // d2g(k, l, i, j)
  TensorValue a;      // A_ijk
  TensorValue da;     // da(l, i, j, k) = d_l A_ijk
  TensorValue d2a;    // d2a(l, m, i, j, k)
};

FieldData evaluate_fields(const StatStructure& s, std::span<const double> p, int order = 2);

struct MetricValue {
  TensorValue g;
  TensorValue g_inv;
};

/// g and its inverse at p. Throws NotPositiveDefiniteError, or Error(Domain)
/// from expression evaluation.
MetricValue metric_at(const StatStructure& s, std::span<const double> p);

/// Inverse of a symmetric positive definite matrix given as a rank-2 tensor.
TensorValue inverse_spd(const TensorValue& g);

double metric_dot(const TensorValue& g, std::span<const double> u, std::span<const double> v);

/// Modified Gram-Schmidt with respect to g at p. Throws DegenerateInput when
/// the Gram determinant of the input falls below 1e-12.
std::vector<Vector> orthonormalize(const StatStructure& s, std::span<const double> p,
                                   const std::vector<Vector>& vectors);
std::vector<Vector> orthonormalize(const TensorValue& g, const std::vector<Vector>& vectors);

/// g-orthonormal frame obtained from the coordinate frame by modified
/// Gram-Schmidt in index order. Row-major: frame[i * n + a] is coordinate i
/// of frame vector a.
std::vector<double> coordinate_orthonormal_frame(const TensorValue& g);

/// A tangent 2-plane spanned by u and v.
struct Plane {
  Vector u;
  Vector v;
};

enum class FieldSelector { Metric, Cubic };

/// Central difference of a whole component field along coordinate i.
/// With `richardson`, combines steps h and h/2 for O(h^4) truncation.
/// Throws StepOutsideDomain if p +- h e_i leaves the chart box.
TensorValue fd_partial(const StatStructure& s, FieldSelector field, std::span<const double> p,
                       std::size_t i, double h = 1e-5, bool richardson = false);

using TensorField = std::function<TensorValue(std::span<const double>)>;

/// Same scheme for an arbitrary tensor field on the chart.
TensorValue fd_partial(const Chart& chart, const TensorField& field, std::span<const double> p,
                       std::size_t i, double h = 1e-5, bool richardson = false);

}  // namespace statlab
