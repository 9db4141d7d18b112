#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "statlab/connection.hpp"
#include "statlab/error.hpp"
#include "statlab/gallery.hpp"
#include "support.hpp"

using namespace statlab;
using expr::Expr;

namespace {

StatStructure curved() {
  Chart chart(3, {-0.5, -0.5, -0.5}, {0.5, 0.5, 0.5}, 3);
  const auto e = [](const char* s) { return expr::parse(s, 3); };
  std::map<PairKey, Expr> g{{{0, 0}, e("1 + x1^2")}, {{1, 1}, e("exp(x2)")}, {{2, 2}, e("2 + x3")},
                            {{0, 2}, e("x1*x3/5")}, {{0, 1}, e("sin(x3)/10")}};
  std::map<TripleKey, Expr> a{{{0, 0, 1}, e("x1*x2")}, {{0, 1, 2}, e("cos(x1 + x3)")},
                              {{2, 2, 2}, e("x2^3")}, {{1, 1, 0}, e("exp(x3)/3")}};
  return StatStructure(chart, g, a);
}

const std::vector<double> kPoint{0.1, -0.2, 0.15};
constexpr double kH = 1e-3;

TensorValue fd_christoffel(const StatStructure& s, std::span<const double> p) {
  const std::size_t n = s.dim();
  const MetricValue m = metric_at(s, p);
  std::vector<TensorValue> dg;
  for (std::size_t k = 0; k < n; ++k) dg.push_back(fd_partial(s, FieldSelector::Metric, p, k, kH, true));
  TensorValue out(n, {Variance::Up, Variance::Down, Variance::Down});
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double sum = 0.0;
        for (std::size_t m2 = 0; m2 < n; ++m2)
          sum += 0.5 * m.g_inv(l, m2) * (dg[i](m2, j) + dg[j](m2, i) - dg[m2](i, j));
        out(l, i, j) = sum;
      }
  return out;
}

}  // namespace

TEST_CASE("hyperbolic plane Christoffel symbols") {
  FixtureSpec f;
  f.name = "hyperbolic_plane";
  f.n = 2;
  const StatStructure s = build(f);
  const double y = 1.7;
  const TensorValue gamma = christoffel_at(s, std::vector<double>{0.3, y}).gamma;
  CHECK(gamma(0, 0, 1) == doctest::Approx(-1.0 / y));
  CHECK(gamma(0, 1, 0) == doctest::Approx(-1.0 / y));
  CHECK(gamma(1, 0, 0) == doctest::Approx(1.0 / y));
  CHECK(gamma(1, 1, 1) == doctest::Approx(-1.0 / y));
  CHECK(gamma(0, 0, 0) == 0.0);
  CHECK(gamma(1, 0, 1) == 0.0);
  CHECK(gamma(0, 1, 1) == 0.0);
}

TEST_CASE("Christoffel symbols and their derivatives against finite differences") {
  const StatStructure s = curved();
  const LocalGeometry geo = local_geometry(s, kPoint);
  CHECK(max_abs_diff(geo.gamma, fd_christoffel(s, kPoint)) < 1e-9);
  for (std::size_t k = 0; k < 3; ++k) {
    const TensorValue d = fd_partial(
        s.chart(), [&](std::span<const double> q) { return christoffel_at(s, q).gamma; }, kPoint, k, kH, true);
    for (std::size_t l = 0; l < 3; ++l)
      for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) CHECK(geo.dgamma(k, l, i, j) == doctest::Approx(d(l, i, j)).epsilon(1e-8));
  }
  CHECK(metric_compatibility_residual(geo) < 1e-12);
  CHECK(duality_residual(geo) < 1e-12);
}

TEST_CASE("statistical connections split as nabla-hat plus or minus K") {
  const StatStructure s = curved();
  const ConnectionTriple c = statistical_connections_at(s, kPoint);
  const DifferenceTensor d = difference_tensor_at(s, kPoint);
  CHECK(max_abs_diff(c.primal.gamma, c.levi_civita.gamma + d.k) < 1e-14);
  CHECK(max_abs_diff(c.dual.gamma, c.levi_civita.gamma - d.k) < 1e-14);
  const MetricValue m = metric_at(s, kPoint);
  // K^l_ij lowered gives back A
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k) {
        double sum = 0.0;
        for (std::size_t l = 0; l < 3; ++l) sum += m.g(k, l) * d.k(l, i, j);
        CHECK(sum == doctest::Approx(d.a(k, i, j)).epsilon(1e-13));
      }
}

TEST_CASE("covariant derivatives of A against finite differences") {
  const StatStructure s = curved();
  const LocalGeometry geo = local_geometry(s, kPoint);
  const std::size_t n = 3;
  // first derivative
  for (std::size_t w = 0; w < n; ++w) {
    const TensorValue da = fd_partial(s, FieldSelector::Cubic, kPoint, w, kH, true);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
          double v = da(i, j, k);
          for (std::size_t m = 0; m < n; ++m)
            v -= geo.gamma(m, w, i) * geo.a()(m, j, k) + geo.gamma(m, w, j) * geo.a()(i, m, k) +
                 geo.gamma(m, w, k) * geo.a()(i, j, m);
          CHECK(geo.nabla_a(w, i, j, k) == doctest::Approx(v).epsilon(1e-8));
        }
  }
  // second derivative, treating nabla-hat A as a rank-4 field
  const TensorValue& na = geo.nabla_a;
  TensorValue lap = TensorValue::covariant(n, 3);
  for (std::size_t a = 0; a < n; ++a) {
    const TensorValue d = fd_partial(
        s.chart(), [&](std::span<const double> q) { return nabla_hat_a_at(s, q); }, kPoint, a, kH, true);
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          for (std::size_t k = 0; k < n; ++k) {
            double v = d(b, i, j, k);
            for (std::size_t m = 0; m < n; ++m)
              v -= geo.gamma(m, a, b) * na(m, i, j, k) + geo.gamma(m, a, i) * na(b, m, j, k) +
                   geo.gamma(m, a, j) * na(b, i, m, k) + geo.gamma(m, a, k) * na(b, i, j, m);
            CHECK(geo.nabla2_a(a, b, i, j, k) == doctest::Approx(v).epsilon(1e-7));
            lap(i, j, k) += geo.g_inv()(a, b) * v;
          }
  }
  CHECK(max_abs_diff(rough_laplacian_a(geo), lap) < 1e-7);
}

TEST_CASE("Laplace-Beltrami on the hyperbolic plane") {
  FixtureSpec f;
  f.name = "hyperbolic_plane";
  f.n = 2;
  const StatStructure s = build(f);
  const std::vector<double> p{0.25, 1.5};
  CHECK(laplacian_scalar_at(s, expr::parse("x2", 2), p) == doctest::Approx(0.0));
  CHECK(laplacian_scalar_at(s, expr::parse("log(x2)", 2), p) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(laplacian_scalar_at(s, expr::parse("x1^2", 2), p) == doctest::Approx(2.0 * 1.5 * 1.5).epsilon(1e-14));
}

TEST_CASE("psi jet against finite differences") {
  const StatStructure s = curved();
  const auto psi_at = [&](std::span<const double> q) {
    const FieldData f = evaluate_fields(s, q, 0);
    return metric_inner(f.a, f.a, f.g_inv);
  };
  const Jet j = cubic_norm_jet(evaluate_fields(s, kPoint, 2));
  CHECK(j.value() == doctest::Approx(psi_at(kPoint)).epsilon(1e-13));
  const double h = 1e-4;
  for (std::size_t a = 0; a < 3; ++a) {
    auto pp = kPoint, pm = kPoint;
    pp[a] += h;
    pm[a] -= h;
    CHECK(j.grad(a) == doctest::Approx((psi_at(pp) - psi_at(pm)) / (2 * h)).epsilon(1e-7));
    for (std::size_t b = 0; b < 3; ++b) {
      auto shift = [&](double sa, double sb) {
        auto q = kPoint;
        q[a] += sa;
        q[b] += sb;
        return psi_at(q);
      };
      const double fd = (shift(h, h) - shift(h, -h) - shift(-h, h) + shift(-h, -h)) / (4 * h * h);
      CHECK(j.hess(a, b) == doctest::Approx(fd).epsilon(1e-5));
    }
  }
  CHECK_THROWS_AS(cubic_norm_jet(evaluate_fields(s, kPoint, 1)), Error);
}

TEST_CASE("structure residuals") {
  const StatStructure s = curved();
  const StructureResiduals r = structure_residuals(s, kPoint);
  CHECK(r.codazzi < 1e-14);
  CHECK(r.trace_free > 0.1);
  Chart chart(2, {-1, -1}, {1, 1});
  const StatStructure t(chart, {}, {{{0, 0, 0}, Expr::literal(1.0)}, {{0, 1, 1}, Expr::literal(-1.0)}});
  CHECK(structure_residuals(t, std::vector<double>{0.0, 0.0}).trace_free == 0.0);
  const StatStructure u(chart, {}, {{{0, 0, 0}, Expr::literal(1.0)}});
  CHECK(structure_residuals(u, std::vector<double>{0.0, 0.0}).trace_free == 1.0);
  CHECK(k_trace_residual(local_geometry(u, std::vector<double>{0.0, 0.0})) == 1.0);
}
