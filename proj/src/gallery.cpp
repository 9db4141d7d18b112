#include "statlab/gallery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "statlab/curvature.hpp"
#include "statlab/error.hpp"
#include "statlab/inequality.hpp"
#include "statlab/parallel.hpp"

namespace statlab {

namespace {

using expr::Expr;

Chart box(std::size_t n, const FixtureSpec& spec, double lo, double hi) {
  std::vector<double> l = spec.lo.value_or(std::vector<double>(n, lo));
  std::vector<double> h = spec.hi.value_or(std::vector<double>(n, hi));
  return Chart(n, std::move(l), std::move(h), spec.grid);
}

StatStructure build_constant(const FixtureSpec& spec) {
  const std::size_t n = spec.n;
  std::map<TripleKey, Expr> a;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) a[{i, j, k}] = Expr::literal(spec.c);
    }
  }
  return StatStructure(box(n, spec, -1.0, 1.0), {}, a);
}

StatStructure build_linear(const FixtureSpec& spec) {
  const std::size_t n = spec.n;
  Chart chart = box(n, spec, 1.0, 2.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(chart.lo(i) > 0.0)) throw Error(ErrorCode::InvalidSpec, "linear_distinct needs a box in the positive orthant");
  }
  std::map<TripleKey, Expr> a;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        Expr sum;
        bool first = true;
        for (std::size_t l = 0; l < n; ++l) {
          if (l == i || l == j || l == k) continue;
          sum = first ? Expr::coord(l) : sum + Expr::coord(l);
          first = false;
        }
        if (!first) a[{i, j, k}] = sum;
      }
    }
  }
  return StatStructure(std::move(chart), {}, a);
}

StatStructure build_hyperbolic(const FixtureSpec& spec) {
  if (spec.n != 2) throw Error(ErrorCode::InvalidSpec, "hyperbolic_plane is two-dimensional");
  std::vector<double> lo = spec.lo.value_or(std::vector<double>{-1.0, 1.0});
  std::vector<double> hi = spec.hi.value_or(std::vector<double>{1.0, 3.0});
  Chart chart(2, std::move(lo), std::move(hi), spec.grid);
  if (!(chart.lo(1) > 0.0)) throw Error(ErrorCode::InvalidSpec, "hyperbolic_plane needs x2 > 0 on the box");
  const Expr y = Expr::coord(1);
  const Expr w = Expr::literal(1.0) / (y * y);
  return StatStructure(std::move(chart), {{{0, 0}, w}, {{1, 1}, w}}, {});
}

}  // namespace

const std::vector<std::string>& fixture_names() {
  static const std::vector<std::string> names{"trivial", "constant_distinct", "linear_distinct", "hyperbolic_plane"};
  return names;
}

StatStructure build(const FixtureSpec& spec) {
  if (spec.name == "trivial") {
    return StatStructure(box(spec.n, spec, -1.0, 1.0), {}, {});
  }
  if (spec.name == "constant_distinct" || spec.name == "linear_distinct") {
    if (spec.n < 3) throw Error(ErrorCode::InvalidSpec, spec.name + " needs dimension >= 3");
    if (spec.name == "linear_distinct") return build_linear(spec);
    if (!(spec.c > 0.0) || !std::isfinite(spec.c)) throw Error(ErrorCode::InvalidSpec, "constant_distinct needs c > 0");
    return build_constant(spec);
  }
  if (spec.name == "hyperbolic_plane") return build_hyperbolic(spec);
  throw Error(ErrorCode::InvalidSpec, "unknown fixture '" + spec.name + "'");
}

StatStructure alpha_transform(const StatStructure& s, double alpha) {
  if (alpha == 1.0) return s;
  std::map<TripleKey, Expr> a;
  if (alpha != 0.0) {
    const Expr f = Expr::literal(alpha);
    for (const auto& [key, e] : s.cubic_components()) {
      if (!e.is_literal(0.0)) a[key] = f * e;
    }
  }
  return StatStructure(s.chart(), s.metric_components(), a);
}

StatStructure harmonic_cubic(std::size_t n, std::string_view f, const Chart& chart) {
  const Expr pot = expr::parse(f, n);
  std::map<TripleKey, Expr> a;
  for (std::size_t i = 0; i < n; ++i) {
    const Expr di = expr::differentiate(pot, i);
    for (std::size_t j = i; j < n; ++j) {
      const Expr dij = expr::differentiate(di, j);
      for (std::size_t k = j; k < n; ++k) {
        const Expr d = expr::differentiate(dij, k);
        if (!d.is_literal(0.0)) a[{i, j, k}] = d;
      }
    }
  }
  return StatStructure(chart, {}, a);
}

StatStructure hessian_potential(std::size_t n, std::string_view phi, const Chart& chart) {
  const Expr pot = expr::parse(phi, n);
  std::map<PairKey, Expr> g;
  std::map<TripleKey, Expr> a;
  const Expr half = Expr::literal(-0.5);
  for (std::size_t i = 0; i < n; ++i) {
    const Expr di = expr::differentiate(pot, i);
    for (std::size_t j = i; j < n; ++j) {
      const Expr dij = expr::differentiate(di, j);
      g[{i, j}] = dij;
      for (std::size_t k = j; k < n; ++k) {
        const Expr d = expr::differentiate(dij, k);
        if (!d.is_literal(0.0)) a[{i, j, k}] = half * d;
      }
    }
  }
  return StatStructure(chart, g, a);
}

StatStructure constant_cubic(const TensorValue& t, const Chart& chart) {
  const std::size_t n = t.dim();
  std::map<TripleKey, Expr> a;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      for (std::size_t k = j; k < n; ++k) {
        if (t(i, j, k) != 0.0) a[{i, j, k}] = Expr::literal(t(i, j, k));
      }
    }
  }
  return StatStructure(chart, {}, a);
}

StatStructure perturb_cubic(const StatStructure& s) {
  const std::size_t n = s.dim();
  const TripleKey key = n >= 3 ? TripleKey{0, 1, 2} : TripleKey{0, 1, 1};
  std::map<TripleKey, Expr> a = s.cubic_components();
  const Expr base = s.cubic(key[0], key[1], key[2]);
  a[key] = base.is_literal(0.0) ? Expr::coord(0) : base + Expr::coord(0);
  return StatStructure(s.chart(), s.metric_components(), a);
}

std::vector<NamedStructure> conjugate_symmetric_suite(std::uint64_t seed) {
  std::vector<NamedStructure> out;
  auto add = [&](std::string name, StatStructure s) { out.push_back({std::move(name), std::move(s)}); };
  auto fixture = [](std::string name, std::size_t n, double c = 1.0) {
    FixtureSpec f;
    f.name = std::move(name);
    f.n = n;
    f.c = c;
    return build(f);
  };
  auto cube = [](std::size_t n, double lo, double hi) { return Chart(n, std::vector<double>(n, lo), std::vector<double>(n, hi), 3); };

  add("trivial n=3", fixture("trivial", 3));
  add("trivial n=5", fixture("trivial", 5));
  add("constant_distinct n=3 c=1", fixture("constant_distinct", 3));
  add("constant_distinct n=4 c=1", fixture("constant_distinct", 4));
  add("constant_distinct n=5 c=0.5", fixture("constant_distinct", 5, 0.5));
  add("constant_distinct n=4 c=2 alpha=0.5", alpha_transform(fixture("constant_distinct", 4, 2.0), 0.5));
  add("linear_distinct n=4", fixture("linear_distinct", 4));
  add("linear_distinct n=5", fixture("linear_distinct", 5));
  add("linear_distinct n=4 alpha=-1.5", alpha_transform(fixture("linear_distinct", 4), -1.5));
  add("linear_distinct n=6", fixture("linear_distinct", 6));
  add("hyperbolic_plane", fixture("hyperbolic_plane", 2));
  add("hessian exp n=2", hessian_potential(2, "exp(x1) + exp(x2)", cube(2, -1.0, 1.0)));
  add("hessian exp n=3", hessian_potential(3, "exp(x1) + exp(x2) + exp(x3) + x1*x2/4", cube(3, -0.5, 0.5)));
  add("hessian log n=3", hessian_potential(3, "-log(x1) - log(x2) - log(x3)", cube(3, 1.0, 2.0)));
  add("hessian quartic n=3",
      hessian_potential(3, "(x1^2 + x2^2 + x3^2)^2/8 + (x1^2 + x2^2 + x3^2)/2", cube(3, -1.0, 1.0)));
  add("harmonic quartic n=2", harmonic_cubic(2, "x1^4 - 6*x1^2*x2^2 + x2^4", cube(2, -1.0, 1.0)));
  add("harmonic multilinear n=4", harmonic_cubic(4, "x1*x2*x3*x4", cube(4, -1.0, 1.0)));
  add("harmonic mixed n=4", harmonic_cubic(4, "(x1^2 - x2^2)*x3*x4 + x1*x2*x3", cube(4, -1.0, 1.0)));
  std::mt19937_64 rng = chunk_rng(seed, 0);
  add("random constant n=3", constant_cubic(random_trace_free_cubic(3, rng), cube(3, -1.0, 1.0)));
  add("random constant n=4", constant_cubic(random_trace_free_cubic(4, rng), cube(4, -1.0, 1.0)));
  return out;
}

VerificationReport witness_report(const StatStructure& s, const WitnessOptions& opts) {
  if (s.dim() < 3) throw Error(ErrorCode::PreconditionViolated, "projective witness needs dimension >= 3");
  const std::vector<Point> points = s.chart().grid_points();
  struct PointResult {
    ConjugateSymmetryReport cs;
    ProjectiveWitness w;
  };
  const auto results = parallel_map(points.size(), opts.threads, [&](std::size_t i) {
    const LocalGeometry geo = local_geometry(s, points[i]);
    const CurvatureBundle c = curvature_bundle(geo);
    return PointResult{conjugate_symmetry_report(geo, c), projective_witness(c.r, geo.g())};
  });

  ConjugateSymmetryReport worst;
  double w_min = std::numeric_limits<double>::infinity();
  double w_max = 0.0;
  std::size_t flat_points = 0;
  for (const auto& r : results) {
    worst.r_minus_rbar = std::max(worst.r_minus_rbar, r.cs.r_minus_rbar);
    worst.nabla_hat_a_asym = std::max(worst.nabla_hat_a_asym, r.cs.nabla_hat_a_asym);
    worst.zw_skew = std::max(worst.zw_skew, r.cs.zw_skew);
    w_min = std::min(w_min, r.w.max_abs);
    w_max = std::max(w_max, r.w.max_abs);
    if (r.w.max_abs < opts.witness_threshold) ++flat_points;
  }

  VerificationReport rep("witness", 0, opts.residual_tol, 0.0);
  const std::size_t np = points.size();
  rep.expect_at_most("conjugate_symmetry.r_minus_rbar", worst.r_minus_rbar, opts.residual_tol, np);
  rep.expect_at_most("conjugate_symmetry.nabla_hat_a_asym", worst.nabla_hat_a_asym, opts.residual_tol, np);
  rep.expect_at_most("conjugate_symmetry.zw_skew", worst.zw_skew, opts.residual_tol, np);
  Check& wc = rep.note("projective_witness.min_max_abs", w_min);
  wc.samples = np;
  wc.details = {{"threshold", opts.witness_threshold}, {"max_max_abs", w_max}, {"points_below_threshold", flat_points}};

  nlohmann::ordered_json comps = nlohmann::ordered_json::array();
  for (const auto& c : results.front().w.components) {
    comps.push_back({{"i", c.i + 1}, {"j", c.j + 1}, {"l", c.l + 1}, {"value", c.value}});
  }
  rep.data["points"] = np;
  rep.data["first_point"] = points.front();
  rep.data["first_point_witness"] = std::move(comps);

  const bool symmetric = rep.passed();
  if (!symmetric) {
    rep.verdict = "not conjugate symmetric";
  } else if (flat_points == 0) {
    rep.verdict = "conjugate symmetric, not projectively flat";
  } else if (flat_points == np) {
    rep.verdict = "conjugate symmetric, all witnesses vanish";
  } else {
    rep.verdict = "conjugate symmetric, witnesses vanish at some points";
  }
  return rep;
}

}  // namespace statlab

namespace statlab {

namespace {

struct FixtureScan {
  double codazzi = 0.0;
  double trace_free = 0.0;
  double curvature_max = 0.0;
  ConjugateSymmetryReport cs;
  std::size_t points = 0;
};

FixtureScan scan(const StatStructure& s, std::size_t threads) {
  const std::vector<Point> points = s.chart().grid_points();
  const auto per_point = parallel_map(points.size(), threads, [&](std::size_t i) {
    const LocalGeometry geo = local_geometry(s, points[i]);
    const CurvatureBundle c = curvature_bundle(geo);
    FixtureScan f;
    const StructureResiduals r = structure_residuals(geo);
    f.codazzi = r.codazzi;
    f.trace_free = r.trace_free;
    f.curvature_max = std::max({c.r.max_abs(), c.r_bar.max_abs(), c.r_hat.max_abs()});
    f.cs = conjugate_symmetry_report(geo, c);
    return f;
  });
  FixtureScan out;
  out.points = points.size();
  for (const auto& f : per_point) {
    out.codazzi = std::max(out.codazzi, f.codazzi);
    out.trace_free = std::max(out.trace_free, f.trace_free);
    out.curvature_max = std::max(out.curvature_max, f.curvature_max);
    out.cs.r_minus_rbar = std::max(out.cs.r_minus_rbar, f.cs.r_minus_rbar);
    out.cs.nabla_hat_a_asym = std::max(out.cs.nabla_hat_a_asym, f.cs.nabla_hat_a_asym);
    out.cs.zw_skew = std::max(out.cs.zw_skew, f.cs.zw_skew);
  }
  return out;
}

double min_of(const ConjugateSymmetryReport& r) { return std::min({r.r_minus_rbar, r.nabla_hat_a_asym, r.zw_skew}); }
double max_of(const ConjugateSymmetryReport& r) { return std::max({r.r_minus_rbar, r.nabla_hat_a_asym, r.zw_skew}); }

FixtureSpec named(std::string name, std::size_t n, double c = 1.0) {
  FixtureSpec f;
  f.name = std::move(name);
  f.n = n;
  f.c = c;
  return f;
}

}  // namespace

VerificationReport gallery_verification(double tol_residual, std::size_t threads) {
  constexpr double kStructureTol = 1e-10;
  constexpr double kExactTol = 1e-12;
  VerificationReport rep("verify gallery", 0, tol_residual, 0.0);

  const std::vector<std::pair<std::string, StatStructure>> fixtures{
      {"trivial n=3", build(named("trivial", 3))},
      {"constant_distinct n=4 c=1", build(named("constant_distinct", 4))},
      {"constant_distinct n=3 c=1", build(named("constant_distinct", 3))},
      {"linear_distinct n=4", build(named("linear_distinct", 4))},
      {"hyperbolic_plane", build(named("hyperbolic_plane", 2))},
  };
  for (const auto& [name, s] : fixtures) {
    const FixtureScan f = scan(s, threads);
    rep.expect_at_most(name + ": codazzi", f.codazzi, kStructureTol, f.points);
    rep.expect_at_most(name + ": trace", f.trace_free, kStructureTol, f.points);
    rep.expect_at_most(name + ": conjugate symmetry", max_of(f.cs), tol_residual, f.points);
    if (name.starts_with("trivial")) rep.expect_at_most(name + ": curvature", f.curvature_max, kStructureTol, f.points);
  }

  {
    const StatStructure s = build(named("hyperbolic_plane", 2));
    double worst = 0.0;
    const auto points = s.chart().grid_points();
    for (const auto& p : points) {
      const LocalGeometry geo = local_geometry(s, p);
      const CurvatureBundle c = curvature_bundle(geo);
      const double k = sectional_from(lower_curvature(c.r_hat, geo.g()), geo.g(), Plane{{1.0, 0.0}, {0.0, 1.0}});
      worst = std::max(worst, std::abs(k + 1.0));
    }
    rep.expect_at_most("hyperbolic_plane: |k + 1|", worst, 1e-9, points.size());
  }

  {
    const StatStructure s = build(named("constant_distinct", 4));
    const std::vector<double> p{0.25, -0.5, 0.0, 0.75};
    const LocalGeometry geo = local_geometry(s, p);
    const CurvatureBundle c = curvature_bundle(geo);
    const IdentityResiduals id = identity_residuals(geo, c);
    const TensorValue rm = lower_curvature(c.r, geo.g());
    rep.expect_at_most("constant_distinct n=4: |R - R-bar|", (c.r - c.r_bar).max_abs(), kExactTol);
    rep.expect_at_most("constant_distinct n=4: |g(R(e1,e2)e2,e3) + 1|", std::abs(rm(0, 1, 1, 2) + 1.0), kExactTol);
    const double k12 = sectional_from(lower_curvature(c.r_cal, geo.g()), geo.g(),
                                      Plane{{1.0, 0.0, 0.0, 0.0}, {0.0, 1.0, 0.0, 0.0}});
    rep.expect_at_most("constant_distinct n=4: |k(e1,e2) + 2|", std::abs(k12 + 2.0), kExactTol);
    rep.expect_at_most("constant_distinct n=4: |rho-hat|", std::abs(c.rho_hat), 1e-9);
    rep.expect_at_most("constant_distinct n=4: |rho + 24|", std::abs(c.rho + 24.0), 1e-9);
    rep.expect_at_most("constant_distinct n=4: scalar identity", id.eq17, 1e-9);
    rep.expect_at_least("constant_distinct n=4: Ric-hat - Ric min eigenvalue", id.eq15_gap, -1e-9);

    const StatStructure s2 = alpha_transform(s, 2.0);
    const CurvatureBundle c2 = curvature_bundle_at(s2, p);
    const double w2 = lower_curvature(c2.r, metric_at(s2, p).g)(0, 1, 1, 2);
    rep.expect_at_most("constant_distinct n=4 alpha=2: |witness + 4|", std::abs(w2 + 4.0), kExactTol);
  }

  {
    WitnessOptions wo;
    wo.residual_tol = tol_residual;
    wo.threads = threads;
    for (const auto& [name, spec] : {std::pair{"constant_distinct n=4", named("constant_distinct", 4)},
                                     std::pair{"linear_distinct n=4", named("linear_distinct", 4)}}) {
      const VerificationReport w = witness_report(build(spec), wo);
      Check& c = rep.expect_at_least(std::string(name) + ": witness min over grid", w.checks.back().value,
                                     wo.witness_threshold, w.checks.back().samples);
      c.details["verdict"] = w.verdict;
      if (w.verdict != "conjugate symmetric, not projectively flat") {
        c.passed = false;
        c.violations = 1;
      }
    }
  }

  // Lemma 2.1 suite: the three residuals agree on every structure.
  std::size_t mixed = 0;
  double sym_worst = 0.0;
  double pert_least = std::numeric_limits<double>::infinity();
  const auto suite = conjugate_symmetric_suite(0);
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& [name, s] : suite) {
    const FixtureScan a = scan(s, threads);
    const FixtureScan b = scan(perturb_cubic(s), threads);
    sym_worst = std::max(sym_worst, max_of(a.cs));
    pert_least = std::min(pert_least, min_of(b.cs));
    const bool a_mixed = max_of(a.cs) > tol_residual && min_of(a.cs) <= tol_residual;
    const bool b_mixed = max_of(b.cs) > tol_residual && min_of(b.cs) <= tol_residual;
    if (a_mixed) ++mixed;
    if (b_mixed) ++mixed;
    rows.push_back({{"name", name}, {"symmetric_max", max_of(a.cs)}, {"perturbed_min", min_of(b.cs)}});
  }
  rep.expect_at_most("suite: conjugate symmetric residuals", sym_worst, tol_residual, suite.size());
  rep.expect_at_least("suite: perturbed residuals", pert_least, 1e-4, suite.size());
  rep.expect_no_violations("suite: mixed verdicts", mixed, 2 * suite.size(), 0.0, 0.0);
  rep.data["suite"] = std::move(rows);
  return rep;
}

}  // namespace statlab
