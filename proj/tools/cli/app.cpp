#include "app.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <string>

#include "CLI11.hpp"
#include "statlab/curvature.hpp"
#include "statlab/error.hpp"
#include "statlab/gallery.hpp"
#include "statlab/inequality.hpp"
#include "statlab/parallel.hpp"
#include "statlab/report.hpp"
#include "statlab/spec_file.hpp"

namespace statlab::cli {

namespace {

using nlohmann::ordered_json;

struct Globals {
  double tol_residual = 1e-8;
  double tol_slack = 1e-9;
  std::optional<std::size_t> grid;
  std::uint64_t seed = 0;
  std::size_t threads = 0;
  std::size_t planes = 200;
  bool pretty = false;
  bool no_timing = false;
  std::string out;
};

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void add(const Range& r) {
    add(r.lo);
    add(r.hi);
  }
  ordered_json json() const { return ordered_json::array({lo, hi}); }
};

bool is_input_error(ErrorCode c) {
  switch (c) {
    case ErrorCode::Syntax:
    case ErrorCode::UnknownIdentifier:
    case ErrorCode::CoordinateOutOfRange:
    case ErrorCode::InvalidSpec:
    case ErrorCode::SpecFile:
    case ErrorCode::InvalidPinch:
    case ErrorCode::PositiveH3:
    case ErrorCode::PositiveN:
    case ErrorCode::InvalidCoefficients:
      return true;
    default:
      return false;
  }
}


ordered_json structure_json(const StatStructure& s) {
  ordered_json g = ordered_json::object();
  for (const auto& [k, e] : s.metric_components()) g[key_text(k)] = expr::to_string(e);
  ordered_json a = ordered_json::object();
  for (const auto& [k, e] : s.cubic_components()) {
    if (!e.is_literal(0.0)) a[key_text(k)] = expr::to_string(e);
  }
  ordered_json lo = ordered_json::array(), hi = ordered_json::array(), grid = ordered_json::array();
  for (std::size_t i = 0; i < s.dim(); ++i) {
    lo.push_back(s.chart().lo(i));
    hi.push_back(s.chart().hi(i));
    grid.push_back(s.chart().grid(i));
  }
  return {{"dimension", s.dim()}, {"domain", {{"lo", lo}, {"hi", hi}}}, {"grid", grid}, {"g", g}, {"A", a}};
}

StatStructure load(const std::string& path, const Globals& gl) {
  const StructureSpec spec = load_structure_spec(path);
  try {
    return to_structure(spec, gl.grid);
  } catch (const Error& e) {
    throw Error(e.code() == ErrorCode::SpecFile ? ErrorCode::SpecFile : e.code(), path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------

VerificationReport cmd_describe(const std::string& path, const Globals& gl) {
  const StatStructure s = load(path, gl);
  const auto points = s.chart().grid_points();
  struct PointSummary {
    StructureResiduals sr;
    ConjugateSymmetryReport cs;
    double dual_route = 0.0;
    std::optional<IdentityResiduals> id;
    Range ric, ric_bar, ric_hat, rho, rho_bar, rho_hat, sectional, psi;
  };
  const auto rows = parallel_map(points.size(), gl.threads, [&](std::size_t i) {
    const LocalGeometry geo = local_geometry(s, points[i]);
    const CurvatureBundle c = curvature_bundle(geo);
    PointSummary ps;
    ps.sr = structure_residuals(geo);
    ps.cs = conjugate_symmetry_report(geo, c);
    ps.dual_route = c.dual_route_residual;
    const double psi = metric_inner(geo.a(), geo.a(), geo.g_inv());
    const double scale = std::max(1.0, psi);
    const bool hyp = ps.sr.trace_free <= gl.tol_residual * scale &&
                     std::max({ps.cs.r_minus_rbar, ps.cs.nabla_hat_a_asym, ps.cs.zw_skew}) <= gl.tol_residual * scale;
    if (hyp) ps.id = identity_residuals(geo, c, gl.tol_residual * scale);
    ps.ric.add(min_relative_eigenvalue(c.ric, geo.g()));
    ps.ric.add(max_relative_eigenvalue(c.ric, geo.g()));
    ps.ric_bar.add(min_relative_eigenvalue(c.ric_bar, geo.g()));
    ps.ric_bar.add(max_relative_eigenvalue(c.ric_bar, geo.g()));
    ps.ric_hat.add(min_relative_eigenvalue(c.ric_hat, geo.g()));
    ps.ric_hat.add(max_relative_eigenvalue(c.ric_hat, geo.g()));
    ps.rho.add(c.rho);
    ps.rho_bar.add(c.rho_bar);
    ps.rho_hat.add(c.rho_hat);
    ps.psi.add(psi);
    const SectionalRange sec = sectional_range(geo, c, gl.planes, splitmix64(gl.seed + i));
    ps.sectional.add(sec.min);
    ps.sectional.add(sec.max);
    return ps;
  });

  VerificationReport rep("describe", gl.seed, gl.tol_residual, gl.tol_slack);
  const std::size_t np = points.size();
  double codazzi = 0.0, trace = 0.0, dual = 0.0;
  ConjugateSymmetryReport cs;
  IdentityResiduals id;
  id.eq15_gap = std::numeric_limits<double>::infinity();
  std::size_t id_points = 0;
  Range ric, ric_bar, ric_hat, rho, rho_bar, rho_hat, sectional, psi;
  for (const auto& r : rows) {
    codazzi = std::max(codazzi, r.sr.codazzi);
    trace = std::max(trace, r.sr.trace_free);
    dual = std::max(dual, r.dual_route);
    cs.r_minus_rbar = std::max(cs.r_minus_rbar, r.cs.r_minus_rbar);
    cs.nabla_hat_a_asym = std::max(cs.nabla_hat_a_asym, r.cs.nabla_hat_a_asym);
    cs.zw_skew = std::max(cs.zw_skew, r.cs.zw_skew);
    if (r.id) {
      ++id_points;
      id.eq10 = std::max(id.eq10, r.id->eq10);
      id.eq12 = std::max(id.eq12, r.id->eq12);
      id.eq17 = std::max(id.eq17, r.id->eq17);
      id.eq15_gap = std::min(id.eq15_gap, r.id->eq15_gap);
    }
    ric.add(r.ric);
    ric_bar.add(r.ric_bar);
    ric_hat.add(r.ric_hat);
    rho.add(r.rho);
    rho_bar.add(r.rho_bar);
    rho_hat.add(r.rho_hat);
    sectional.add(r.sectional);
    psi.add(r.psi);
  }
  rep.expect_at_most("structure.codazzi", codazzi, gl.tol_residual, np);
  rep.expect_at_most("curvature.dual_route", dual, gl.tol_residual, np);
  rep.note("structure.trace_free", trace).samples = np;
  rep.note("conjugate_symmetry.r_minus_rbar", cs.r_minus_rbar).samples = np;
  rep.note("conjugate_symmetry.nabla_hat_a_asym", cs.nabla_hat_a_asym).samples = np;
  rep.note("conjugate_symmetry.zw_skew", cs.zw_skew).samples = np;
  if (id_points > 0) {
    rep.expect_at_most("identity.curvature_sum", id.eq10, gl.tol_residual, id_points);
    rep.expect_at_most("identity.ricci_sum", id.eq12, gl.tol_residual, id_points);
    rep.expect_at_most("identity.scalar", id.eq17, gl.tol_residual, id_points);
    rep.expect_at_least("identity.ricci_gap_min_eigenvalue", id.eq15_gap, -gl.tol_residual, id_points);
  }
  rep.data["structure"] = structure_json(s);
  rep.data["points"] = np;
  rep.data["identity_points"] = id_points;
  rep.data["planes_per_point"] = gl.planes;
  rep.data["psi"] = psi.json();
  rep.data["ricci_eigenvalues"] = ric.json();
  rep.data["ricci_bar_eigenvalues"] = ric_bar.json();
  rep.data["ricci_hat_eigenvalues"] = ric_hat.json();
  rep.data["scalar"] = rho.json();
  rep.data["scalar_bar"] = rho_bar.json();
  rep.data["scalar_hat"] = rho_hat.json();
  rep.data["sectional"] = sectional.json();
  return rep;
}

VerificationReport cmd_crucial(std::size_t n, double h3, double eps, std::size_t samples, const Globals& gl) {
  VerificationReport rep("verify crucial", gl.seed, gl.tol_residual, gl.tol_slack);
  const SweepResult r = crucial_sweep(n, h3, eps, samples, gl.seed, gl.threads, gl.tol_slack);
  rep.expect_no_violations("crucial.relative_slack", r.violations, r.samples, r.min_relative_slack, -gl.tol_slack);
  rep.data = {{"n", n}, {"h3", h3}, {"eps", eps}, {"samples", r.samples}, {"violations", r.violations},
              {"min_slack", r.min_slack}, {"min_relative_slack", r.min_relative_slack}};
  return rep;
}

VerificationReport cmd_nomizu(std::size_t n, std::size_t samples, const Globals& gl) {
  VerificationReport rep("verify nomizu", gl.seed, gl.tol_residual, gl.tol_slack);
  const NomizuSuiteResult r = nomizu_sweep(n, samples, gl.seed, gl.threads, gl.tol_slack);
  rep.expect_no_violations("nomizu.relative_gap", r.violations, r.samples, r.min_relative_gap, -gl.tol_slack);
  rep.data = {{"n", n}, {"samples", r.samples}, {"violations", r.violations}, {"min_gap", r.min_gap},
              {"min_relative_gap", r.min_relative_gap}};
  return rep;
}

VerificationReport cmd_gallery(const Globals& gl) {
  VerificationReport rep = gallery_verification(gl.tol_residual, gl.threads);
  rep.seed = gl.seed;
  rep.tol_slack = gl.tol_slack;
  return rep;
}

VerificationReport cmd_section4(const std::string& path, std::size_t restarts, const Globals& gl) {
  const StatStructure s = load(path, gl);
  const auto points = s.chart().grid_points();
  struct Row {
    CubicMaximum m;
    MaximizerChecks mc;
    DeltaPhiCheck dp;
    double hyp = 0.0;
  };
  const auto rows = parallel_map(points.size(), gl.threads, [&](std::size_t i) {
    const std::uint64_t seed = splitmix64(gl.seed + i);
    const LocalGeometry geo = local_geometry(s, points[i]);
    const CurvatureBundle c = curvature_bundle(geo);
    const StructureResiduals sr = structure_residuals(geo);
    const ConjugateSymmetryReport cs = conjugate_symmetry_report(geo, c);
    Row r;
    r.hyp = std::max({sr.trace_free, cs.r_minus_rbar, cs.nabla_hat_a_asym, cs.zw_skew});
    r.m = max_cubic_direction(s, points[i], restarts, seed);
    r.mc = maximizer_checks(s, points[i], r.m.v);
    r.dp = delta_phi_check(s, points[i], gl.planes, seed);
    return r;
  });

  VerificationReport rep("verify section4", gl.seed, gl.tol_residual, gl.tol_slack);
  const std::size_t np = points.size();
  double hyp = 0.0, eig = 0.0, idk = 0.0, idr = 0.0;
  double gap = std::numeric_limits<double>::infinity();
  double rel_slack = std::numeric_limits<double>::infinity();
  std::size_t slack_violations = 0, unconverged = 0;
  ordered_json list = ordered_json::array();
  for (std::size_t i = 0; i < np; ++i) {
    const Row& r = rows[i];
    hyp = std::max(hyp, r.hyp);
    eig = std::max(eig, r.mc.eigvec_residual);
    idk = std::max(idk, r.mc.identity_k_residual);
    idr = std::max(idr, r.mc.identity_r_residual);
    for (double g : r.mc.lambda_gaps) gap = std::min(gap, g);
    if (r.mc.lambda_gaps.empty()) gap = std::min(gap, 0.0);
    const double rs = r.dp.slack / (1.0 + std::abs(r.dp.rhs));
    rel_slack = std::min(rel_slack, rs);
    if (rs < -gl.tol_slack) ++slack_violations;
    if (!r.m.converged) ++unconverged;
    ordered_json bound = nullptr;
    if (r.dp.big_n <= 0.0) bound = cubic_sup_bound(s.dim(), r.dp.big_n);
    list.push_back({{"point", points[i]},
                    {"v", r.m.v},
                    {"phi", r.m.value},
                    {"lambdas", r.mc.lambdas},
                    {"sectional_min", r.dp.big_n},
                    {"delta_phi", r.dp.lhs},
                    {"delta_phi_rhs", r.dp.rhs},
                    {"phi_bound", bound}});
  }
  rep.expect_at_most("hypotheses.trace_free_conjugate_symmetric", hyp, gl.tol_residual, np);
  rep.expect_at_most("maximizer.eigenvector_residual", eig, gl.tol_residual, np);
  rep.expect_at_least("maximizer.lambda_gap_min", gap, -gl.tol_residual, np);
  rep.expect_at_most("identity.bracket_term", idk, gl.tol_residual, np);
  rep.expect_at_most("identity.curvature_term", idr, gl.tol_residual, np);
  rep.expect_no_violations("delta_phi.relative_slack", slack_violations, np, rel_slack, -gl.tol_slack);
  rep.note("maximizer.unconverged_points", static_cast<double>(unconverged)).samples = np;
  rep.data["structure"] = structure_json(s);
  rep.data["restarts"] = restarts;
  rep.data["planes_per_point"] = gl.planes;
  rep.data["points"] = std::move(list);
  return rep;
}

VerificationReport cmd_bounds(std::size_t n, std::optional<double> h3, std::optional<double> eps,
                              std::optional<double> h1, std::optional<double> h2, const Globals& gl) {
  VerificationReport rep("bounds", gl.seed, gl.tol_residual, gl.tol_slack);
  CurvaturePinch pinch;
  if (h1 || h2) {
    if (!h1 || !h2 || h3 || eps) throw Error(ErrorCode::InvalidPinch, "give either --h3/--eps or --h1/--h2");
    pinch = CurvaturePinch::from_h1_h2(n, *h1, *h2);
  } else {
    if (!h3) throw Error(ErrorCode::InvalidPinch, "--h3 is required");
    pinch = CurvaturePinch::from_h3(n, *h3, eps.value_or(0.0));
  }
  const BoundsWindows w = bounds_windows(pinch);
  const BoundsWindows w2 = bounds_windows_h1h2(n, pinch.h1, pinch.h2);
  const double agree = std::max({std::abs(w.ricci_lo - w2.ricci_lo), std::abs(w.ricci_hi - w2.ricci_hi),
                                 std::abs(w.scalar_lo - w2.scalar_lo), std::abs(w.scalar_hi - w2.scalar_hi)});
  rep.expect_at_most("windows.parametrizations_agree", agree, 1e-12);
  rep.data = {{"n", n},
              {"h1", pinch.h1},
              {"h2", pinch.h2},
              {"h3", pinch.h3},
              {"eps", pinch.eps},
              {"sectional_window", {pinch.window_lo(), pinch.window_hi()}},
              {"ricci_window", {w.ricci_lo, w.ricci_hi}},
              {"scalar_window", {w.scalar_lo, w.scalar_hi}},
              {"psi_bound", psi_sup_bound(n, pinch.h3)}};
  return rep;
}

VerificationReport cmd_witness(const std::string& path, const Globals& gl) {
  const StatStructure s = load(path, gl);
  WitnessOptions wo;
  wo.residual_tol = gl.tol_residual;
  wo.threads = gl.threads;
  VerificationReport rep = witness_report(s, wo);
  rep.seed = gl.seed;
  rep.tol_slack = gl.tol_slack;
  rep.data["structure"] = structure_json(s);
  return rep;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Curvature checks for statistical structures", "statlab"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);
  app.fallthrough();

  Globals gl;
  std::size_t grid = 0;
  app.add_option("--tol-residual", gl.tol_residual, "Residual tolerance")->capture_default_str();
  app.add_option("--tol-slack", gl.tol_slack, "Relative slack tolerance")->capture_default_str();
  app.add_option("--grid", grid, "Samples per axis, overriding the spec")->check(CLI::Range(2, 1000));
  app.add_option("--seed", gl.seed, "Random seed")->capture_default_str();
  app.add_option("--threads", gl.threads, "Worker threads, 0 for all cores")->capture_default_str();
  app.add_option("--planes", gl.planes, "Random planes per point for sectional sampling")->capture_default_str();
  app.add_flag("--pretty", gl.pretty, "Print a table instead of JSON");
  app.add_flag("--no-timing", gl.no_timing, "Omit the timing block from JSON");
  app.add_option("--out", gl.out, "Write the JSON report to this file");

  std::string spec_path;
  std::size_t n = 0, crucial_samples = 100000, nomizu_samples = 10000, restarts = 32;
  double h3v = 0.0, epsv = 0.0, h1v = 0.0, h2v = 0.0;

  auto* describe = app.add_subcommand("describe", "Residuals and curvature summaries over the grid");
  describe->add_option("spec", spec_path, "Structure spec file")->required();

  auto* verify = app.add_subcommand("verify", "Verification suites");
  verify->require_subcommand(1);
  verify->fallthrough();
  auto* crucial = verify->add_subcommand("crucial", "Randomized sweep of the crucial spectral inequality");
  crucial->add_option("--n", n, "Dimension")->required()->check(CLI::Range(2, 64));
  crucial->add_option("--h3", h3v, "H3")->required();
  crucial->add_option("--eps", epsv, "Pinch width")->required();
  crucial->add_option("--samples", crucial_samples, "Sample count")->capture_default_str();
  auto* nomizu = verify->add_subcommand("nomizu", "Random trace-free cubic forms against the algebraic inequality");
  nomizu->add_option("--n", n, "Dimension")->required()->check(CLI::Range(2, 16));
  nomizu->add_option("--samples", nomizu_samples, "Sample count")->capture_default_str();
  auto* gallery = verify->add_subcommand("gallery", "Acceptance checks of the built-in fixtures");
  auto* section4 = verify->add_subcommand("section4", "Cubic maximizer pipeline over the grid");
  section4->add_option("spec", spec_path, "Structure spec file")->required();
  section4->add_option("--restarts", restarts, "Optimizer restarts per point")->capture_default_str();

  auto* bounds = app.add_subcommand("bounds", "Ricci and scalar windows from a pinch");
  bounds->add_option("--n", n, "Dimension")->required()->check(CLI::Range(2, 1000000));
  auto* o_h3 = bounds->add_option("--h3", h3v, "H3");
  auto* o_eps = bounds->add_option("--eps", epsv, "Pinch width");
  auto* o_h1 = bounds->add_option("--h1", h1v, "Upper sectional bound");
  auto* o_h2 = bounds->add_option("--h2", h2v, "Lower sectional bound");

  auto* witness = app.add_subcommand("witness", "Conjugate symmetry and projective witnesses");
  witness->add_option("spec", spec_path, "Structure spec file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  if (grid != 0) gl.grid = grid;

  try {
    const auto start = std::chrono::steady_clock::now();
    VerificationReport rep;
    if (*describe) {
      rep = cmd_describe(spec_path, gl);
    } else if (*crucial) {
      rep = cmd_crucial(n, h3v, epsv, crucial_samples, gl);
    } else if (*nomizu) {
      rep = cmd_nomizu(n, nomizu_samples, gl);
    } else if (*gallery) {
      rep = cmd_gallery(gl);
    } else if (*section4) {
      rep = cmd_section4(spec_path, restarts, gl);
    } else if (*bounds) {
      auto opt = [](CLI::Option* o, double v) { return o->count() ? std::optional<double>(v) : std::nullopt; };
      rep = cmd_bounds(n, opt(o_h3, h3v), opt(o_eps, epsv), opt(o_h1, h1v), opt(o_h2, h2v), gl);
    } else if (*witness) {
      rep = cmd_witness(spec_path, gl);
    }
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    rep.finalize();

    const std::string text = rep.to_json(!gl.no_timing).dump(2) + "\n";
    if (!gl.out.empty()) {
      std::ofstream f(gl.out, std::ios::binary);
      if (!f) {
        err << "error: cannot write " << gl.out << "\n";
        return 2;
      }
      f << text;
    }
    if (gl.pretty) {
      out << rep.to_table();
    } else if (gl.out.empty()) {
      out << text;
    }
    return rep.passed() ? 0 : 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return is_input_error(e.code()) ? 2 : 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace statlab::cli
