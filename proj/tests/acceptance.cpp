// One line per acceptance criterion: "AC<k> PASS|FAIL <summary>".

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "json.hpp"
#include "statlab/curvature.hpp"
#include "statlab/error.hpp"
#include "statlab/gallery.hpp"
#include "statlab/inequality.hpp"
#include "statlab/parallel.hpp"

using namespace statlab;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  std::string summary;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

FixtureSpec named(const char* name, std::size_t n, double c = 1.0) {
  FixtureSpec f;
  f.name = name;
  f.n = n;
  f.c = c;
  return f;
}

struct Shell {
  int status = -1;
  std::string out;
};

Shell shell(const std::string& args) {
  const std::string cmd = std::string(STATLAB_CLI) + " " + args + " 2>/dev/null";
  Shell r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int st = pclose(pipe);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

// ---------------------------------------------------------------------------

Outcome ac1() {
  constexpr double tol = 1e-10;
  const auto t0 = Clock::now();
  const StatStructure s = build(named("trivial", 3));
  const auto points = s.chart().grid_points();
  double worst = 0.0;
  for (const auto& p : points) {
    const LocalGeometry geo = local_geometry(s, p);
    const CurvatureBundle c = curvature_bundle(geo);
    const StructureResiduals sr = structure_residuals(geo);
    const ConjugateSymmetryReport cs = conjugate_symmetry_report(geo, c);
    const IdentityResiduals id = identity_residuals(geo, c);
    worst = std::max({worst, sr.codazzi, sr.trace_free, cs.r_minus_rbar, cs.nabla_hat_a_asym, cs.zw_skew, id.eq10,
                      id.eq12, id.eq17, std::abs(id.eq15_gap), c.r.max_abs(), c.r_bar.max_abs(), c.r_hat.max_abs(),
                      c.ric.max_abs(), c.ric_hat.max_abs(), std::abs(c.rho), std::abs(c.rho_hat)});
  }
  const double dt = seconds_since(t0);
  return {worst <= tol && dt < 5.0, "trivial n=3: max residual " + fmt(worst) + " <= 1e-10 over " +
                                        std::to_string(points.size()) + " points; " + fmt(dt) + " s < 5 s"};
}

Outcome ac2() {
  const StatStructure s = build(named("hyperbolic_plane", 2));
  std::mt19937_64 rng(2024);
  const Plane plane{{1.0, 0.0}, {0.0, 1.0}};
  constexpr double h = 1e-3;
  const auto fd_gamma = [&](std::span<const double> q) {
    const MetricValue m = metric_at(s, q);
    std::array<TensorValue, 2> dg{fd_partial(s, FieldSelector::Metric, q, 0, h, true),
                                  fd_partial(s, FieldSelector::Metric, q, 1, h, true)};
    TensorValue gamma(2, {Variance::Up, Variance::Down, Variance::Down});
    for (std::size_t l = 0; l < 2; ++l)
      for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
          for (std::size_t m2 = 0; m2 < 2; ++m2)
            gamma(l, i, j) += 0.5 * m.g_inv(l, m2) * (dg[i](m2, j) + dg[j](m2, i) - dg[m2](i, j));
    return gamma;
  };
  double sym = 0.0, fd = 0.0;
  for (int t = 0; t < 100; ++t) {
    const Point p = s.chart().random_point(rng, 0.05);
    const LocalGeometry geo = local_geometry(s, p);
    const CurvatureBundle c = curvature_bundle(geo);
    sym = std::max(sym, std::abs(sectional_from(lower_curvature(c.r_hat, geo.g()), geo.g(), plane) + 1.0));
    TensorValue dgamma(2, {Variance::Down, Variance::Up, Variance::Down, Variance::Down});
    for (std::size_t k = 0; k < 2; ++k) {
      const TensorValue d = fd_partial(s.chart(), fd_gamma, p, k, h, true);
      for (std::size_t l = 0; l < 2; ++l)
        for (std::size_t i = 0; i < 2; ++i)
          for (std::size_t j = 0; j < 2; ++j) dgamma(k, l, i, j) = d(l, i, j);
    }
    const TensorValue r = riemann_from_connection(fd_gamma(p), dgamma);
    fd = std::max(fd, std::abs(sectional_from(lower_curvature(r, geo.g()), geo.g(), plane) + 1.0));
  }
  return {sym <= 1e-9 && fd <= 1e-5,
          "hyperbolic plane, 100 points: symbolic |k+1| " + fmt(sym) + " <= 1e-9, finite-difference |k+1| " + fmt(fd) +
              " <= 1e-5"};
}

Outcome ac3() {
  const StatStructure s = build(named("constant_distinct", 4));
  double rr = 0, wit = 0, sec = 0, rho_hat = 0, rho = 0, eq17 = 0, gap = 1e300;
  const Plane e12{{1, 0, 0, 0}, {0, 1, 0, 0}};
  const auto points = s.chart().grid_points();
  for (const auto& p : points) {
    const LocalGeometry geo = local_geometry(s, p);
    const CurvatureBundle c = curvature_bundle(geo);
    const IdentityResiduals id = identity_residuals(geo, c);
    rr = std::max(rr, (c.r - c.r_bar).max_abs());
    wit = std::max(wit, std::abs(lower_curvature(c.r, geo.g())(0, 1, 1, 2) + 1.0));
    sec = std::max(sec, std::abs(sectional_from(lower_curvature(c.r_cal, geo.g()), geo.g(), e12) + 2.0));
    rho_hat = std::max(rho_hat, std::abs(c.rho_hat));
    rho = std::max(rho, std::abs(c.rho + 24.0));
    eq17 = std::max(eq17, id.eq17);
    gap = std::min(gap, id.eq15_gap);
  }
  const bool ok = rr <= 1e-12 && wit <= 1e-12 && sec <= 1e-12 && rho_hat <= 1e-9 && rho <= 1e-9 && eq17 <= 1e-9 &&
                  gap >= -1e-9;
  return {ok, "constant n=4 c=1: |R-Rbar| " + fmt(rr) + ", |w+1| " + fmt(wit) + ", |k12+2| " + fmt(sec) +
                  " (<= 1e-12); |rho-hat| " + fmt(rho_hat) + ", |rho+24| " + fmt(rho) + ", scalar identity " +
                  fmt(eq17) + " (<= 1e-9); Ric-hat - Ric min eigenvalue " + fmt(gap) + " >= -1e-9"};
}

Outcome ac4() {
  const auto t0 = Clock::now();
  std::size_t violations = 0, runs = 0;
  double worst = 1e300;
  for (std::size_t n : {2u, 3u, 4u, 5u})
    for (double h3 : {0.0, -0.5, -2.0})
      for (double eps : {0.0, 0.3, 1.0}) {
        const SweepResult r = crucial_sweep(n, h3, eps, 100000, 1000 + runs, 0, 1e-9);
        violations += r.violations;
        worst = std::min(worst, r.min_relative_slack);
        ++runs;
      }
  const double dt = seconds_since(t0);
  return {violations == 0 && dt < 60.0, std::to_string(runs) + " configurations x 1e5 samples: " +
                                            std::to_string(violations) + " violations below -1e-9 (min relative slack " +
                                            fmt(worst) + "); " + fmt(dt) + " s < 60 s"};
}

Outcome ac5() {
  const auto t0 = Clock::now();
  std::size_t violations = 0;
  double worst = 1e300;
  for (std::size_t n = 2; n <= 5; ++n) {
    const NomizuSuiteResult r = nomizu_sweep(n, 10000, 500 + n, 0, 1e-9);
    violations += r.violations;
    worst = std::min(worst, r.min_relative_gap);
  }
  const double dt = seconds_since(t0);
  return {violations == 0 && dt < 30.0, "4 x 1e4 trace-free forms: " + std::to_string(violations) +
                                            " gaps below -1e-9 (1 + psi^2) (min relative gap " + fmt(worst) + "); " +
                                            fmt(dt) + " s < 30 s"};
}

Outcome ac6() {
  const bool exact = psi_sup_bound(3, -2.0) == 12.0;
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<int> dn(2, 8);
  std::uniform_real_distribution<double> dh(-5.0, 0.0);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = static_cast<std::size_t>(dn(rng));
    const double h3 = dh(rng);
    const double want = -static_cast<double>(n * (n - 1)) * h3;
    worst = std::max(worst, std::abs(largest_root(psi_inequality_coefficients(n, h3)) - want));
  }
  return {exact && worst <= 1e-12, std::string("psi_sup_bound(3,-2) = 12 ") + (exact ? "exactly" : "NOT exactly") +
                                       "; 20 random (n, H3): max |root - (-n(n-1)H3)| " + fmt(worst) + " <= 1e-12"};
}

Outcome ac7() {
  const Shell a = shell("bounds --n 4 --h3 -1 --eps 0 --no-timing");
  if (a.status != 0) return {false, "bounds command exited with " + std::to_string(a.status)};
  const auto j = nlohmann::json::parse(a.out);
  const auto ric = j["data"]["ricci_window"];
  const auto sc = j["data"]["scalar_window"];
  const bool windows = ric[0] == -3.0 && ric[1] == 9.0 && sc[0] == -12.0 && sc[1] == 0.0;
  double worst = 0.0;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + static_cast<std::size_t>(t % 6);
    const CurvaturePinch p = CurvaturePinch::from_h3(n, -u(rng), u(rng));
    const BoundsWindows w1 = bounds_windows(p);
    const BoundsWindows w2 = bounds_windows_h1h2(n, p.h1, p.h2);
    worst = std::max({worst, std::abs(w1.ricci_lo - w2.ricci_lo), std::abs(w1.ricci_hi - w2.ricci_hi),
                      std::abs(w1.scalar_lo - w2.scalar_lo), std::abs(w1.scalar_hi - w2.scalar_hi)});
  }
  const Shell b = shell("bounds --n 4 --h1 -1 --h2 -1 --no-timing");
  const bool cli_same = b.status == 0 && nlohmann::json::parse(b.out)["data"]["ricci_window"] == ric &&
                        nlohmann::json::parse(b.out)["data"]["scalar_window"] == sc;
  return {windows && cli_same && worst <= 1e-12,
          "CLI windows ricci [" + fmt(ric[0]) + ", " + fmt(ric[1]) + "], scalar [" + fmt(sc[0]) + ", " + fmt(sc[1]) +
              "]; H1/H2 form " + (cli_same ? "identical" : "DIFFERENT") + "; 100 random reparametrizations max diff " +
              fmt(worst) + " <= 1e-12"};
}

Outcome ac8() {
  bool ok = true;
  std::ostringstream os;
  for (double c : {0.5, 1.0, 2.0}) {
    const StatStructure s = build(named("constant_distinct", 4, c));
    const EmpiricalPinch ep = empirical_pinch(s, 10000, 8, 0);
    const BoundsWindows w = bounds_windows(ep.pinch);
    double ric_lo = 1e300, ric_hi = -1e300, rho_lo = 1e300, rho_hi = -1e300, slack = 1e300;
    const auto points = s.chart().grid_points();
    for (std::size_t i = 0; i < points.size(); ++i) {
      const LocalGeometry geo = local_geometry(s, points[i]);
      const CurvatureBundle cb = curvature_bundle(geo);
      ric_lo = std::min(ric_lo, min_relative_eigenvalue(cb.ric_hat, geo.g()));
      ric_hi = std::max(ric_hi, max_relative_eigenvalue(cb.ric_hat, geo.g()));
      rho_lo = std::min(rho_lo, cb.rho_hat);
      rho_hi = std::max(rho_hi, cb.rho_hat);
      slack = std::min(slack, delta_psi_check(s, points[i], 100, splitmix64(i)).slack);
    }
    const bool inside = w.ricci_lo <= ric_lo && ric_hi <= w.ricci_hi && w.scalar_lo <= rho_lo && rho_hi <= w.scalar_hi;
    ok = ok && inside && slack >= 0.0;
    os << "c=" << c << ": H1 " << fmt(ep.pinch.h1) << " H2 " << fmt(ep.pinch.h2) << ", Ric-hat [" << fmt(ric_lo) << ", "
       << fmt(ric_hi) << "] in [" << fmt(w.ricci_lo) << ", " << fmt(w.ricci_hi) << "], rho-hat in [" << fmt(w.scalar_lo)
       << ", " << fmt(w.scalar_hi) << "], min Delta-psi slack " << fmt(slack) << "; ";
  }
  return {ok, os.str()};
}

Outcome ac9() {
  const StatStructure s = build(named("constant_distinct", 3));
  const std::vector<double> p{0.0, 0.0, 0.0};
  const CubicMaximum m = max_cubic_direction(s, p, 32, 0);
  // dense grid on the sphere for 6 u1 u2 u3, then local grid refinement
  const auto f = [](double t, double ph) { return 6.0 * std::sin(t) * std::sin(t) * std::cos(ph) * std::sin(ph) * std::cos(t); };
  double best = -1e300, bt = 0, bp = 0;
  const int nt = 1000, np = 2000;
  for (int i = 0; i <= nt; ++i)
    for (int j = 0; j < np; ++j) {
      const double t = M_PI * i / nt, ph = 2 * M_PI * j / np, v = f(t, ph);
      if (v > best) best = v, bt = t, bp = ph;
    }
  for (double h = M_PI / nt; h > 1e-12; h *= 0.5)
    for (int di = -1; di <= 1; ++di)
      for (int dj = -1; dj <= 1; ++dj) {
        const double v = f(bt + di * h, bp + dj * h);
        if (v > best) best = v, bt += di * h, bp += dj * h;
      }
  const MaximizerChecks mc = maximizer_checks(s, p, m.v);
  double gap = 1e300;
  for (double g : mc.lambda_gaps) gap = std::min(gap, g);

  std::mt19937_64 rng(9);
  double idk = 0.0, idr = 0.0;
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 2 + static_cast<std::size_t>(t % 4);
    Chart ch(n, std::vector<double>(n, -1.0), std::vector<double>(n, 1.0));
    const StatStructure r = constant_cubic(random_trace_free_cubic(n, rng), ch);
    const std::vector<double> q(n, 0.0);
    const MaximizerChecks c = maximizer_checks(r, q, max_cubic_direction(r, q, 16, static_cast<std::uint64_t>(t)).v);
    idk = std::max(idk, c.identity_k_residual);
    idr = std::max(idr, c.identity_r_residual);
  }
  const double dv = std::abs(m.value - best);
  const double closed = std::abs(m.value - 2.0 / std::sqrt(3.0));
  const bool ok = dv <= 1e-6 && closed <= 1e-6 && mc.eigvec_residual <= 1e-8 && gap >= -1e-8 && idk <= 1e-8 && idr <= 1e-8;
  return {ok, "constant n=3 c=1: max " + fmt(m.value) + " vs grid " + fmt(best) + " (diff " + fmt(dv) +
                  " <= 1e-6, vs 2/sqrt(3) " + fmt(closed) + " <= 1e-6), eigvec residual " + fmt(mc.eigvec_residual) + " <= 1e-8, min lambda1 - 2 lambda_i " +
                  fmt(gap) + " >= -1e-8; 50 random forms: identity residuals " + fmt(idk) + ", " + fmt(idr) +
                  " <= 1e-8"};
}

Outcome ac10() {
  const auto suite = conjugate_symmetric_suite(0);
  double sym = 0.0, pert = 1e300;
  std::size_t mixed = 0;
  const auto classify = [](const ConjugateSymmetryReport& r) {
    int small = 0, large = 0;
    for (double v : {r.r_minus_rbar, r.nabla_hat_a_asym, r.zw_skew}) {
      small += v <= 1e-8;
      large += v >= 1e-4;
    }
    return std::pair{small, large};
  };
  std::uint64_t index = 0;
  for (const auto& [name, s] : suite) {
    for (const auto& p : s.chart().grid_points()) {
      const ConjugateSymmetryReport r = conjugate_symmetry_report(s, p);
      sym = std::max({sym, r.r_minus_rbar, r.nabla_hat_a_asym, r.zw_skew});
      const auto [small, large] = classify(r);
      if (small != 3 && large != 3) ++mixed;
    }
    const StatStructure t = perturb_cubic(s);
    std::mt19937_64 rng(splitmix64(index++));
    for (int k = 0; k < 5; ++k) {
      const Point p = t.chart().random_point(rng);
      const ConjugateSymmetryReport r = conjugate_symmetry_report(t, p);
      pert = std::min({pert, r.r_minus_rbar, r.nabla_hat_a_asym, r.zw_skew});
      const auto [small, large] = classify(r);
      if (small != 3 && large != 3) ++mixed;
    }
  }
  return {sym <= 1e-8 && pert >= 1e-4 && mixed == 0,
          std::to_string(suite.size()) + " symmetric fixtures: max residual " + fmt(sym) + " <= 1e-8; " +
              std::to_string(suite.size()) + " perturbed at 5 random points each: min residual " + fmt(pert) +
              " >= 1e-4; " + std::to_string(mixed) + " mixed verdicts"};
}

Outcome ac11() {
  const StatStructure s = build(named("linear_distinct", 4));
  std::mt19937_64 rng(11);
  double worst = 0.0;
  for (int t = 0; t < 5; ++t) {
    const Point p = s.chart().random_point(rng, 0.1);
    worst = std::max(worst, simons_check(s, p).rel_error);
  }
  return {worst <= 1e-4, "linear n=4, 5 interior points: max relative error " + fmt(worst) + " <= 1e-4"};
}

Outcome ac12() {
  bool ok = true;
  std::ostringstream os;
  const std::array<std::string, 3> commands{"verify crucial --n 4 --h3 -0.5 --eps 0.3 --samples 100000 --seed 99",
                                            "verify nomizu --n 4 --samples 5000 --seed 99",
                                            "verify crucial --n 5 --h3 -2 --eps 1 --samples 50000 --seed 3"};
  for (const auto& cmd : commands) {
    std::string first;
    nlohmann::json ref;
    for (int threads : {1, 2, 4, 7}) {
      const Shell r = shell(cmd + " --no-timing --threads " + std::to_string(threads));
      if (r.status != 0) {
        ok = false;
        os << "'" << cmd << "' exited " << r.status << "; ";
        break;
      }
      const auto j = nlohmann::json::parse(r.out);
      if (threads == 1) {
        ref = j;
        first = r.out;
      } else if (r.out != first || j["data"] != ref["data"]) {
        ok = false;
        os << "'" << cmd << "' differs at " << threads << " threads; ";
      }
    }
  }
  if (ok) os << commands.size() << " verify runs at 1, 2, 4, 7 threads: identical violation counts, min slack and report bytes";
  return {ok, os.str()};
}

}  // namespace

int main() {
  const std::array<std::function<Outcome()>, 12> criteria{ac1, ac2, ac3, ac4, ac5, ac6, ac7, ac8, ac9, ac10, ac11, ac12};
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all = all && o.pass;
    std::cout << "AC" << (i + 1) << ' ' << (o.pass ? "PASS" : "FAIL") << ' ' << o.summary << std::endl;
  }
  return all ? 0 : 1;
}
