#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>

#include "statlab/curvature.hpp"
#include "statlab/error.hpp"
#include "statlab/gallery.hpp"
#include "statlab/spec_file.hpp"

using namespace statlab;

namespace {

FixtureSpec named(const char* name, std::size_t n, double c = 1.0) {
  FixtureSpec f;
  f.name = name;
  f.n = n;
  f.c = c;
  return f;
}

std::string spec_error(const std::string& text) {
  try {
    parse_structure_spec(text, "t.json");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SpecFile);
    return e.what();
  }
  FAIL("no error thrown");
  return {};
}

}  // namespace

TEST_CASE("fixture builders") {
  const StatStructure lin = build(named("linear_distinct", 4));
  const FieldData f = evaluate_fields(lin, std::vector<double>{1, 2, 3, 4}, 0);
  CHECK(f.a(0, 1, 2) == 4.0);
  CHECK(f.a(1, 2, 3) == 1.0);
  CHECK(f.a(0, 0, 1) == 0.0);
  const StatStructure lin5 = build(named("linear_distinct", 5));
  CHECK(evaluate_fields(lin5, std::vector<double>{1, 2, 3, 4, 5}, 0).a(0, 1, 2) == 9.0);
  for (const auto& name : fixture_names()) {
    const std::size_t n = name == "hyperbolic_plane" ? 2 : 4;
    const StatStructure s = build(named(name.c_str(), n));
    for (const auto& p : s.chart().grid_points()) {
      const StructureResiduals r = structure_residuals(s, p);
      CHECK(r.codazzi <= 1e-10);
      CHECK(r.trace_free <= 1e-10);
    }
  }
  const StatStructure triv = build(named("trivial", 3));
  CHECK(triv.cubic_is_zero());
  CHECK(triv.chart().lo(0) == -1.0);
  CHECK(lin.chart().lo(0) == 1.0);
  const StatStructure hyp = build(named("hyperbolic_plane", 2));
  CHECK(hyp.chart().lo(1) == 1.0);
  CHECK(hyp.chart().hi(1) == 3.0);
}

TEST_CASE("fixture validation") {
  const auto code = [](FixtureSpec f) {
    try {
      build(f);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Syntax;
  };
  CHECK(code(named("nope", 3)) == ErrorCode::InvalidSpec);
  CHECK(code(named("constant_distinct", 2)) == ErrorCode::InvalidSpec);
  CHECK(code(named("constant_distinct", 3, 0.0)) == ErrorCode::InvalidSpec);
  CHECK(code(named("hyperbolic_plane", 3)) == ErrorCode::InvalidSpec);
  FixtureSpec f = named("linear_distinct", 3);
  f.lo = std::vector<double>{-1, 1, 1};
  f.hi = std::vector<double>{1, 2, 2};
  CHECK(code(f) == ErrorCode::InvalidSpec);
  FixtureSpec h = named("hyperbolic_plane", 2);
  h.lo = std::vector<double>{0, -1};
  h.hi = std::vector<double>{1, 1};
  CHECK(code(h) == ErrorCode::InvalidSpec);
}

TEST_CASE("alpha transform") {
  const StatStructure s = build(named("constant_distinct", 4));
  CHECK(alpha_transform(s, 0.0).cubic_is_zero());
  const StatStructure same = alpha_transform(s, 1.0);
  const std::vector<double> p{0.1, 0.2, 0.3, 0.4};
  CHECK(max_abs_diff(evaluate_fields(same, p, 0).a, evaluate_fields(s, p, 0).a) == 0.0);
  const FieldData f = evaluate_fields(alpha_transform(s, -1.5), p, 0);
  CHECK(f.a(0, 1, 2) == -1.5);
  const ConjugateSymmetryReport cs = conjugate_symmetry_report(alpha_transform(build(named("linear_distinct", 4)), 3.0),
                                                               std::vector<double>{1.2, 1.4, 1.6, 1.8});
  CHECK(cs.nabla_hat_a_asym <= 1e-12);
}

TEST_CASE("witness reports") {
  const VerificationReport pos = witness_report(build(named("constant_distinct", 4)));
  CHECK(pos.verdict == "conjugate symmetric, not projectively flat");
  CHECK(pos.passed());
  CHECK(pos.checks.back().value == doctest::Approx(1.0));
  const VerificationReport lin = witness_report(build(named("linear_distinct", 4)));
  CHECK(lin.verdict == "conjugate symmetric, not projectively flat");
  const VerificationReport triv = witness_report(build(named("trivial", 3)));
  CHECK(triv.verdict == "conjugate symmetric, all witnesses vanish");
  CHECK(triv.checks.back().value == 0.0);
  const VerificationReport bad = witness_report(perturb_cubic(build(named("constant_distinct", 3))));
  CHECK(bad.verdict == "not conjugate symmetric");
  CHECK_FALSE(bad.passed());
  CHECK_THROWS_AS(witness_report(build(named("hyperbolic_plane", 2))), Error);
}

TEST_CASE("conjugate symmetric suite") {
  const auto suite = conjugate_symmetric_suite(0);
  CHECK(suite.size() == 20);
  std::size_t distinct_dims = 0;
  for (std::size_t n = 2; n <= 6; ++n) {
    for (const auto& s : suite) {
      if (s.structure.dim() == n) {
        ++distinct_dims;
        break;
      }
    }
  }
  CHECK(distinct_dims == 5);
}

TEST_CASE("gallery verification passes") {
  const VerificationReport r = gallery_verification();
  for (const auto& c : r.checks) {
    CAPTURE(c.name);
    CHECK(c.passed);
  }
}

TEST_CASE("spec files: fixtures and explicit components") {
  const StructureSpec a = parse_structure_spec(R"({"dimension": 4, "grid": 2, "alpha": 2,
      "fixture": {"name": "constant_distinct", "params": {"c": 0.5}}})");
  const StatStructure s = to_structure(a);
  CHECK(s.chart().grid(0) == 2);
  CHECK(evaluate_fields(s, std::vector<double>{0, 0, 0, 0}, 0).a(3, 1, 0) == 1.0);
  CHECK(to_structure(a, 3).chart().grid(2) == 3);

  const StructureSpec b = parse_structure_spec(R"({"dimension": 2, "domain": [[-1, 1], [1, 3]],
      "grid": [2, 4], "explicit": {"g": {"1,1": "1/x2^2", "2,2": "1/x2^2"}, "A": {"2, 1, 1": "x1", "2,2,2": 0.5}}})");
  const StatStructure t = to_structure(b);
  CHECK(t.chart().grid(1) == 4);
  CHECK(t.chart().lo(1) == 1.0);
  const FieldData f = evaluate_fields(t, std::vector<double>{0.5, 2.0}, 0);
  CHECK(f.g(0, 0) == 0.25);
  CHECK(f.a(0, 1, 0) == 0.5);
  CHECK(f.a(1, 1, 1) == 0.5);

  const StructureSpec c = parse_structure_spec(R"({"dimension": 3, "domain": {"lo": [0, 0, 0], "hi": [1, 2, 3]},
      "explicit": {}})");
  const StatStructure u = to_structure(c);
  CHECK(u.chart().hi(2) == 3.0);
  CHECK(u.chart().grid(0) == 3);
  CHECK(u.cubic_is_zero());
}

TEST_CASE("spec file errors name a position or a path") {
  CHECK(spec_error("{\n  \"dimension\": 3,\n  \"grid\": ]\n}").starts_with("t.json:3:11:"));
  CHECK(spec_error(R"({"dimension": 3})").find("exactly one of fixture or explicit") != std::string::npos);
  CHECK(spec_error(R"({"dimension": 3, "explicit": {"A": {"1,2,3": "1", "3,2,1": "2"}}})")
            .find("/explicit/A/3,2,1") != std::string::npos);
  CHECK(spec_error(R"({"dimension": 3, "explicit": {"g": {"1,4": "1"}}})").find("/explicit/g/1,4") != std::string::npos);
  CHECK(spec_error(R"({"dimension": 3, "explicit": {"g": {"1,2,3": "1"}}})").find("comma-separated") != std::string::npos);
  CHECK(spec_error(R"({"dimension": 3, "fixture": {"name": "nope"}})").find("/fixture/name") != std::string::npos);
  CHECK(spec_error(R"({"dimension": 3, "fixture": {"name": "trivial"}, "colour": 1})").find("/colour") !=
        std::string::npos);
  CHECK(spec_error(R"({"dimension": 2, "domain": [[1, 0], [0, 1]], "explicit": {}})").find("empty interval") !=
        std::string::npos);
  CHECK(spec_error(R"({"dimension": 2, "grid": 1, "explicit": {}})").find("/grid") != std::string::npos);
  try {
    to_structure(parse_structure_spec(R"({"dimension": 2, "explicit": {"A": {"1,1,2": "x1 +* 2"}}})"));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SpecFile);
    CHECK(std::string(e.what()).find("/explicit/A/1,1,2") != std::string::npos);
    CHECK(std::string(e.what()).find("offset 4") != std::string::npos);
  }
  CHECK_THROWS_AS(load_structure_spec("/nonexistent/spec.json"), Error);
}
