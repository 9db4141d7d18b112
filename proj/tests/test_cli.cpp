#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "app.hpp"
#include "json.hpp"

namespace {

struct Result {
  int status;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "statlab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int status = statlab::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

std::string data(const char* name) { return std::string(STATLAB_TEST_DATA) + "/" + name; }

nlohmann::json check_named(const nlohmann::json& report, const std::string& name) {
  for (const auto& c : report["checks"]) {
    if (c["name"] == name) return c;
  }
  FAIL("missing check " << name);
  return {};
}

}  // namespace

TEST_CASE("bounds") {
  const Result r = run({"bounds", "--n", "4", "--h3", "-1", "--eps", "0"});
  REQUIRE(r.status == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["tool"] == "statlab");
  CHECK(j["data"]["ricci_window"] == nlohmann::json::array({-3.0, 9.0}));
  CHECK(j["data"]["scalar_window"] == nlohmann::json::array({-12.0, 0.0}));
  CHECK(j["data"]["psi_bound"] == 12.0);
  const Result h = run({"bounds", "--n", "4", "--h1", "-1", "--h2", "-1", "--no-timing"});
  REQUIRE(h.status == 0);
  CHECK(nlohmann::json::parse(h.out)["data"]["ricci_window"] == j["data"]["ricci_window"]);
  CHECK(run({"bounds", "--n", "4", "--h3", "1", "--eps", "0"}).status == 2);
  CHECK(run({"bounds", "--n", "4", "--h1", "1"}).status == 2);
}

TEST_CASE("verify crucial and nomizu") {
  const Result r = run({"verify", "crucial", "--n", "3", "--h3", "0", "--eps", "0", "--samples", "1000", "--seed", "7"});
  CHECK(r.status == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["verdict"] == "pass");
  CHECK(j["seed"] == 7);
  CHECK(j["data"]["violations"] == 0);
  CHECK(j["data"]["samples"] == 1000);
  const Result a = run({"verify", "nomizu", "--n", "4", "--samples", "3000", "--threads", "1", "--no-timing"});
  const Result b = run({"verify", "nomizu", "--n", "4", "--samples", "3000", "--threads", "4", "--no-timing"});
  CHECK(a.status == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("describe the constant example") {
  const Result r = run({"describe", data("constant4.json"), "--grid", "2", "--planes", "50"});
  REQUIRE(r.status == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["data"]["scalar_hat"][0] == 0.0);
  CHECK(j["data"]["scalar_hat"][1] == 0.0);
  CHECK(j["data"]["scalar"][0].get<double>() == doctest::Approx(-24.0));
  CHECK(j["data"]["sectional"][0].get<double>() <= -2.0);
  CHECK(j["data"]["sectional"][1].get<double>() >= -2.0);
  CHECK(j["data"]["points"] == 16);
  CHECK(check_named(j, "identity.scalar")["passed"] == true);
}

TEST_CASE("witness and section 4") {
  const Result w = run({"witness", data("constant4.json"), "--grid", "2"});
  CHECK(w.status == 0);
  CHECK(nlohmann::json::parse(w.out)["verdict"] == "conjugate symmetric, not projectively flat");
  const Result bad = run({"witness", data("not_symmetric.json")});
  CHECK(bad.status == 1);
  CHECK(nlohmann::json::parse(bad.out)["verdict"] == "not conjugate symmetric");
  const Result s4 = run({"verify", "section4", data("constant3.json")});
  CHECK(s4.status == 0);
  const auto j = nlohmann::json::parse(s4.out);
  CHECK(j["data"]["points"][0]["phi"].get<double>() == doctest::Approx(2.0 / std::sqrt(3.0)));
  CHECK(run({"verify", "section4", data("not_symmetric.json")}).status == 1);
}

TEST_CASE("pretty output and report files") {
  const Result r = run({"bounds", "--n", "3", "--h3", "-1", "--eps", "0.5", "--pretty"});
  CHECK(r.status == 0);
  CHECK(r.out.find("verdict: pass") != std::string::npos);
  const auto path = std::filesystem::temp_directory_path() / "statlab_cli_report.json";
  const Result f = run({"bounds", "--n", "3", "--h3", "-1", "--eps", "0.5", "--out", path.string()});
  CHECK(f.status == 0);
  CHECK(f.out.empty());
  std::ifstream in(path);
  const auto j = nlohmann::json::parse(in);
  CHECK(j["command"] == "bounds");
  CHECK(j.contains("timing"));
  std::filesystem::remove(path);
}

TEST_CASE("usage and spec errors exit with 2") {
  CHECK(run({}).status == 2);
  CHECK(run({"frobnicate"}).status == 2);
  CHECK(run({"verify", "crucial", "--n", "3"}).status == 2);
  const Result syn = run({"describe", data("bad_syntax.json")});
  CHECK(syn.status == 2);
  CHECK(syn.err.find("bad_syntax.json:3:") != std::string::npos);
  const Result dup = run({"witness", data("duplicate_key.json")});
  CHECK(dup.status == 2);
  CHECK(dup.err.find("/explicit/A/") != std::string::npos);
  CHECK(run({"describe", data("missing.json")}).status == 2);
}
