#include "statlab/spec_file.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "statlab/error.hpp"

namespace statlab {

namespace {

using nlohmann::json;

class SchemaError {
 public:
  SchemaError(std::string path, std::string message) : path(std::move(path)), message(std::move(message)) {}
  std::string path;
  std::string message;
};

[[noreturn]] void fail(const std::string& path, const std::string& message) { throw SchemaError(path, message); }

double number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

std::size_t count(const json& j, const std::string& path) {
  if (!j.is_number_integer() && !j.is_number_unsigned()) fail(path, "expected a positive integer");
  const auto v = j.get<long long>();
  if (v <= 0) fail(path, "expected a positive integer");
  return static_cast<std::size_t>(v);
}

std::vector<double> numbers(const json& j, const std::string& path, std::size_t n) {
  if (!j.is_array() || j.size() != n) fail(path, "expected an array of " + std::to_string(n) + " numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(number(j[i], path + "/" + std::to_string(i)));
  return out;
}

template <std::size_t R>
std::array<std::size_t, R> parse_key(const std::string& text, std::size_t n, const std::string& path) {
  std::array<std::size_t, R> key{};
  std::size_t pos = 0;
  for (std::size_t r = 0; r < R; ++r) {
    while (pos < text.size() && text[pos] == ' ') ++pos;
    std::size_t v = 0;
    const auto [end, ec] = std::from_chars(text.data() + pos, text.data() + text.size(), v);
    if (ec != std::errc() || end == text.data() + pos) fail(path, "malformed index key");
    pos = static_cast<std::size_t>(end - text.data());
    while (pos < text.size() && text[pos] == ' ') ++pos;
    if (v < 1 || v > n) fail(path, "index " + std::to_string(v) + " outside 1.." + std::to_string(n));
    key[r] = v - 1;
    if (r + 1 < R) {
      if (pos >= text.size() || text[pos] != ',') fail(path, "expected " + std::to_string(R) + " comma-separated indices");
      ++pos;
    }
  }
  if (pos != text.size()) fail(path, "expected " + std::to_string(R) + " comma-separated indices");
  std::sort(key.begin(), key.end());
  return key;
}

std::string escape_pointer(const std::string& key) {
  std::string out;
  for (char ch : key) {
    if (ch == '~') out += "~0";
    else if (ch == '/') out += "~1";
    else out += ch;
  }
  return out;
}

template <std::size_t R>
std::map<std::array<std::size_t, R>, std::string> parse_components(const json& j, std::size_t n, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object of index keys");
  std::map<std::array<std::size_t, R>, std::string> out;
  for (const auto& [k, v] : j.items()) {
    const std::string p = path + "/" + escape_pointer(k);
    const auto key = parse_key<R>(k, n, p);
    std::string src;
    if (v.is_string()) src = v.template get<std::string>();
    else if (v.is_number()) src = v.dump();
    else fail(p, "expected an expression string");
    if (!out.emplace(key, std::move(src)).second) fail(p, "index combination given more than once");
  }
  return out;
}

void check_keys(const json& j, const std::string& path, std::initializer_list<std::string_view> allowed) {
  for (const auto& [k, v] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) fail(path + "/" + escape_pointer(k), "unknown key");
  }
}

StructureSpec from_json(const json& doc) {
  if (!doc.is_object()) fail("", "top level must be an object");
  check_keys(doc, "", {"dimension", "domain", "grid", "alpha", "fixture", "explicit"});
  StructureSpec spec;
  if (!doc.contains("dimension")) fail("/dimension", "missing");
  spec.dimension = count(doc["dimension"], "/dimension");
  const std::size_t n = spec.dimension;
  if (n < 2 || n > expr::kMaxCoordinates) fail("/dimension", "must be between 2 and " + std::to_string(expr::kMaxCoordinates));

  if (doc.contains("domain")) {
    const json& d = doc["domain"];
    if (d.is_object()) {
      check_keys(d, "/domain", {"lo", "hi"});
      if (!d.contains("lo") || !d.contains("hi")) fail("/domain", "needs lo and hi");
      spec.lo = numbers(d["lo"], "/domain/lo", n);
      spec.hi = numbers(d["hi"], "/domain/hi", n);
    } else if (d.is_array()) {
      if (d.size() != n) fail("/domain", "expected " + std::to_string(n) + " intervals");
      std::vector<double> lo, hi;
      for (std::size_t i = 0; i < n; ++i) {
        const auto ab = numbers(d[i], "/domain/" + std::to_string(i), 2);
        lo.push_back(ab[0]);
        hi.push_back(ab[1]);
      }
      spec.lo = std::move(lo);
      spec.hi = std::move(hi);
    } else {
      fail("/domain", "expected {lo, hi} or a list of intervals");
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (!((*spec.lo)[i] < (*spec.hi)[i])) fail("/domain", "empty interval on axis " + std::to_string(i + 1));
    }
  }

  if (doc.contains("grid")) {
    const json& g = doc["grid"];
    std::vector<std::size_t> grid;
    if (g.is_array()) {
      if (g.size() != n) fail("/grid", "expected " + std::to_string(n) + " counts");
      for (std::size_t i = 0; i < n; ++i) grid.push_back(count(g[i], "/grid/" + std::to_string(i)));
    } else {
      grid.assign(n, count(g, "/grid"));
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (grid[i] < 2) fail("/grid", "at least 2 samples per axis");
    }
    spec.grid = std::move(grid);
  }

  if (doc.contains("alpha")) spec.alpha = number(doc["alpha"], "/alpha");

  const bool has_fixture = doc.contains("fixture");
  const bool has_explicit = doc.contains("explicit");
  if (has_fixture == has_explicit) fail("", "exactly one of fixture or explicit is required");

  if (has_fixture) {
    const json& f = doc["fixture"];
    if (!f.is_object()) fail("/fixture", "expected an object");
    check_keys(f, "/fixture", {"name", "params"});
    if (!f.contains("name") || !f["name"].is_string()) fail("/fixture/name", "expected a fixture name");
    FixtureSpec fx;
    fx.name = f["name"].get<std::string>();
    const auto& names = fixture_names();
    if (std::find(names.begin(), names.end(), fx.name) == names.end()) fail("/fixture/name", "unknown fixture '" + fx.name + "'");
    fx.n = n;
    if (f.contains("params")) {
      const json& p = f["params"];
      if (!p.is_object()) fail("/fixture/params", "expected an object");
      check_keys(p, "/fixture/params", {"c", "lo", "hi"});
      if (p.contains("c")) fx.c = number(p["c"], "/fixture/params/c");
      if (p.contains("lo") || p.contains("hi")) {
        if (spec.lo) fail("/fixture/params", "box given both here and in domain");
        if (!p.contains("lo") || !p.contains("hi")) fail("/fixture/params", "needs both lo and hi");
        spec.lo = numbers(p["lo"], "/fixture/params/lo", n);
        spec.hi = numbers(p["hi"], "/fixture/params/hi", n);
      }
    }
    spec.fixture = std::move(fx);
  } else {
    const json& e = doc["explicit"];
    if (!e.is_object()) fail("/explicit", "expected an object");
    check_keys(e, "/explicit", {"g", "A"});
    if (e.contains("g")) spec.metric = parse_components<2>(e["g"], n, "/explicit/g");
    if (e.contains("A")) spec.cubic = parse_components<3>(e["A"], n, "/explicit/A");
  }
  return spec;
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

std::string prefix(std::string_view origin, const std::string& path) {
  return std::string(origin) + ": " + (path.empty() ? "/" : path) + ": ";
}

}  // namespace

std::string key_text(std::span<const std::size_t> key) {
  std::string out;
  for (std::size_t i = 0; i < key.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(key[i] + 1);
  }
  return out;
}

StructureSpec parse_structure_spec(std::string_view text, std::string_view origin) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // e.byte is one past the offending character
    const std::size_t byte = e.byte > 0 ? e.byte - 1 : 0;
    const auto [line, col] = line_column(text, byte);
    std::string msg = e.what();
    if (const auto p = msg.find("syntax error"); p != std::string::npos) msg = msg.substr(p);
    throw Error(ErrorCode::SpecFile, std::string(origin) + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
  }
  try {
    return from_json(doc);
  } catch (const SchemaError& e) {
    throw Error(ErrorCode::SpecFile, prefix(origin, e.path) + e.message);
  }
}

StructureSpec load_structure_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::SpecFile, path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_structure_spec(ss.str(), path);
}

StatStructure to_structure(const StructureSpec& spec, std::optional<std::size_t> grid_override) {
  const std::size_t n = spec.dimension;
  std::vector<std::size_t> grid = spec.grid.value_or(std::vector<std::size_t>(n, 3));
  if (grid_override) grid.assign(n, *grid_override);

  StatStructure s = [&] {
    if (spec.fixture) {
      FixtureSpec fx = *spec.fixture;
      fx.lo = spec.lo;
      fx.hi = spec.hi;
      fx.grid = grid.front();
      return build(fx);
    }
    std::vector<double> lo = spec.lo.value_or(std::vector<double>(n, -1.0));
    std::vector<double> hi = spec.hi.value_or(std::vector<double>(n, 1.0));
    std::map<PairKey, expr::Expr> g;
    std::map<TripleKey, expr::Expr> a;
    for (const auto& [key, src] : spec.metric) {
      try {
        g[key] = expr::parse(src, n);
      } catch (const ParseError& e) {
        throw Error(ErrorCode::SpecFile, "/explicit/g/" + key_text(key) + ": " + e.what());
      }
    }
    for (const auto& [key, src] : spec.cubic) {
      try {
        a[key] = expr::parse(src, n);
      } catch (const ParseError& e) {
        throw Error(ErrorCode::SpecFile, "/explicit/A/" + key_text(key) + ": " + e.what());
      }
    }
    return StatStructure(Chart(n, std::move(lo), std::move(hi), grid), g, a);
  }();
  // Per-axis grids apply to fixtures too.
  Chart chart = s.chart();
  std::vector<double> lo(n), hi(n);
  for (std::size_t i = 0; i < n; ++i) {
    lo[i] = chart.lo(i);
    hi[i] = chart.hi(i);
  }
  StatStructure out(Chart(n, std::move(lo), std::move(hi), grid), s.metric_components(), s.cubic_components());
  return spec.alpha == 1.0 ? out : alpha_transform(out, spec.alpha);
}

}  // namespace statlab
