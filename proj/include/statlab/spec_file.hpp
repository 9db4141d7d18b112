#pragma once

// Structure-spec files: a JSON document describing a chart and either a
// built-in fixture or explicit component expressions.
//
//   {
//     "dimension": 4,
//     "domain": {"lo": [-1,-1,-1,-1], "hi": [1,1,1,1]},   or [[a,b], ...]
//     "grid": 3,                                          or [3,3,3,3]
//     "alpha": 1.0,
//     "fixture": {"name": "constant_distinct", "params": {"c": 1}}
//   }
//
// or "explicit": {"g": {"1,1": "1/x2^2"}, "A": {"1,2,3": "x1"}} in place of
// "fixture". Index keys are 1-based and order-insensitive.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "statlab/chart.hpp"
#include "statlab/gallery.hpp"

namespace statlab {

struct StructureSpec {
  std::size_t dimension = 0;
  std::optional<std::vector<double>> lo;
  std::optional<std::vector<double>> hi;
  std::optional<std::vector<std::size_t>> grid;
  double alpha = 1.0;
  std::optional<FixtureSpec> fixture;
  std::map<PairKey, std::string> metric;   // canonical 0-based keys
  std::map<TripleKey, std::string> cubic;  // canonical 0-based keys
};

/// Parses spec text. Errors are Error(SpecFile) whose message starts with
/// "<origin>:<line>:<column>:" for syntax errors or "<origin>: <json path>:"
/// for schema errors.
StructureSpec parse_structure_spec(std::string_view text, std::string_view origin = "<spec>");
StructureSpec load_structure_spec(const std::string& path);

/// Builds the structure. `grid_override` replaces the per-axis sample count.
/// Expression errors are reported as Error(SpecFile) with the key's path.
StatStructure to_structure(const StructureSpec& spec, std::optional<std::size_t> grid_override = {});

/// Text form of a canonical key, 1-based: "1,2,3".
std::string key_text(std::span<const std::size_t> key);

}  // namespace statlab
