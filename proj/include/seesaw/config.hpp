#pragma once

// Plain-text run configuration: `[section]` headers, `key = value` lines and
// `#` comments. Sections: geometry, material, screw, optics, search,
// constraints. Units are mm, N, MPa and degrees.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "seesaw/design_search.hpp"
#include "seesaw/mechanics.hpp"
#include "seesaw/optics.hpp"

namespace seesaw::config {

/// Screw settings in config units. The minimal rotation stays in degrees so a
/// config survives emit/parse unchanged.
struct ScrewConfig {
  double pitch = 2.0;          // mm
  double min_rotation = 5.0;   // deg
  double diameter = 6.0;       // mm

  optics::ScrewSpec spec() const noexcept;

  bool operator==(const ScrewConfig&) const = default;
};

struct SearchConfig {
  search::ParameterRange l1, l2, l3, t1, t2, b;
  std::size_t candidate_cap = search::default_candidate_cap;
  std::size_t top_k = 5;   // candidates re-checked with the frame solver
  std::size_t keep = 20;   // ranked rows written out
  int refine_iters = 0;    // 0 disables local refinement

  bool operator==(const SearchConfig&) const = default;
};

struct RunConfig {
  SeesawGeometry geometry;
  DisplacementConvention convention = DisplacementConvention::paper_deflection;
  Material material = Material::resin();
  ScrewConfig screw;
  optics::OpticsSpec optics;
  std::optional<SearchConfig> search;
  std::optional<search::DesignConstraints> constraints;

  /// Non-fatal notes produced while parsing (e.g. explicit material values
  /// overriding a named material). Not part of equality.
  std::vector<std::string> warnings;

  /// Throws Error(validation) when [search] is absent.
  search::DesignSpace design_space() const;

  bool operator==(const RunConfig& other) const;
};

/// Throws Error(parse) with a line number for syntax problems and
/// Error(validation) naming the field for semantic ones.
RunConfig parse_config(std::string_view text);

RunConfig load_config(const std::string& path);

/// Canonical text form; parse_config(emit_config(c)) == c.
std::string emit_config(const RunConfig& config);

}  // namespace seesaw::config
