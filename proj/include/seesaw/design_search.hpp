#pragma once

// Constrained search over lever geometries. Candidates are evaluated with
// the closed-form model; the frame solver only re-checks the final few.

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "seesaw/mechanics.hpp"
#include "seesaw/optics.hpp"

namespace seesaw::search {

struct ParameterRange {
  double low = 0.0;
  double high = 0.0;
  int samples = 1;

  static ParameterRange fixed(double v) noexcept { return {v, v, 1}; }

  /// i-th grid point; a single-sample range sits at `low`.
  double value(int i) const noexcept;
  /// Grid spacing, or the full width for single-sample ranges.
  double spacing() const noexcept;

  bool operator==(const ParameterRange&) const = default;
};

inline constexpr std::size_t default_candidate_cap = 10'000'000;

struct DesignSpace {
  ParameterRange l1, l2, l3, t1, t2, b;
  Material material = Material::resin();
  optics::ScrewSpec screw;
  ThicknessAssignment assignment = ThicknessAssignment::as_printed;
  DisplacementConvention convention = DisplacementConvention::paper_deflection;
  std::size_t candidate_cap = default_candidate_cap;

  /// Single-point space at a geometry.
  static DesignSpace around(const SeesawGeometry& geom, const Material& mat);

  std::array<const ParameterRange*, 6> ranges() const noexcept { return {&l1, &l2, &l3, &t1, &t2, &b}; }
  std::array<ParameterRange*, 6> ranges() noexcept { return {&l1, &l2, &l3, &t1, &t2, &b}; }

  std::size_t candidate_count() const noexcept;
  SeesawGeometry geometry_at(std::size_t index) const;
  bool contains(const SeesawGeometry& geom) const noexcept;

  /// Throws Error(validation) for inverted ranges, zero samples or a count over the cap.
  void validate() const;
};

struct DesignConstraints {
  double min_feature = 0.2;     // mm
  double required_stroke = 0.5; // mm, P side
  double safety_factor = 1.0;
  double max_parasitic_fraction = 0.2;
  std::optional<double> target_dz;     // um
  std::optional<double> target_ratio;

  void validate() const;

  bool operator==(const DesignConstraints&) const = default;
};

enum class Infeasibility { none, printability, ratio_range, strength, parasitic };

inline constexpr std::array<Infeasibility, 4> infeasibility_reasons = {
    Infeasibility::printability, Infeasibility::ratio_range, Infeasibility::strength,
    Infeasibility::parasitic};

const char* to_string(Infeasibility reason) noexcept;

struct DesignCandidate {
  SeesawGeometry geometry;
  double achieved_ratio = 0.0;
  double achieved_dz = 0.0;           // um
  double max_stress_at_stroke = 0.0;  // MPa
  double parasitic_fraction = 0.0;
  bool feasible = false;
  Infeasibility reason = Infeasibility::none;
  double objective_score = 0.0;
};

/// Ranking order: objective score, then max stress, then (l1, l2, l3, t1, t2, b).
bool ranks_before(const DesignCandidate& a, const DesignCandidate& b) noexcept;

DesignCandidate evaluate_candidate(const SeesawGeometry& geom, const DesignSpace& space,
                                   const DesignConstraints& constraints);

struct Census {
  std::size_t total = 0;
  std::size_t feasible = 0;
  std::array<std::size_t, 4> infeasible{};  // indexed like infeasibility_reasons

  std::size_t count(Infeasibility reason) const noexcept;
};

struct SearchResult {
  std::vector<DesignCandidate> ranked;  // feasible only
  Census census;
};

/// Exhaustive enumeration. `keep` bounds the ranked list (0 = all feasible).
/// `threads` = 0 uses the hardware concurrency; the output does not depend on it.
SearchResult grid_search(const DesignSpace& space, const DesignConstraints& constraints,
                         std::size_t keep = 0, unsigned threads = 0);

struct RefineResult {
  DesignCandidate best;
  std::vector<double> trace;  // objective after each sweep
  int iterations = 0;
};

/// Coordinate descent with step halving. Stops when every step drops below
/// 1e-4 mm or after max_iters sweeps.
RefineResult local_refine(const DesignCandidate& start, const DesignSpace& space,
                          const DesignConstraints& constraints, int max_iters = 500);

struct FemCheck {
  DesignCandidate candidate;
  double fem_ratio = 0.0;
  double relative_deviation = 0.0;
};

/// Re-evaluates the first k ranked candidates with the frame solver.
std::vector<FemCheck> fem_validate_top(const SearchResult& result, const DesignSpace& space,
                                       std::size_t k = 5, int elements_per_segment = 4);

}  // namespace seesaw::search
