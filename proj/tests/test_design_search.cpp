#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <optional>

#include "naive_search.hpp"
#include "oracles.hpp"
#include "seesaw/design_search.hpp"
#include "seesaw/error.hpp"

using namespace seesaw;
using namespace seesaw::search;

namespace {

DesignConstraints ratio_target(double r) {
  DesignConstraints c;
  c.target_ratio = r;
  return c;
}

DesignSpace reference_space(ThicknessAssignment a) {
  return DesignSpace::around(SeesawGeometry::reference(a), Material::resin());
}

}  // namespace

TEST_CASE("evaluate the reference geometry") {
  const DesignSpace space = reference_space(ThicknessAssignment::swapped);
  const DesignCandidate c = evaluate_candidate(SeesawGeometry::reference(ThicknessAssignment::swapped), space,
                                               ratio_target(11.0));
  CHECK(c.achieved_ratio == doctest::Approx(10.482180293501049).epsilon(1e-14));
  CHECK(c.achieved_dz == doctest::Approx(optics::deg_to_rad(5.0) * 2.0 * 1000.0 /
                                         (2.0 * optics::pi * c.achieved_ratio)).epsilon(1e-14));
  CHECK(c.objective_score == doctest::Approx(11.0 - 10.482180293501049).epsilon(1e-13));
  CHECK(c.parasitic_fraction == doctest::Approx(6.0 / (2.0 * 26.5)).epsilon(1e-14));
  CHECK(c.feasible);

  // As-printed, the lever amplifies (ratio 0.17), so it is outside the ratio range.
  const DesignCandidate printed =
      evaluate_candidate(SeesawGeometry::reference(), reference_space(ThicknessAssignment::as_printed), ratio_target(11.0));
  CHECK_FALSE(printed.feasible);
  CHECK(printed.reason == Infeasibility::ratio_range);
}

TEST_CASE("infeasibility reasons") {
  const DesignSpace space = reference_space(ThicknessAssignment::swapped);
  SeesawGeometry thin = SeesawGeometry::reference(ThicknessAssignment::swapped);
  thin.t2 = 0.1;
  const DesignCandidate c = evaluate_candidate(thin, space, ratio_target(11.0));
  CHECK_FALSE(c.feasible);
  CHECK(c.reason == Infeasibility::printability);

  SeesawGeometry degenerate = thin;
  degenerate.l2 = -1.0;
  CHECK(evaluate_candidate(degenerate, space, ratio_target(11.0)).reason == Infeasibility::printability);

  DesignConstraints strong = ratio_target(11.0);
  strong.required_stroke = 2.0;  // needs ~3x the safe load
  CHECK(evaluate_candidate(SeesawGeometry::reference(ThicknessAssignment::swapped), space, strong).reason ==
        Infeasibility::strength);

  DesignConstraints tight = ratio_target(11.0);
  tight.max_parasitic_fraction = 0.05;
  CHECK(evaluate_candidate(SeesawGeometry::reference(ThicknessAssignment::swapped), space, tight).reason ==
        Infeasibility::parasitic);
}

TEST_CASE("single-point space returns that candidate") {
  const DesignSpace space = reference_space(ThicknessAssignment::swapped);
  const SearchResult r = grid_search(space, ratio_target(11.0));
  REQUIRE(r.ranked.size() == 1);
  CHECK(r.ranked[0].geometry == SeesawGeometry::reference(ThicknessAssignment::swapped));
  CHECK(r.census.total == 1);
  CHECK(r.census.feasible == 1);
}

TEST_CASE("empty feasible set reports a census") {
  DesignSpace space = reference_space(ThicknessAssignment::swapped);
  space.t1 = {0.05, 0.15, 3};
  const SearchResult r = grid_search(space, ratio_target(11.0));
  CHECK(r.ranked.empty());
  CHECK(r.census.total == 3);
  CHECK(r.census.count(Infeasibility::printability) == 3);
}

TEST_CASE("space validation") {
  DesignSpace space = reference_space(ThicknessAssignment::swapped);
  space.l1 = {30.0, 20.0, 3};
  CHECK_THROWS_AS(grid_search(space, ratio_target(11.0)), Error);
  space = reference_space(ThicknessAssignment::swapped);
  space.l1.samples = 0;
  CHECK_THROWS_AS(grid_search(space, ratio_target(11.0)), Error);
  space = reference_space(ThicknessAssignment::swapped);
  space.l1 = {10, 30, 100};
  space.l2 = {2, 10, 100};
  space.candidate_cap = 1000;
  CHECK_THROWS_AS(grid_search(space, ratio_target(11.0)), Error);

  DesignConstraints both = ratio_target(11.0);
  both.target_dz = 2.0;
  CHECK_THROWS_AS(grid_search(reference_space(ThicknessAssignment::swapped), both), Error);
  CHECK_THROWS_AS(grid_search(reference_space(ThicknessAssignment::swapped), DesignConstraints{}), Error);
}

TEST_CASE("grid search matches the naive enumerator") {
  auto g = oracle::rng(101);
  for (int trial = 0; trial < 12; ++trial) {
    DesignSpace space = naive::random_space(g, trial);
    DesignConstraints c = naive::random_constraints(g, trial);
    const SearchResult r = grid_search(space, c, 0, 1 + trial % 4);
    const naive::Best best = naive::enumerate(space, c);
    CHECK(r.census.total == space.candidate_count());
    CHECK(r.census.feasible == best.feasible_count);
    if (!best.found) {
      CHECK(r.ranked.empty());
      continue;
    }
    REQUIRE_FALSE(r.ranked.empty());
    CHECK(r.ranked.front().geometry == best.geometry);
    CHECK(std::abs(r.ranked.front().objective_score - best.score) < 1e-12);
    for (std::size_t i = 1; i < r.ranked.size(); ++i) {
      REQUIRE_FALSE(ranks_before(r.ranked[i], r.ranked[i - 1]));
    }
  }
}

TEST_CASE("determinism across thread counts and keep limits") {
  auto g = oracle::rng(5);
  const DesignSpace space = naive::random_space(g, 0);
  const DesignConstraints c = naive::random_constraints(g, 0);
  const SearchResult a = grid_search(space, c, 0, 1);
  const SearchResult b = grid_search(space, c, 0, 3);
  const SearchResult top = grid_search(space, c, 7, 2);
  REQUIRE(a.ranked.size() == b.ranked.size());
  for (std::size_t i = 0; i < a.ranked.size(); ++i) {
    REQUIRE(a.ranked[i].geometry == b.ranked[i].geometry);
    REQUIRE(a.ranked[i].objective_score == b.ranked[i].objective_score);
  }
  REQUIRE(top.ranked.size() == std::min<std::size_t>(7, a.ranked.size()));
  for (std::size_t i = 0; i < top.ranked.size(); ++i) CHECK(top.ranked[i].geometry == a.ranked[i].geometry);
  CHECK(top.census.feasible == a.census.feasible);
}

TEST_CASE("tightening the safety factor never grows the feasible set") {
  auto g = oracle::rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    const DesignSpace space = naive::random_space(g, trial);
    DesignConstraints c = naive::random_constraints(g, trial);
    std::size_t previous = std::numeric_limits<std::size_t>::max();
    for (double sf : {1.0, 1.5, 2.0, 4.0, 8.0}) {
      c.safety_factor = sf;
      const std::size_t n = grid_search(space, c).census.feasible;
      CHECK(n <= previous);
      previous = n;
    }
  }
}

TEST_CASE("feasibility soundness") {
  auto g = oracle::rng(41);
  const DesignSpace space = naive::random_space(g, 1);
  const DesignConstraints c = naive::random_constraints(g, 1);
  for (const DesignCandidate& cand : grid_search(space, c).ranked) {
    const SeesawGeometry& geom = cand.geometry;
    for (double v : {geom.l1, geom.l2, geom.l3, geom.t1, geom.t2, geom.b}) REQUIRE(v >= c.min_feature);
    const DeflectionState s = solve_load_case(
        geom, space.material,
        LoadCase::force(c.required_stroke / solve_load_case(geom, space.material, LoadCase::force(1.0)).w3));
    REQUIRE(oracle::rel(s.w3, c.required_stroke) < 1e-12);
    REQUIRE(std::max(s.sigma_max_hanging, s.sigma_max_supporting) * c.safety_factor <=
            space.material.bending_strength * (1 + 1e-12));
    REQUIRE(s.horizontal_p / s.w3 <= c.max_parasitic_fraction * (1 + 1e-12));
    REQUIRE(displacement_ratio_closed_form(geom) > 1.0);
  }
}

TEST_CASE("scaling all lengths: ratio recomputation matches evaluate_candidate") {
  auto g = oracle::rng(59);
  for (int i = 0; i < 500; ++i) {
    const double k = oracle::uniform(g, 0.25, 4.0);
    SeesawGeometry geom{25.0 * k, 6.0 * k, 25.0 * k, 3.0 * k, 1.5 * k, 8.0 * k, ThicknessAssignment::swapped};
    const DesignSpace space = DesignSpace::around(geom, Material::resin());
    DesignConstraints c = ratio_target(11.0);
    c.min_feature = 0.01;
    const DesignCandidate cand = evaluate_candidate(geom, space, c);
    // Uniform scaling leaves the thickness ratio and L1^2 / (L2 (L3 + T/2)) unchanged.
    const double expected = std::pow(3.0 / 1.5, 3) * 625.0 / (3.0 * 6.0 * (25.0 + 1.5));
    REQUIRE(oracle::rel(cand.achieved_ratio, expected) < 1e-12);
    // At fixed stroke the force scales with k: rotation per newton goes as k^-2, the arm as k.
    const double f1 = c.required_stroke / solve_load_case(geom, space.material, LoadCase::force(1.0)).w3;
    const SeesawGeometry base = SeesawGeometry::reference(ThicknessAssignment::swapped);
    const double f0 = c.required_stroke / solve_load_case(base, space.material, LoadCase::force(1.0)).w3;
    REQUIRE(oracle::rel(f1, f0 * k) < 1e-12);
  }
}

TEST_CASE("local refinement") {
  DesignSpace space = reference_space(ThicknessAssignment::swapped);
  space.l2 = {4.0, 8.0, 1};
  const DesignConstraints c = ratio_target(11.0);
  const DesignCandidate start = evaluate_candidate(SeesawGeometry::reference(ThicknessAssignment::swapped), space, c);
  REQUIRE(start.feasible);
  const RefineResult r = local_refine(start, space, c, 500);
  CHECK(r.best.feasible);
  CHECK(std::abs(r.best.achieved_ratio - 11.0) / 11.0 < 1e-3);
  CHECK(r.best.objective_score <= start.objective_score);
  CHECK(space.contains(r.best.geometry));
  for (std::size_t i = 1; i < r.trace.size(); ++i) CHECK(r.trace[i] <= r.trace[i - 1]);

  DesignCandidate infeasible = start;
  infeasible.feasible = false;
  CHECK_THROWS_AS(local_refine(infeasible, space, c), Error);
}

TEST_CASE("refining a fine grid optimum changes little") {
  DesignSpace space = reference_space(ThicknessAssignment::swapped);
  space.l2 = {4.0, 8.0, 401};
  const DesignConstraints c = ratio_target(11.0);
  const SearchResult grid = grid_search(space, c);
  REQUIRE_FALSE(grid.ranked.empty());
  const RefineResult r = local_refine(grid.ranked.front(), space, c);
  const double slope = 10.482180293501049 / 6.0;  // |d ratio / d l2| near the reference geometry
  CHECK(grid.ranked.front().objective_score - r.best.objective_score <= slope * space.l2.spacing());
  CHECK(r.best.objective_score <= grid.ranked.front().objective_score);
}

TEST_CASE("top-k frame validation") {
  DesignSpace space = reference_space(ThicknessAssignment::swapped);
  space.l2 = {5.0, 7.0, 5};
  const SearchResult r = grid_search(space, ratio_target(11.0));
  const auto checks = fem_validate_top(r, space, 3);
  REQUIRE(checks.size() == 3);
  // The frame adds axial shortening of the supporting beam, about 0.1% here.
  for (const FemCheck& f : checks) CHECK(f.relative_deviation < 3e-3);
}
