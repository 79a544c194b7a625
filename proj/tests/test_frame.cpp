#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "seesaw/error.hpp"
#include "seesaw/frame.hpp"
#include "seesaw/mechanics.hpp"

using namespace seesaw;
using namespace seesaw::frame;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected seesaw::Error");
  return ErrorCode::invalid_argument;
}

const CrossSection section{8.0, 1.5};

}  // namespace

TEST_CASE("seesaw frame topology") {
  const SeesawFrame one = build_seesaw_frame(SeesawGeometry::reference(), Material::resin(), 1);
  CHECK(one.model.nodes.size() == 4);
  CHECK(one.model.elements.size() == 3);
  CHECK(one.model.constrained_dof_count() == 3);

  const SeesawFrame eight = build_seesaw_frame(SeesawGeometry::reference(), Material::resin(), 8);
  CHECK(eight.model.nodes.size() == 25);
  CHECK(eight.model.elements.size() == 24);
  CHECK(eight.model.constrained_dof_count() == 3);
  CHECK(eight.model.nodes[eight.joint].y == 6.0);
  CHECK(eight.model.nodes[eight.active_tip].x == -25.0);
  CHECK(eight.model.nodes[eight.passive_tip].x == 25.75);

  const SeesawFrame swapped =
      build_seesaw_frame(SeesawGeometry::reference(ThicknessAssignment::swapped), Material::resin(), 2);
  CHECK(swapped.model.nodes[swapped.passive_tip].x == 26.5);
  CHECK(swapped.model.elements.front().section.thickness == 3.0);
  CHECK(swapped.model.elements.back().section.thickness == 1.5);

  CHECK(code_of([] { build_seesaw_frame(SeesawGeometry::reference(), Material::resin(), 0); }) ==
        ErrorCode::invalid_argument);
}

TEST_CASE("cantilever patch tests") {
  const Material mat = Material::resin();
  const double L = 25.0;
  const double ei = mat.youngs_modulus * second_moment(section);
  for (int n : {1, 3, 64}) {
    FrameModel m = build_cantilever(L, section, mat, n);
    const std::size_t tip = m.nodes.size() - 1;
    m.loads = {{tip, 0.0, 2.0, 0.0}};
    const FrameSolution f = solve_frame(m);
    CHECK(oracle::rel(f.displacements[tip].v, 2.0 * L * L * L / (3.0 * ei)) < 1e-9);
    CHECK(oracle::rel(f.displacements[tip].theta, 2.0 * L * L / (2.0 * ei)) < 1e-9);
    CHECK(f.relative_residual < 1e-9);
    // Root moment F*L.
    CHECK(oracle::rel(f.element_stresses.front().bending_start, 2.0 * L * 0.75 / second_moment(section)) < 1e-9);

    m.loads = {{tip, 0.0, 0.0, 3.0}};
    const FrameSolution g = solve_frame(m);
    CHECK(oracle::rel(g.displacements[tip].theta, 3.0 * L / ei) < 1e-9);
    CHECK(oracle::rel(g.displacements[tip].v, 3.0 * L * L / (2.0 * ei)) < 1e-9);

    m.loads = {{tip, 5.0, 0.0, 0.0}};
    const double ea = mat.youngs_modulus * section.width * section.thickness;
    CHECK(oracle::rel(solve_frame(m).displacements[tip].u, 5.0 * L / ea) < 1e-9);
  }
}

TEST_CASE("seesaw frame against the closed form") {
  const Material mat = Material::resin();
  const SeesawGeometry g = SeesawGeometry::reference();
  const SeesawFrame f = build_seesaw_frame(g, mat, 4).with_active_force(1.0);
  const SeesawResponse r = measure(f, solve_frame(f.model).displacements);
  const DeflectionState s = solve_load_case(g, mat, LoadCase::force(1.0));
  // The frame adds only the axial shortening of the supporting beam.
  const double axial = 1.0 * g.l2 / (mat.youngs_modulus * g.b * g.supporting_thickness());
  CHECK(oracle::rel(r.joint_rotation, s.theta2) < 1e-9);
  CHECK(oracle::rel(r.active_deflection, s.w1 + axial) < 1e-9);
  CHECK(oracle::rel(r.passive_vertical, s.w3 - axial) < 1e-9);
  CHECK(oracle::rel(-r.passive_horizontal, s.horizontal_p) < 1e-9);
}

TEST_CASE("oracle ratios") {
  const SeesawGeometry printed = SeesawGeometry::reference();
  const SeesawGeometry swapped = SeesawGeometry::reference(ThicknessAssignment::swapped);
  for (auto conv : {DisplacementConvention::paper_deflection, DisplacementConvention::kinematic_total}) {
    for (const auto& g : {printed, swapped}) {
      CHECK(oracle_displacement_ratio(g, Material::resin(), conv) ==
            oracle_displacement_ratio(g, Material::nylon(), conv));
    }
  }
  const double swapped_kin = oracle_displacement_ratio(swapped, Material::resin(),
                                                       DisplacementConvention::kinematic_total);
  CHECK(std::abs(swapped_kin - 11.84) / 11.84 < 0.15);
  const double swapped_def = oracle_displacement_ratio(swapped, Material::resin(),
                                                       DisplacementConvention::paper_deflection);
  // Closed form 10.4822; the frame adds axial shortening of the supporting beam.
  CHECK(swapped_def == doctest::Approx(10.4952).epsilon(1e-4));
  CHECK(oracle_displacement_ratio(printed, Material::resin(), DisplacementConvention::kinematic_total) ==
        doctest::Approx(1.1394).epsilon(1e-3));

  const double parasitic = oracle_parasitic_ratio(printed, Material::resin());
  CHECK(parasitic > 5.0);
  CHECK(parasitic < 10.0);

  // Ratio does not depend on the force magnitude.
  const SeesawFrame base = build_seesaw_frame(swapped, Material::resin(), 3);
  auto ratio_at = [&](double force) {
    const SeesawFrame f = base.with_active_force(force);
    const SeesawResponse r = measure(f, solve_frame(f.model).displacements);
    return r.active_kinematic / r.passive_vertical;
  };
  CHECK(oracle::rel(ratio_at(0.5), ratio_at(7.0)) < 1e-9);
}

TEST_CASE("mesh invariance 1 -> 64 elements") {
  for (const auto& g : {SeesawGeometry::reference(), SeesawGeometry::reference(ThicknessAssignment::swapped)}) {
    auto tips = [&](int n) {
      const SeesawFrame f = build_seesaw_frame(g, Material::nylon(), n).with_active_force(1.0);
      return measure(f, solve_frame(f.model).displacements);
    };
    const SeesawResponse a = tips(1);
    const SeesawResponse b = tips(64);
    CHECK(oracle::rel(a.active_kinematic, b.active_kinematic) < 1e-9);
    CHECK(oracle::rel(a.passive_vertical, b.passive_vertical) < 1e-9);
    CHECK(oracle::rel(a.passive_horizontal, b.passive_horizontal) < 1e-9);
  }
}

TEST_CASE("malformed models are rejected") {
  const Material mat = Material::resin();
  FrameModel chain;
  chain.nodes = {{0, 0}, {10, 0}, {20, 0}};
  chain.elements = {{0, 1, section, mat}, {1, 2, section, mat}};
  chain.constraints = {{0, dof_all}};
  chain.loads = {{2, 0, 1, 0}};
  CHECK_NOTHROW(solve_frame(chain));

  FrameModel unclamped = chain;
  unclamped.constraints = {{0, dof_u | dof_v}};
  CHECK(code_of([&] { solve_frame(unclamped); }) == ErrorCode::invalid_geometry);

  FrameModel split = chain;
  split.nodes.push_back({50, 50});
  CHECK(code_of([&] { solve_frame(split); }) == ErrorCode::invalid_geometry);

  FrameModel zero = chain;
  zero.nodes[2] = zero.nodes[1];
  CHECK(code_of([&] { solve_frame(zero); }) == ErrorCode::invalid_geometry);

  FrameModel dangling = chain;
  dangling.loads = {{7, 0, 1, 0}};
  CHECK(code_of([&] { solve_frame(dangling); }) == ErrorCode::invalid_geometry);
}

TEST_CASE("singular stiffness is reported") {
  // Every connected frame with a clamped node is a structure, so the
  // mechanism comes from an element with vanishing stiffness.
  const Material mat = Material::resin();
  Material floppy = mat;
  floppy.youngs_modulus = 1e-300;
  FrameModel m;
  m.nodes = {{0, 0}, {10, 0}, {20, 0}};
  m.elements = {{0, 1, section, mat}, {1, 2, section, floppy}};
  m.constraints = {{0, dof_all}};
  m.loads = {{2, 0, 1, 0}};
  CHECK(code_of([&] { solve_frame(m); }) == ErrorCode::singular_system);
}

TEST_CASE("property: superposition and reciprocity") {
  auto g = oracle::rng(23);
  for (int trial = 0; trial < 1000; ++trial) {
    const SeesawGeometry geom{oracle::uniform(g, 5, 40),  oracle::uniform(g, 2, 15),
                              oracle::uniform(g, 5, 40),  oracle::uniform(g, 0.5, 4),
                              oracle::uniform(g, 0.5, 4), oracle::uniform(g, 2, 15),
                              trial % 2 ? ThicknessAssignment::swapped : ThicknessAssignment::as_printed};
    const Material mat{"m", oracle::uniform(g, 500, 5000), 50.0, 1000.0};
    const int n = 1 + trial % 3;
    SeesawFrame f = build_seesaw_frame(geom, mat, n);
    const std::size_t count = f.model.nodes.size();
    auto pick = [&] {
      return static_cast<std::size_t>(1 + std::uniform_int_distribution<std::size_t>(0, count - 2)(g));
    };
    const std::size_t i = pick();
    const std::size_t j = pick();

    NodalLoad a{i, oracle::uniform(g, -5, 5), oracle::uniform(g, -5, 5), oracle::uniform(g, -50, 50)};
    NodalLoad b{j, oracle::uniform(g, -5, 5), oracle::uniform(g, -5, 5), oracle::uniform(g, -50, 50)};
    f.model.loads = {a};
    const FrameSolution sa = solve_frame(f.model);
    f.model.loads = {b};
    const FrameSolution sb = solve_frame(f.model);
    f.model.loads = {a, b};
    const FrameSolution sab = solve_frame(f.model);
    double scale = 0.0;
    for (const auto& d : sab.displacements) scale = std::max({scale, std::abs(d.u), std::abs(d.v)});
    for (std::size_t k = 0; k < count; ++k) {
      REQUIRE(std::abs(sab.displacements[k].u - sa.displacements[k].u - sb.displacements[k].u) <= 1e-9 * scale);
      REQUIRE(std::abs(sab.displacements[k].v - sa.displacements[k].v - sb.displacements[k].v) <= 1e-9 * scale);
    }

    const Dof di = trial % 3 == 0 ? dof_u : dof_v;
    const Dof dj = trial % 5 == 0 ? dof_theta : dof_v;
    const double cij = influence_coefficient(f.model, i, di, j, dj);
    const double cji = influence_coefficient(f.model, j, dj, i, di);
    const double cjj = influence_coefficient(f.model, j, dj, j, dj);
    const double cii = influence_coefficient(f.model, i, di, i, di);
    REQUIRE(std::abs(cij - cji) <= 1e-9 * std::sqrt(cii * cjj));
  }
}
