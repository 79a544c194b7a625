#pragma once

// Linear-elastic 2D frame solver used as an independent oracle for the
// closed-form lever model. Two-node elements with linear axial and cubic
// (Euler-Bernoulli) transverse shape functions, 3 DOF per node (u, v, theta).
// Point-loaded prismatic frames are reproduced exactly by these elements.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "seesaw/mechanics.hpp"

namespace seesaw::frame {

enum Dof : std::uint8_t { dof_u = 1, dof_v = 2, dof_theta = 4, dof_all = 7 };

struct Node {
  double x = 0.0;
  double y = 0.0;
};

struct Element {
  std::size_t start = 0;
  std::size_t end = 0;
  CrossSection section;
  Material material;
};

struct Constraint {
  std::size_t node = 0;
  std::uint8_t fixed = dof_all;
};

struct NodalLoad {
  std::size_t node = 0;
  double fx = 0.0;      // N
  double fy = 0.0;      // N
  double moment = 0.0;  // N*mm, counter-clockwise positive
};

struct FrameModel {
  std::vector<Node> nodes;
  std::vector<Element> elements;
  std::vector<Constraint> constraints;
  std::vector<NodalLoad> loads;

  std::size_t dof_count() const noexcept { return 3 * nodes.size(); }
  std::size_t constrained_dof_count() const;

  /// Connected, at least one fully fixed node, no zero-length element, valid
  /// sections and materials. Throws Error(invalid_geometry) otherwise.
  void validate() const;
};

struct NodalDisplacement {
  double u = 0.0;      // mm
  double v = 0.0;      // mm
  double theta = 0.0;  // rad
};

struct ElementStress {
  double bending_start = 0.0;  // MPa, |M| c / I at the start node
  double bending_end = 0.0;
  double axial = 0.0;          // MPa, N / A (signed, tension positive)

  double max_bending() const noexcept {
    return bending_start > bending_end ? bending_start : bending_end;
  }
};

struct FrameSolution {
  std::vector<NodalDisplacement> displacements;
  /// reference_modulus * displacements, exactly as produced by the solve.
  /// Displacement ratios taken from this field do not depend on the modulus
  /// of a single-material frame.
  std::vector<NodalDisplacement> scaled_displacements;
  std::vector<ElementStress> element_stresses;
  double reference_modulus = 0.0;
  double relative_residual = 0.0;
};

/// Throws Error(singular_system) when the constraints leave a mechanism and
/// Error(invalid_geometry) for malformed models.
FrameSolution solve_frame(const FrameModel& model);

/// Global compliance entry: displacement at (node_j, dof_j) per unit load at
/// (node_i, dof_i). The model's own loads are ignored.
double influence_coefficient(const FrameModel& model, std::size_t node_i, Dof dof_i,
                             std::size_t node_j, Dof dof_j);

/// T-shaped discretization of the lever: vertical supporting beam clamped at
/// the base, hanging beam spanning L1 to the A tip and L3 + T2/2 to the P tip.
struct SeesawFrame {
  FrameModel model;
  std::size_t base = 0;
  std::size_t joint = 0;
  std::size_t active_tip = 0;
  std::size_t passive_tip = 0;
  double l1 = 0.0;

  /// Copy with a single push-down force (positive = downward) on the A tip.
  SeesawFrame with_active_force(double force) const;
};

SeesawFrame build_seesaw_frame(const SeesawGeometry& geom, const Material& mat,
                               int elements_per_segment);

struct SeesawResponse {
  double active_kinematic = 0.0;   // downward A-tip displacement
  double active_deflection = 0.0;  // active_kinematic minus L1 * joint rotation
  double passive_vertical = 0.0;   // upward P-tip displacement
  double passive_horizontal = 0.0;
  double joint_rotation = 0.0;

  double active(DisplacementConvention conv) const noexcept {
    return conv == DisplacementConvention::kinematic_total ? active_kinematic
                                                           : active_deflection;
  }
};

SeesawResponse measure(const SeesawFrame& frame, std::span<const NodalDisplacement> field);

/// A-tip to P-tip vertical displacement ratio from the frame solver.
double oracle_displacement_ratio(const SeesawGeometry& geom, const Material& mat,
                                 DisplacementConvention conv, int elements_per_segment = 4);

/// |vertical| / |horizontal| P-tip motion from the frame solver.
double oracle_parasitic_ratio(const SeesawGeometry& geom, const Material& mat,
                              int elements_per_segment = 4);

/// Straight cantilever along +x, clamped at node 0, for patch tests.
FrameModel build_cantilever(double length, const CrossSection& section, const Material& mat,
                            int elements);

}  // namespace seesaw::frame
