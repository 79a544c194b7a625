#pragma once

// Closed-form Euler-Bernoulli model of the seesaw-like lever.
//
// The lever is a horizontal hanging beam rigidly joined to a vertical
// supporting beam. A force on the active (A) arm bends that arm as a
// cantilever, loads the supporting beam with the moment F*L1, and the
// resulting joint rotation tilts the passive (P) arm as a rigid body.
//
// Units throughout: mm, N, MPa (= N/mm^2), rad.

#include <string>

namespace seesaw {

struct Material {
  std::string name;
  double youngs_modulus = 0.0;    // MPa
  double bending_strength = 0.0;  // MPa
  double density = 0.0;           // kg/m^3

  static Material resin();
  static Material nylon();

  /// Throws Error(validation) unless every property is strictly positive.
  void validate() const;

  bool operator==(const Material&) const = default;
};

/// `as_printed` binds t1 to the hanging beam and t2 to the supporting beam.
/// `swapped` exchanges them.
enum class ThicknessAssignment { as_printed, swapped };

/// `paper_deflection`: A-side displacement is the arm's own bending w1.
/// `kinematic_total`: w1 plus the rigid contribution L1*theta2 of the joint.
enum class DisplacementConvention { paper_deflection, kinematic_total };

const char* to_string(ThicknessAssignment assignment) noexcept;
const char* to_string(DisplacementConvention convention) noexcept;

struct SeesawGeometry {
  double l1 = 0.0;  // active arm length
  double l2 = 0.0;  // supporting beam length
  double l3 = 0.0;  // passive arm length
  double t1 = 0.0;
  double t2 = 0.0;
  double b = 0.0;   // out-of-plane width
  ThicknessAssignment assignment = ThicknessAssignment::as_printed;

  /// Geometry from the fabricated device: 25, 6, 25, 3, 1.5, 8 mm.
  static SeesawGeometry reference(ThicknessAssignment assignment = ThicknessAssignment::as_printed);

  double hanging_thickness() const noexcept;
  double supporting_thickness() const noexcept;
  /// Lever arm of the P tip about the joint centre: L3 plus half the
  /// supporting beam thickness.
  double passive_arm() const noexcept;

  /// Throws Error(invalid_geometry) naming the first non-positive length.
  void validate() const;

  bool operator==(const SeesawGeometry&) const = default;
};

struct CrossSection {
  double width = 0.0;
  double thickness = 0.0;
};

/// A load case is either an applied A-side force or a prescribed A-side
/// displacement; construct through the factories.
class LoadCase {
 public:
  enum class Kind { force, active_displacement };

  /// Positive pushes the A side down, negative pushes it up.
  static LoadCase force(double newtons) noexcept { return {Kind::force, newtons}; }
  static LoadCase active_displacement(double mm) noexcept {
    return {Kind::active_displacement, mm};
  }

  Kind kind() const noexcept { return kind_; }
  double value() const noexcept { return value_; }

 private:
  LoadCase(Kind kind, double value) noexcept : kind_(kind), value_(value) {}

  Kind kind_;
  double value_;
};

struct BeamTip {
  double deflection = 0.0;  // mm
  double rotation = 0.0;    // rad
};

struct BendingStress {
  double hanging = 0.0;     // MPa, root of the A arm
  double supporting = 0.0;  // MPa, root of the supporting beam

  double max() const noexcept { return hanging > supporting ? hanging : supporting; }
};

struct DeflectionState {
  double force = 0.0;  // N, the load that produced this state
  double w1 = 0.0;
  double w2 = 0.0;
  double w3 = 0.0;
  double theta1 = 0.0;
  double theta2 = 0.0;
  double theta3 = 0.0;
  /// Lowest-order horizontal motion of the P tip (equal to w2).
  double horizontal_p = 0.0;
  /// horizontal_p plus the second-order arc shortening arm*(1 - cos theta3).
  double horizontal_p_with_arc = 0.0;
  /// A-side displacement under the requested convention.
  double active_total = 0.0;
  double sigma_max_hanging = 0.0;
  double sigma_max_supporting = 0.0;
};

/// Rotations at or beyond this magnitude leave the small-angle regime.
inline constexpr double small_angle_limit = 0.1;

double second_moment(const CrossSection& section);

BeamTip active_cantilever(double force, double l1, double i1, double youngs_modulus);

BeamTip support_rotation(double moment, double l2, double i2, double youngs_modulus);

/// theta3 = theta2 and w3 = (l3 + t2/2) * theta3. Throws Error(out_of_regime)
/// for |theta2| >= small_angle_limit.
BeamTip passive_tip(double theta2, double l3, double t2);

/// w1/w3 in closed form, T2^3 L1^2 / (3 T1^3 L2 (L3 + T2/2)), with T1 and T2
/// resolved through the thickness assignment. Independent of the material.
double displacement_ratio_closed_form(const SeesawGeometry& geom);

/// A-side displacement per newton under a convention.
double active_compliance(const SeesawGeometry& geom, const Material& mat,
                         DisplacementConvention conv);

DeflectionState solve_load_case(const SeesawGeometry& geom, const Material& mat,
                                const LoadCase& load,
                                DisplacementConvention conv = DisplacementConvention::paper_deflection);

/// Root bending stresses |M| (t/2) / I; both beams carry M = F*L1.
BendingStress max_bending_stress(const SeesawGeometry& geom, double force);
BendingStress max_bending_stress(const SeesawGeometry& geom, const LoadCase& load);

/// Largest A-side displacement keeping max stress * safety_factor within the
/// bending strength.
double max_safe_active_displacement(const SeesawGeometry& geom, const Material& mat,
                                    double safety_factor,
                                    DisplacementConvention conv = DisplacementConvention::paper_deflection);

/// Force at which the most stressed beam reaches bending_strength / safety_factor.
double max_safe_force(const SeesawGeometry& geom, const Material& mat, double safety_factor);

}  // namespace seesaw
