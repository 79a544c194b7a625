#include "seesaw/mechanics.hpp"

#include <cmath>
#include <limits>

#include "seesaw/error.hpp"

namespace seesaw {

namespace {

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

void require_positive(double v, const char* what) {
  if (!positive_finite(v)) {
    throw Error(ErrorCode::invalid_geometry,
                std::string(what) + " must be strictly positive, got " + std::to_string(v));
  }
}

// Response to a unit push-down force on the A tip.
struct UnitResponse {
  BeamTip active;   // w1, theta1
  BeamTip support;  // w2, theta2
  double arm = 0.0;
};

UnitResponse unit_response(const SeesawGeometry& geom, const Material& mat) {
  geom.validate();
  mat.validate();
  const double i1 = second_moment({geom.b, geom.hanging_thickness()});
  const double i2 = second_moment({geom.b, geom.supporting_thickness()});
  UnitResponse r;
  r.active = active_cantilever(1.0, geom.l1, i1, mat.youngs_modulus);
  r.support = support_rotation(geom.l1, geom.l2, i2, mat.youngs_modulus);
  r.arm = geom.passive_arm();
  return r;
}

}  // namespace

Material Material::resin() { return {"resin", 2700.0, 73.0, 1170.0}; }
Material Material::nylon() { return {"nylon", 1300.0, 46.0, 1020.0}; }

void Material::validate() const {
  auto check = [this](double v, const char* field) {
    if (!positive_finite(v)) {
      throw Error(ErrorCode::validation,
                  "material '" + name + "': " + field + " must be strictly positive");
    }
  };
  check(youngs_modulus, "youngs_modulus");
  check(bending_strength, "bending_strength");
  check(density, "density");
}

const char* to_string(ThicknessAssignment assignment) noexcept {
  return assignment == ThicknessAssignment::as_printed ? "as-printed" : "swapped";
}

const char* to_string(DisplacementConvention convention) noexcept {
  return convention == DisplacementConvention::paper_deflection ? "paper-deflection"
                                                                : "kinematic-total";
}

SeesawGeometry SeesawGeometry::reference(ThicknessAssignment assignment) {
  return {25.0, 6.0, 25.0, 3.0, 1.5, 8.0, assignment};
}

double SeesawGeometry::hanging_thickness() const noexcept {
  return assignment == ThicknessAssignment::as_printed ? t1 : t2;
}

double SeesawGeometry::supporting_thickness() const noexcept {
  return assignment == ThicknessAssignment::as_printed ? t2 : t1;
}

double SeesawGeometry::passive_arm() const noexcept { return l3 + supporting_thickness() / 2.0; }

void SeesawGeometry::validate() const {
  require_positive(l1, "l1");
  require_positive(l2, "l2");
  require_positive(l3, "l3");
  require_positive(t1, "t1");
  require_positive(t2, "t2");
  require_positive(b, "b");
}

double second_moment(const CrossSection& section) {
  require_positive(section.width, "section width");
  require_positive(section.thickness, "section thickness");
  const double t = section.thickness;
  return section.width * t * t * t / 12.0;
}

BeamTip active_cantilever(double force, double l1, double i1, double youngs_modulus) {
  require_positive(l1, "l1");
  require_positive(i1, "i1");
  require_positive(youngs_modulus, "youngs_modulus");
  const double ei = youngs_modulus * i1;
  return {force * l1 * l1 * l1 / (3.0 * ei), force * l1 * l1 / (2.0 * ei)};
}

BeamTip support_rotation(double moment, double l2, double i2, double youngs_modulus) {
  require_positive(l2, "l2");
  require_positive(i2, "i2");
  require_positive(youngs_modulus, "youngs_modulus");
  const double ei = youngs_modulus * i2;
  return {moment * l2 * l2 / (2.0 * ei), moment * l2 / ei};
}

BeamTip passive_tip(double theta2, double l3, double t2) {
  if (!(std::abs(theta2) < small_angle_limit)) {
    throw Error(ErrorCode::out_of_regime,
                "joint rotation " + std::to_string(theta2) +
                    " rad is outside the small-angle regime (|theta| < 0.1 rad)");
  }
  return {(l3 + t2 / 2.0) * theta2, theta2};
}

double displacement_ratio_closed_form(const SeesawGeometry& geom) {
  geom.validate();
  const double th = geom.hanging_thickness();
  const double ts = geom.supporting_thickness();
  return ts * ts * ts * geom.l1 * geom.l1 /
         (3.0 * th * th * th * geom.l2 * (geom.l3 + ts / 2.0));
}

double active_compliance(const SeesawGeometry& geom, const Material& mat,
                         DisplacementConvention conv) {
  const UnitResponse r = unit_response(geom, mat);
  if (conv == DisplacementConvention::paper_deflection) return r.active.deflection;
  return r.active.deflection + geom.l1 * r.support.rotation;
}

BendingStress max_bending_stress(const SeesawGeometry& geom, double force) {
  geom.validate();
  const double moment = std::abs(force * geom.l1);
  const double th = geom.hanging_thickness();
  const double ts = geom.supporting_thickness();
  return {moment * (th / 2.0) / second_moment({geom.b, th}),
          moment * (ts / 2.0) / second_moment({geom.b, ts})};
}

BendingStress max_bending_stress(const SeesawGeometry& geom, const LoadCase& load) {
  if (load.kind() != LoadCase::Kind::force) {
    throw Error(ErrorCode::invalid_argument, "max_bending_stress needs a force load case");
  }
  return max_bending_stress(geom, load.value());
}

DeflectionState solve_load_case(const SeesawGeometry& geom, const Material& mat,
                                const LoadCase& load, DisplacementConvention conv) {
  geom.validate();
  mat.validate();
  // Kinematics run at unit modulus with the load divided by E, so a prescribed
  // displacement yields the same deflections for every material.
  const double e = mat.youngs_modulus;
  double force = load.value();
  double reduced = force / e;
  if (load.kind() == LoadCase::Kind::active_displacement) {
    const double compliance = active_compliance(geom, Material{"unit", 1.0, 1.0, 1.0}, conv);
    if (!positive_finite(compliance)) {
      throw Error(ErrorCode::singular_system,
                  "A-side compliance is degenerate; cannot invert a prescribed displacement");
    }
    reduced = load.value() / compliance;
    force = reduced * e;
  }

  const double i1 = second_moment({geom.b, geom.hanging_thickness()});
  const double i2 = second_moment({geom.b, geom.supporting_thickness()});

  const BeamTip a = active_cantilever(reduced, geom.l1, i1, 1.0);
  const BeamTip m = support_rotation(reduced * geom.l1, geom.l2, i2, 1.0);
  const BeamTip p = passive_tip(m.rotation, geom.l3, geom.supporting_thickness());
  const BendingStress sigma = max_bending_stress(geom, force);

  DeflectionState s;
  s.force = force;
  s.w1 = a.deflection;
  s.theta1 = a.rotation;
  s.w2 = m.deflection;
  s.theta2 = m.rotation;
  s.w3 = p.deflection;
  s.theta3 = p.rotation;
  s.horizontal_p = m.deflection;
  const double arc = geom.passive_arm() * (1.0 - std::cos(p.rotation));
  s.horizontal_p_with_arc = m.deflection + std::copysign(arc, m.deflection);
  s.active_total = conv == DisplacementConvention::paper_deflection
                       ? a.deflection
                       : a.deflection + geom.l1 * m.rotation;
  s.sigma_max_hanging = sigma.hanging;
  s.sigma_max_supporting = sigma.supporting;
  return s;
}

double max_safe_force(const SeesawGeometry& geom, const Material& mat, double safety_factor) {
  if (!(safety_factor >= 1.0)) {
    throw Error(ErrorCode::invalid_argument, "safety_factor must be >= 1");
  }
  mat.validate();
  const double stress_per_newton = max_bending_stress(geom, 1.0).max();
  if (!positive_finite(stress_per_newton)) {
    throw Error(ErrorCode::invalid_geometry, "degenerate geometry: zero stress per unit load");
  }
  return mat.bending_strength / (safety_factor * stress_per_newton);
}

double max_safe_active_displacement(const SeesawGeometry& geom, const Material& mat,
                                    double safety_factor, DisplacementConvention conv) {
  return max_safe_force(geom, mat, safety_factor) * active_compliance(geom, mat, conv);
}

}  // namespace seesaw
