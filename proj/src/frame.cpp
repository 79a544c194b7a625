#include "seesaw/frame.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

#include "seesaw/error.hpp"

namespace seesaw::frame {

namespace {

using Matrix6 = Eigen::Matrix<double, 6, 6>;
using Vector6 = Eigen::Matrix<double, 6, 1>;

struct ElementFrame {
  double length = 0.0;
  double c = 0.0;
  double s = 0.0;
};

ElementFrame element_frame(const FrameModel& model, const Element& e) {
  const Node& a = model.nodes[e.start];
  const Node& b = model.nodes[e.end];
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double length = std::hypot(dx, dy);
  return {length, dx / length, dy / length};
}

// Local stiffness with the modulus factored out as `modulus_factor`.
Matrix6 local_stiffness(double length, double area, double inertia, double modulus_factor) {
  const double L = length;
  const double ea = modulus_factor * area / L;
  const double k12 = modulus_factor * 12.0 * inertia / (L * L * L);
  const double k6 = modulus_factor * 6.0 * inertia / (L * L);
  const double k4 = modulus_factor * 4.0 * inertia / L;
  const double k2 = modulus_factor * 2.0 * inertia / L;

  Matrix6 k = Matrix6::Zero();
  k(0, 0) = ea;   k(0, 3) = -ea;
  k(3, 0) = -ea;  k(3, 3) = ea;

  k(1, 1) = k12;  k(1, 2) = k6;   k(1, 4) = -k12; k(1, 5) = k6;
  k(2, 1) = k6;   k(2, 2) = k4;   k(2, 4) = -k6;  k(2, 5) = k2;
  k(4, 1) = -k12; k(4, 2) = -k6;  k(4, 4) = k12;  k(4, 5) = -k6;
  k(5, 1) = k6;   k(5, 2) = k2;   k(5, 4) = -k6;  k(5, 5) = k4;
  return k;
}

// Maps global (u, v, theta) pairs onto the element axis.
Matrix6 rotation(const ElementFrame& f) {
  Matrix6 t = Matrix6::Zero();
  for (int n = 0; n < 2; ++n) {
    const int o = 3 * n;
    t(o, o) = f.c;      t(o, o + 1) = f.s;
    t(o + 1, o) = -f.s; t(o + 1, o + 1) = f.c;
    t(o + 2, o + 2) = 1.0;
  }
  return t;
}

std::array<std::size_t, 6> element_dofs(const Element& e) {
  return {3 * e.start, 3 * e.start + 1, 3 * e.start + 2,
          3 * e.end,   3 * e.end + 1,   3 * e.end + 2};
}

double reference_modulus(const FrameModel& model) {
  double e_ref = 0.0;
  for (const Element& e : model.elements) e_ref = std::max(e_ref, e.material.youngs_modulus);
  return e_ref;
}

// Stiffness scaled by 1 / reference modulus.
Eigen::MatrixXd assemble(const FrameModel& model, double e_ref) {
  const auto n = static_cast<Eigen::Index>(model.dof_count());
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
  for (const Element& e : model.elements) {
    const ElementFrame f = element_frame(model, e);
    const double area = e.section.width * e.section.thickness;
    const double inertia = second_moment(e.section);
    const double factor = e.material.youngs_modulus / e_ref;
    const Matrix6 t = rotation(f);
    const Matrix6 kg = t.transpose() * local_stiffness(f.length, area, inertia, factor) * t;
    const auto dofs = element_dofs(e);
    for (int i = 0; i < 6; ++i) {
      for (int j = 0; j < 6; ++j) {
        k(static_cast<Eigen::Index>(dofs[i]), static_cast<Eigen::Index>(dofs[j])) += kg(i, j);
      }
    }
  }
  return k;
}

std::vector<bool> fixed_mask(const FrameModel& model) {
  std::vector<bool> fixed(model.dof_count(), false);
  for (const Constraint& c : model.constraints) {
    if (c.fixed & dof_u) fixed[3 * c.node] = true;
    if (c.fixed & dof_v) fixed[3 * c.node + 1] = true;
    if (c.fixed & dof_theta) fixed[3 * c.node + 2] = true;
  }
  return fixed;
}

// Reduced system over the free DOFs, factored once.
struct ReducedSystem {
  std::vector<Eigen::Index> free;
  Eigen::MatrixXd k_full;
  Eigen::MatrixXd k_free;
  Eigen::FullPivLU<Eigen::MatrixXd> lu;
  double e_ref = 0.0;
};

ReducedSystem factor(const FrameModel& model) {
  model.validate();
  ReducedSystem sys;
  sys.e_ref = reference_modulus(model);
  sys.k_full = assemble(model, sys.e_ref);
  const std::vector<bool> fixed = fixed_mask(model);
  for (std::size_t i = 0; i < fixed.size(); ++i) {
    if (!fixed[i]) sys.free.push_back(static_cast<Eigen::Index>(i));
  }
  const auto nf = static_cast<Eigen::Index>(sys.free.size());
  sys.k_free.resize(nf, nf);
  for (Eigen::Index i = 0; i < nf; ++i) {
    for (Eigen::Index j = 0; j < nf; ++j) sys.k_free(i, j) = sys.k_full(sys.free[i], sys.free[j]);
  }
  sys.lu.compute(sys.k_free);
  sys.lu.setThreshold(1e-12);
  if (!sys.lu.isInvertible()) {
    throw Error(ErrorCode::singular_system,
                "frame stiffness is singular: constraints do not remove all rigid-body modes (rank " +
                    std::to_string(sys.lu.rank()) + " of " + std::to_string(nf) + ")");
  }
  return sys;
}

// Solves for the modulus-scaled displacement vector (E_ref * d).
Eigen::VectorXd solve_scaled(const ReducedSystem& sys, const Eigen::VectorXd& f_full,
                             double& relative_residual) {
  const auto nf = static_cast<Eigen::Index>(sys.free.size());
  Eigen::VectorXd f(nf);
  for (Eigen::Index i = 0; i < nf; ++i) f(i) = f_full(sys.free[i]);
  Eigen::VectorXd d_full = Eigen::VectorXd::Zero(f_full.size());
  const double f_norm = f.norm();
  if (f_norm == 0.0) {
    relative_residual = 0.0;
    return d_full;
  }
  // Fine meshes of slender beams are badly conditioned; a few rounds of
  // refinement with an extended-precision residual recover the lost digits.
  Eigen::VectorXd d = sys.lu.solve(f);
  Eigen::VectorXd r(nf);
  for (int round = 0; round < 4; ++round) {
    for (Eigen::Index i = 0; i < nf; ++i) {
      long double acc = f(i);
      for (Eigen::Index j = 0; j < nf; ++j) {
        acc -= static_cast<long double>(sys.k_free(i, j)) * static_cast<long double>(d(j));
      }
      r(i) = static_cast<double>(acc);
    }
    const Eigen::VectorXd correction = sys.lu.solve(r);
    d += correction;
    if (correction.norm() <= 1e-17 * d.norm()) break;
  }
  // Normwise backward error.
  relative_residual = (sys.k_free * d - f).norm() /
                      (sys.k_free.norm() * d.norm() + f_norm);
  if (!(relative_residual < 1e-9)) {
    throw Error(ErrorCode::singular_system,
                "frame solve backward error " + std::to_string(relative_residual) + " exceeds 1e-9");
  }
  for (Eigen::Index i = 0; i < nf; ++i) d_full(sys.free[i]) = d(i);
  return d_full;
}

void add_segment(FrameModel& model, std::size_t from, Node to, int count,
                 const CrossSection& section, const Material& mat, std::size_t& last) {
  const Node origin = model.nodes[from];
  std::size_t prev = from;
  for (int k = 1; k <= count; ++k) {
    const double s = static_cast<double>(k) / count;
    model.nodes.push_back({origin.x + s * (to.x - origin.x), origin.y + s * (to.y - origin.y)});
    const std::size_t id = model.nodes.size() - 1;
    model.elements.push_back({prev, id, section, mat});
    prev = id;
  }
  last = prev;
}

}  // namespace

std::size_t FrameModel::constrained_dof_count() const {
  const std::vector<bool> fixed = fixed_mask(*this);
  return static_cast<std::size_t>(std::count(fixed.begin(), fixed.end(), true));
}

void FrameModel::validate() const {
  if (nodes.empty() || elements.empty()) {
    throw Error(ErrorCode::invalid_geometry, "frame model needs nodes and elements");
  }
  const std::size_t n = nodes.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&parent](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t idx = 0; idx < elements.size(); ++idx) {
    const Element& e = elements[idx];
    if (e.start >= n || e.end >= n || e.start == e.end) {
      throw Error(ErrorCode::invalid_geometry,
                  "element " + std::to_string(idx) + " has invalid node indices");
    }
    if (!(element_frame(*this, e).length > 0.0)) {
      throw Error(ErrorCode::invalid_geometry, "element " + std::to_string(idx) + " has zero length");
    }
    if (!(e.section.width > 0.0) || !(e.section.thickness > 0.0)) {
      throw Error(ErrorCode::invalid_geometry,
                  "element " + std::to_string(idx) + " has a non-positive cross-section");
    }
    e.material.validate();
    parent[find(e.start)] = find(e.end);
  }
  const std::size_t root = find(0);
  for (std::size_t i = 1; i < n; ++i) {
    if (find(i) != root) {
      throw Error(ErrorCode::invalid_geometry,
                  "frame is not connected (node " + std::to_string(i) + ")");
    }
  }
  bool clamped = false;
  for (const Constraint& c : constraints) {
    if (c.node >= n) throw Error(ErrorCode::invalid_geometry, "constraint on missing node");
    clamped = clamped || (c.fixed & dof_all) == dof_all;
  }
  if (!clamped) throw Error(ErrorCode::invalid_geometry, "frame needs at least one fully fixed node");
  for (const NodalLoad& l : loads) {
    if (l.node >= n) throw Error(ErrorCode::invalid_geometry, "load on missing node");
  }
}

FrameSolution solve_frame(const FrameModel& model) {
  const ReducedSystem sys = factor(model);

  Eigen::VectorXd f = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(model.dof_count()));
  for (const NodalLoad& l : model.loads) {
    const auto o = static_cast<Eigen::Index>(3 * l.node);
    f(o) += l.fx;
    f(o + 1) += l.fy;
    f(o + 2) += l.moment;
  }

  FrameSolution sol;
  sol.reference_modulus = sys.e_ref;
  const Eigen::VectorXd scaled = solve_scaled(sys, f, sol.relative_residual);

  sol.displacements.resize(model.nodes.size());
  sol.scaled_displacements.resize(model.nodes.size());
  for (std::size_t i = 0; i < model.nodes.size(); ++i) {
    const auto o = static_cast<Eigen::Index>(3 * i);
    sol.scaled_displacements[i] = {scaled(o), scaled(o + 1), scaled(o + 2)};
    sol.displacements[i] = {scaled(o) / sys.e_ref, scaled(o + 1) / sys.e_ref,
                            scaled(o + 2) / sys.e_ref};
  }

  sol.element_stresses.reserve(model.elements.size());
  for (const Element& e : model.elements) {
    const ElementFrame fr = element_frame(model, e);
    const double area = e.section.width * e.section.thickness;
    const double inertia = second_moment(e.section);
    const auto dofs = element_dofs(e);
    Vector6 de;
    for (int i = 0; i < 6; ++i) de(i) = scaled(static_cast<Eigen::Index>(dofs[i]));
    // The factor E_e / E_ref applied to scaled displacements gives physical forces.
    const Vector6 local = local_stiffness(fr.length, area, inertia, e.material.youngs_modulus / sys.e_ref) *
                          (rotation(fr) * de);
    const double c = e.section.thickness / 2.0;
    ElementStress s;
    s.axial = local(3) / area;
    s.bending_start = std::abs(local(2)) * c / inertia;
    s.bending_end = std::abs(local(5)) * c / inertia;
    sol.element_stresses.push_back(s);
  }
  return sol;
}

double influence_coefficient(const FrameModel& model, std::size_t node_i, Dof dof_i,
                             std::size_t node_j, Dof dof_j) {
  auto offset = [](Dof d) -> Eigen::Index {
    switch (d) {
      case dof_u: return 0;
      case dof_v: return 1;
      case dof_theta: return 2;
      default: throw Error(ErrorCode::invalid_argument, "influence_coefficient needs a single DOF");
    }
  };
  if (node_i >= model.nodes.size() || node_j >= model.nodes.size()) {
    throw Error(ErrorCode::invalid_argument, "influence_coefficient node out of range");
  }
  const ReducedSystem sys = factor(model);
  Eigen::VectorXd f = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(model.dof_count()));
  f(static_cast<Eigen::Index>(3 * node_i) + offset(dof_i)) = 1.0;
  double residual = 0.0;
  const Eigen::VectorXd d = solve_scaled(sys, f, residual);
  return d(static_cast<Eigen::Index>(3 * node_j) + offset(dof_j)) / sys.e_ref;
}

SeesawFrame SeesawFrame::with_active_force(double force) const {
  SeesawFrame copy = *this;
  copy.model.loads = {{active_tip, 0.0, -force, 0.0}};
  return copy;
}

SeesawFrame build_seesaw_frame(const SeesawGeometry& geom, const Material& mat,
                               int elements_per_segment) {
  geom.validate();
  mat.validate();
  if (elements_per_segment < 1) {
    throw Error(ErrorCode::invalid_argument, "elements_per_segment must be >= 1");
  }
  const CrossSection hanging{geom.b, geom.hanging_thickness()};
  const CrossSection supporting{geom.b, geom.supporting_thickness()};

  SeesawFrame f;
  f.l1 = geom.l1;
  f.model.nodes.push_back({0.0, 0.0});
  f.base = 0;
  add_segment(f.model, f.base, {0.0, geom.l2}, elements_per_segment, supporting, mat, f.joint);
  add_segment(f.model, f.joint, {-geom.l1, geom.l2}, elements_per_segment, hanging, mat,
              f.active_tip);
  add_segment(f.model, f.joint, {geom.passive_arm(), geom.l2}, elements_per_segment, hanging, mat,
              f.passive_tip);
  f.model.constraints.push_back({f.base, dof_all});
  return f;
}

SeesawResponse measure(const SeesawFrame& frame, std::span<const NodalDisplacement> field) {
  const NodalDisplacement& a = field[frame.active_tip];
  const NodalDisplacement& p = field[frame.passive_tip];
  const NodalDisplacement& j = field[frame.joint];
  SeesawResponse r;
  r.joint_rotation = j.theta;
  r.active_kinematic = -a.v;
  r.active_deflection = -a.v - frame.l1 * j.theta;
  r.passive_vertical = p.v;
  r.passive_horizontal = p.u;
  return r;
}

double oracle_displacement_ratio(const SeesawGeometry& geom, const Material& mat,
                                 DisplacementConvention conv, int elements_per_segment) {
  const SeesawFrame frame = build_seesaw_frame(geom, mat, elements_per_segment).with_active_force(1.0);
  const FrameSolution sol = solve_frame(frame.model);
  const SeesawResponse r = measure(frame, sol.scaled_displacements);
  return r.active(conv) / r.passive_vertical;
}

double oracle_parasitic_ratio(const SeesawGeometry& geom, const Material& mat,
                              int elements_per_segment) {
  const SeesawFrame frame = build_seesaw_frame(geom, mat, elements_per_segment).with_active_force(1.0);
  const FrameSolution sol = solve_frame(frame.model);
  const SeesawResponse r = measure(frame, sol.scaled_displacements);
  return std::abs(r.passive_vertical) / std::abs(r.passive_horizontal);
}

FrameModel build_cantilever(double length, const CrossSection& section, const Material& mat,
                            int elements) {
  if (elements < 1) throw Error(ErrorCode::invalid_argument, "elements must be >= 1");
  if (!(length > 0.0)) throw Error(ErrorCode::invalid_geometry, "cantilever length must be positive");
  FrameModel m;
  m.nodes.push_back({0.0, 0.0});
  std::size_t last = 0;
  add_segment(m, 0, {length, 0.0}, elements, section, mat, last);
  m.constraints.push_back({0, dof_all});
  return m;
}

}  // namespace seesaw::frame
