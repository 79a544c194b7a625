#include "seesaw/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "seesaw/csv.hpp"
#include "seesaw/design_search.hpp"
#include "seesaw/error.hpp"
#include "seesaw/frame.hpp"
#include "seesaw/optics.hpp"

namespace seesaw::commands {

namespace {

using csv::format_number;

std::string pct(double relative) { return format_number(100.0 * relative) + "%"; }

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::invalid_argument, "cannot write '" + path + "'");
  return f;
}

double relative(double value, double ref) { return (value - ref) / ref; }

double convention_ratio(const SeesawGeometry& geom, DisplacementConvention conv) {
  const double r = displacement_ratio_closed_form(geom);
  return conv == DisplacementConvention::paper_deflection ? r : r + geom.l1 / geom.passive_arm();
}

struct FemPoint {
  double active = 0.0;
  double passive = 0.0;
  double horizontal = 0.0;
};

FemPoint fem_at(const SeesawGeometry& geom, const Material& mat, DisplacementConvention conv,
                double force, int elements) {
  const frame::SeesawFrame f = frame::build_seesaw_frame(geom, mat, elements).with_active_force(force);
  const frame::FrameSolution sol = frame::solve_frame(f.model);
  const frame::SeesawResponse r = frame::measure(f, sol.displacements);
  return {r.active(conv), r.passive_vertical, r.passive_horizontal};
}

}  // namespace

int run_guarded(const std::function<int()>& body, std::ostream& err) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error (" << to_string(e.code()) << "): " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 3;
  }
}

std::optional<ThicknessAssignment> parse_assignment(const std::string& text) {
  if (text == "as-printed") return ThicknessAssignment::as_printed;
  if (text == "swapped") return ThicknessAssignment::swapped;
  return std::nullopt;
}

std::optional<DisplacementConvention> parse_convention(const std::string& text) {
  if (text == "paper-deflection") return DisplacementConvention::paper_deflection;
  if (text == "kinematic-total") return DisplacementConvention::kinematic_total;
  return std::nullopt;
}

// ---------------------------------------------------------------- analyze

int cmd_analyze(const AnalyzeOptions& opts, std::ostream& out, std::ostream& err) {
  if (opts.force.has_value() == opts.active_mm.has_value()) {
    throw Error(ErrorCode::invalid_argument, "analyze needs exactly one of --force / --active-mm");
  }
  if (opts.sweep_steps < 1) throw Error(ErrorCode::invalid_argument, "--sweep-steps must be >= 1");
  for (const std::string& w : opts.config.warnings) err << "warning: " << w << "\n";

  const SeesawGeometry& geom = opts.config.geometry;
  const Material& mat = opts.config.material;
  const DisplacementConvention conv = opts.config.convention;
  const LoadCase load = opts.force ? LoadCase::force(*opts.force)
                                   : LoadCase::active_displacement(*opts.active_mm);
  const DeflectionState s = solve_load_case(geom, mat, load, conv);

  const double sigma = std::max(s.sigma_max_hanging, s.sigma_max_supporting);
  const double safe_force = max_safe_force(geom, mat, 1.0);
  const double safe_active = max_safe_active_displacement(geom, mat, 1.0, conv);

  out << "seesaw analysis (" << to_string(geom.assignment) << ", " << to_string(conv) << ", "
      << mat.name << ")\n";
  out << "  force            " << format_number(s.force) << " N\n";
  out << "  w1               " << format_number(s.w1) << " mm\n";
  out << "  theta1           " << format_number(s.theta1) << " rad\n";
  out << "  w2               " << format_number(s.w2) << " mm\n";
  out << "  theta2           " << format_number(s.theta2) << " rad\n";
  out << "  w3               " << format_number(s.w3) << " mm\n";
  out << "  theta3           " << format_number(s.theta3) << " rad\n";
  out << "  active_total     " << format_number(s.active_total) << " mm\n";
  out << "  horizontal_p     " << format_number(s.horizontal_p) << " mm"
      << " (with arc shortening " << format_number(s.horizontal_p_with_arc) << " mm)\n";
  out << "  ratio (w1/w3)    " << format_number(displacement_ratio_closed_form(geom)) << "\n";
  out << "  ratio (" << to_string(conv) << ") " << format_number(convention_ratio(geom, conv)) << "\n";
  out << "  sigma hanging    " << format_number(s.sigma_max_hanging) << " MPa\n";
  out << "  sigma supporting " << format_number(s.sigma_max_supporting) << " MPa\n";
  out << "  max safe force   " << format_number(safe_force) << " N\n";
  out << "  max safe active  " << format_number(safe_active) << " mm\n";
  out << "  strength margin  "
      << (sigma > 0.0 ? format_number(mat.bending_strength / sigma) : std::string("inf")) << "\n";

  FemPoint fem;
  if (opts.with_fem) {
    fem = fem_at(geom, mat, conv, s.force, opts.fem_elements);
    out << "  fem active       " << format_number(fem.active) << " mm\n";
    out << "  fem passive      " << format_number(fem.passive) << " mm\n";
    out << "  fem horizontal   " << format_number(fem.horizontal) << " mm\n";
  }

  if (!opts.csv_path.empty()) {
    std::ofstream f = open_output(opts.csv_path);
    csv::Writer w(f);
    std::vector<std::string> cols{"force_N", "active_mm", "passive_um", "horizontal_um", "sigma_max_MPa"};
    if (opts.with_fem) {
      cols.insert(cols.end(), {"fem_active_mm", "fem_passive_um", "fem_horizontal_um"});
    }
    w.header(cols);
    for (int i = 1; i <= opts.sweep_steps; ++i) {
      const double force = s.force * i / opts.sweep_steps;
      const DeflectionState r = solve_load_case(geom, mat, LoadCase::force(force), conv);
      std::vector<csv::Cell> row{force, r.active_total, 1000.0 * r.w3, 1000.0 * r.horizontal_p,
                                 std::max(r.sigma_max_hanging, r.sigma_max_supporting)};
      if (opts.with_fem) {
        const FemPoint p = fem_at(geom, mat, conv, force, opts.fem_elements);
        row.insert(row.end(), {p.active, 1000.0 * p.passive, 1000.0 * p.horizontal});
      }
      w.row(row);
    }
  }

  if (sigma > mat.bending_strength) {
    out << "constraint violation: max bending stress " << format_number(sigma)
        << " MPa exceeds the bending strength " << format_number(mat.bending_strength) << " MPa\n";
    return 2;
  }
  return 0;
}

// ------------------------------------------------------------- adjudicate

AdjudicationReport build_adjudication(const SeesawGeometry& geom, const Material& mat,
                                      int fem_elements) {
  AdjudicationReport report;
  for (const ThicknessAssignment a : {ThicknessAssignment::as_printed, ThicknessAssignment::swapped}) {
    for (const DisplacementConvention c :
         {DisplacementConvention::paper_deflection, DisplacementConvention::kinematic_total}) {
      SeesawGeometry g = geom;
      g.assignment = a;
      AdjudicationRow row{a, c};
      row.closed_form_ratio = convention_ratio(g, c);
      row.fem_ratio = frame::oracle_displacement_ratio(g, mat, c, fem_elements);
      row.dev_closed_vs_theory = relative(row.closed_form_ratio, reference::theory_ratio);
      row.dev_fem_vs_simulation = relative(row.fem_ratio, reference::simulation_ratio);
      row.dev_fem_vs_experiment = relative(row.fem_ratio, reference::experiment_ratio);
      for (int k = 0; k < 6; ++k) row.closed_form_passive_um[k] = 1000.0 * (k + 1) / row.closed_form_ratio;
      report.rows.push_back(row);
    }
  }
  for (std::size_t i = 1; i < report.rows.size(); ++i) {
    if (std::abs(report.rows[i].dev_fem_vs_simulation) <
        std::abs(report.rows[report.best].dev_fem_vs_simulation)) {
      report.best = i;
    }
  }
  report.closed_form_parasitic = 2.0 * geom.passive_arm() / geom.l2;
  report.fem_parasitic = frame::oracle_parasitic_ratio(geom, mat, fem_elements);
  return report;
}

void write_adjudication_text(const AdjudicationReport& report, std::ostream& out) {
  out << "A:P displacement ratio adjudication\n";
  out << "reference: theory " << format_number(reference::theory_ratio) << ", simulation "
      << format_number(reference::simulation_ratio) << ", experiment "
      << format_number(reference::experiment_ratio) << " +/- "
      << format_number(reference::experiment_ratio_sd) << "\n\n";
  out << "assignment  convention        closed_form  dev_vs_theory  fem_ratio  dev_vs_simulation  "
         "dev_vs_experiment\n";
  for (const AdjudicationRow& r : report.rows) {
    char line[256];
    std::snprintf(line, sizeof line, "%-11s %-17s %-12s %-14s %-10s %-18s %s\n",
                  to_string(r.assignment), to_string(r.convention),
                  format_number(r.closed_form_ratio).c_str(), pct(r.dev_closed_vs_theory).c_str(),
                  format_number(r.fem_ratio).c_str(), pct(r.dev_fem_vs_simulation).c_str(),
                  pct(r.dev_fem_vs_experiment).c_str());
    out << line;
  }
  out << "\nP side (um) for A = 1..6 mm, closed form:\n";
  for (const AdjudicationRow& r : report.rows) {
    out << "  " << to_string(r.assignment) << " / " << to_string(r.convention) << ":";
    for (double p : r.closed_form_passive_um) out << " " << format_number(p);
    out << "\n";
  }
  out << "  reference theory:";
  for (double p : reference::theory_passive_um) out << " " << format_number(p);
  out << "\n  reference simulation:";
  for (double p : reference::simulation_passive_um) out << " " << format_number(p);
  out << "\n  reference experiment:";
  for (double p : reference::experiment_passive_um) out << " " << format_number(p);
  out << "\n\n";

  const AdjudicationRow& printed = report.rows.front();
  out << "printed formula (as-printed, paper-deflection): " << format_number(printed.closed_form_ratio)
      << ", deviation from theory ratio " << pct(printed.dev_closed_vs_theory)
      << (std::abs(printed.dev_closed_vs_theory) > 0.15 ? "  [DISCREPANT]" : "") << "\n";
  out << "parasitic vertical:horizontal: closed form " << format_number(report.closed_form_parasitic)
      << ", fem " << format_number(report.fem_parasitic) << "\n";
  const AdjudicationRow& b = report.rows[report.best];
  out << "verdict: best agreement with the simulation ratio is " << to_string(b.assignment) << " / "
      << to_string(b.convention) << " (fem " << format_number(b.fem_ratio) << ", "
      << pct(b.dev_fem_vs_simulation) << ")"
      << (std::abs(b.dev_fem_vs_simulation) <= 0.15 ? ", within 15%" : ", NOT within 15%") << "\n";
}

void write_adjudication_csv(const AdjudicationReport& report, std::ostream& out) {
  csv::Writer w(out);
  w.header({"thickness_assignment", "convention", "closed_form_ratio", "fem_ratio",
            "reference_theory_ratio", "reference_simulation_ratio", "reference_experiment_ratio",
            "reference_experiment_ratio_sd", "dev_closed_vs_theory_pct", "dev_fem_vs_simulation_pct",
            "dev_fem_vs_experiment_pct", "best"});
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const AdjudicationRow& r = report.rows[i];
    w.row({std::string(to_string(r.assignment)), std::string(to_string(r.convention)),
           r.closed_form_ratio, r.fem_ratio, reference::theory_ratio, reference::simulation_ratio,
           reference::experiment_ratio, reference::experiment_ratio_sd,
           100.0 * r.dev_closed_vs_theory, 100.0 * r.dev_fem_vs_simulation,
           100.0 * r.dev_fem_vs_experiment, static_cast<long long>(i == report.best)});
  }
}

int cmd_adjudicate(const config::RunConfig& cfg, const std::string& csv_path, int fem_elements,
                   std::ostream& out) {
  const AdjudicationReport report = build_adjudication(cfg.geometry, cfg.material, fem_elements);
  write_adjudication_text(report, out);
  if (!csv_path.empty()) {
    std::ofstream f = open_output(csv_path);
    write_adjudication_csv(report, f);
  }
  return 0;
}

// ----------------------------------------------------------------- optics

int cmd_tuning(const TuningOptions& opts, std::ostream& out) {
  if (opts.ratio.has_value() == opts.from_geometry.has_value()) {
    throw Error(ErrorCode::invalid_argument, "tuning needs exactly one of --ratio / --from-geometry");
  }
  double ratio = 0.0;
  if (opts.ratio) {
    ratio = *opts.ratio;
  } else {
    ratio = convention_ratio(opts.from_geometry->geometry, opts.from_geometry->convention);
  }
  const optics::ScrewSpec screw{opts.pitch_mm, optics::deg_to_rad(opts.angle_deg), 6.0};
  if (!(opts.pitch_mm > 0.0)) throw Error(ErrorCode::invalid_argument, "--pitch-mm must be positive");
  if (!(opts.angle_deg >= 0.0)) throw Error(ErrorCode::invalid_argument, "--angle-deg must be >= 0");
  const optics::TuningResult r = optics::tuning_accuracy(screw, ratio);
  out << "min rotation " << format_number(opts.angle_deg) << " deg, pitch "
      << format_number(opts.pitch_mm) << " mm, ratio " << format_number(r.ratio_used) << "\n";
  out << "delta_z = " << format_number(r.delta_z_um) << " um\n";
  return 0;
}

int cmd_surface(const SurfaceOptions& opts, std::ostream& out) {
  if (opts.angle_samples < 2 || opts.pitch_samples < 2) {
    throw Error(ErrorCode::invalid_argument, "surface needs >= 2 samples per axis");
  }
  const auto grid = optics::accuracy_surface(
      {opts.pitch_min_mm, opts.pitch_max_mm},
      {optics::deg_to_rad(opts.angle_min_deg), optics::deg_to_rad(opts.angle_max_deg)}, opts.ratio,
      static_cast<std::size_t>(opts.pitch_samples), static_cast<std::size_t>(opts.angle_samples));
  csv::Writer w(out);
  w.header({"min_rotation_deg", "pitch_mm", "delta_z_um"});
  for (const optics::SurfacePoint& p : grid) {
    w.row({optics::rad_to_deg(p.angle_rad), p.pitch_mm, p.delta_z_um});
  }
  return 0;
}

int cmd_usaf(int group, int element, std::ostream& out) {
  const double lw = optics::usaf_linewidth(group, element);
  char rounded[32];
  std::snprintf(rounded, sizeof rounded, "%.2f", lw);
  out << "group " << group << " element " << element << ": line width " << rounded << " um ("
      << format_number(lw) << " um, " << format_number(1000.0 / (2.0 * lw)) << " lp/mm)\n";
  return 0;
}

int cmd_depth_of_focus(double wavelength_um, double numerical_aperture, std::ostream& out) {
  const optics::OpticsSpec spec{wavelength_um, numerical_aperture, 1.0};
  out << "depth of focus = " << format_number(optics::depth_of_focus(spec)) << " um (lambda "
      << format_number(wavelength_um) << " um, NA " << format_number(numerical_aperture) << ")\n";
  return 0;
}

// --------------------------------------------------------------- optimize

int cmd_optimize(const OptimizeOptions& opts, std::ostream& out) {
  const config::RunConfig& cfg = opts.config;
  if (!cfg.search) throw Error(ErrorCode::validation, "missing [search]");
  if (!cfg.constraints) throw Error(ErrorCode::validation, "missing [constraints]");
  const search::DesignSpace space = cfg.design_space();
  const search::DesignConstraints& constraints = *cfg.constraints;

  search::SearchResult result = search::grid_search(space, constraints, cfg.search->keep, opts.threads);

  out << "candidates " << result.census.total << ", feasible " << result.census.feasible << "\n";
  out << "infeasible census:\n";
  for (const search::Infeasibility r : search::infeasibility_reasons) {
    out << "  " << search::to_string(r) << " " << result.census.count(r) << "\n";
  }
  if (result.ranked.empty()) {
    out << "no feasible candidate\n";
    return 2;
  }

  if (cfg.search->refine_iters > 0) {
    const search::RefineResult refined =
        search::local_refine(result.ranked.front(), space, constraints, cfg.search->refine_iters);
    out << "refined best: objective " << format_number(result.ranked.front().objective_score)
        << " -> " << format_number(refined.best.objective_score) << " after " << refined.iterations
        << " sweeps\n";
    if (refined.best.objective_score < result.ranked.front().objective_score) {
      result.ranked.insert(result.ranked.begin(), refined.best);
      if (cfg.search->keep != 0 && result.ranked.size() > cfg.search->keep) result.ranked.pop_back();
    }
  }

  const auto checks = search::fem_validate_top(result, space, cfg.search->top_k, opts.fem_elements);
  out << "frame-solver check of top " << checks.size() << ":\n";
  for (std::size_t i = 0; i < checks.size(); ++i) {
    out << "  #" << i + 1 << " closed form " << format_number(checks[i].candidate.achieved_ratio)
        << ", fem " << format_number(checks[i].fem_ratio) << ", deviation "
        << pct(checks[i].relative_deviation) << "\n";
  }

  auto write = [&](std::ostream& s) {
    csv::Writer w(s);
    w.header({"rank", "l1_mm", "l2_mm", "l3_mm", "t1_mm", "t2_mm", "b_mm", "ratio", "dz_um",
              "max_stress_MPa", "parasitic_fraction", "objective"});
    for (std::size_t i = 0; i < result.ranked.size(); ++i) {
      const search::DesignCandidate& c = result.ranked[i];
      w.row({static_cast<long long>(i + 1), c.geometry.l1, c.geometry.l2, c.geometry.l3,
             c.geometry.t1, c.geometry.t2, c.geometry.b, c.achieved_ratio, c.achieved_dz,
             c.max_stress_at_stroke, c.parasitic_fraction, c.objective_score});
    }
  };
  if (opts.csv_path.empty()) {
    write(out);
  } else {
    std::ofstream f = open_output(opts.csv_path);
    write(f);
  }
  return 0;
}

// ----------------------------------------------------------- fem-validate

int cmd_fem_validate(int elements, std::ostream& out) {
  if (elements < 1) throw Error(ErrorCode::invalid_argument, "--elements must be >= 1");
  const Material mat = Material::resin();
  const CrossSection section{8.0, 1.5};
  const double length = 25.0;
  const double ei = mat.youngs_modulus * second_moment(section);
  const double tol = 1e-9;
  bool ok = true;

  auto report = [&](const std::string& name, double fem, double exact) {
    const double rel = std::abs(fem - exact) / std::abs(exact);
    const bool pass = rel < tol;
    ok = ok && pass;
    char line[256];
    std::snprintf(line, sizeof line, "%-40s fem %-14.10g exact %-14.10g rel %-10.3g %s\n", name.c_str(),
                  fem, exact, rel, pass ? "PASS" : "FAIL");
    out << line;
  };

  for (const int n : {1, elements}) {
    frame::FrameModel m = frame::build_cantilever(length, section, mat, n);
    const std::size_t tip = m.nodes.size() - 1;
    m.loads = {{tip, 0.0, 1.0, 0.0}};
    report("cantilever end load, " + std::to_string(n) + " el, tip v", frame::solve_frame(m).displacements[tip].v,
           length * length * length / (3.0 * ei));
    m.loads = {{tip, 0.0, 0.0, 1.0}};
    report("cantilever end moment, " + std::to_string(n) + " el, tip theta",
           frame::solve_frame(m).displacements[tip].theta, length / ei);
  }

  const SeesawGeometry geom = SeesawGeometry::reference(ThicknessAssignment::swapped);
  auto tips = [&](int n) {
    const frame::SeesawFrame f = frame::build_seesaw_frame(geom, mat, n).with_active_force(1.0);
    return frame::measure(f, frame::solve_frame(f.model).displacements);
  };
  const frame::SeesawResponse coarse = tips(1);
  const frame::SeesawResponse fine = tips(elements);
  report("seesaw A tip, 1 vs " + std::to_string(elements) + " el", fine.active_kinematic,
         coarse.active_kinematic);
  report("seesaw P tip, 1 vs " + std::to_string(elements) + " el", fine.passive_vertical,
         coarse.passive_vertical);

  out << (ok ? "patch tests: PASS\n" : "patch tests: FAIL\n");
  return ok ? 0 : 3;
}

}  // namespace seesaw::commands
