// seesaw: design and verification tool for the seesaw-like focus-tuning lever.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "seesaw/commands.hpp"
#include "seesaw/config.hpp"
#include "seesaw/error.hpp"

namespace {

using namespace seesaw;

struct ModelFlags {
  std::string config_path;
  std::string convention;
  std::string assignment;
};

void add_model_flags(CLI::App* cmd, ModelFlags& flags, bool config_required) {
  auto* opt = cmd->add_option("-c,--config", flags.config_path, "run configuration file");
  if (config_required) opt->required();
  cmd->add_option("--convention", flags.convention, "paper-deflection | kinematic-total");
  cmd->add_option("--assignment", flags.assignment, "as-printed | swapped");
}

config::RunConfig load_with_overrides(const ModelFlags& flags) {
  config::RunConfig cfg = config::load_config(flags.config_path);
  if (!flags.convention.empty()) {
    const auto c = commands::parse_convention(flags.convention);
    if (!c) throw Error(ErrorCode::invalid_argument, "unknown --convention '" + flags.convention + "'");
    cfg.convention = *c;
  }
  if (!flags.assignment.empty()) {
    const auto a = commands::parse_assignment(flags.assignment);
    if (!a) throw Error(ErrorCode::invalid_argument, "unknown --assignment '" + flags.assignment + "'");
    cfg.geometry.assignment = *a;
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Seesaw-like compliant lever: mechanics, frame oracle, focus accuracy and design search"};
  app.require_subcommand(1);

  // analyze
  ModelFlags analyze_flags;
  std::optional<double> force, active_mm;
  int sweep_steps = 6;
  std::string analyze_csv;
  bool with_fem = false;
  int analyze_elements = 4;
  auto* analyze = app.add_subcommand("analyze", "deflections, ratio and stresses for one load case");
  add_model_flags(analyze, analyze_flags, true);
  auto* force_opt = analyze->add_option("--force", force, "A-side force in N (positive pushes down)");
  analyze->add_option("--active-mm", active_mm, "prescribed A-side displacement in mm")->excludes(force_opt);
  analyze->add_option("--sweep-steps", sweep_steps, "CSV rows from load/steps up to the load");
  analyze->add_option("--csv", analyze_csv, "write an A-vs-P sweep CSV");
  analyze->add_flag("--with-fem", with_fem, "add frame-solver cross-check columns");
  analyze->add_option("--elements", analyze_elements, "frame elements per segment");

  // adjudicate
  ModelFlags adj_flags;
  std::string adj_csv;
  int adj_elements = 4;
  auto* adjudicate = app.add_subcommand("adjudicate", "compare closed form and frame solver against the reference table");
  add_model_flags(adjudicate, adj_flags, true);
  adjudicate->add_option("--csv", adj_csv, "write the report as CSV");
  adjudicate->add_option("--elements", adj_elements, "frame elements per segment");

  // tuning
  ModelFlags tuning_flags;
  commands::TuningOptions tuning_opts;
  std::optional<double> tuning_ratio;
  bool from_geometry = false;
  auto* tuning = app.add_subcommand("tuning", "focus tuning accuracy delta_z");
  tuning->add_option("--angle-deg", tuning_opts.angle_deg, "minimal screw rotation in degrees");
  tuning->add_option("--pitch-mm", tuning_opts.pitch_mm, "thread pitch in mm");
  auto* ratio_opt = tuning->add_option("--ratio", tuning_ratio, "A:P displacement ratio");
  tuning->add_flag("--from-geometry", from_geometry, "take the ratio from --config")->excludes(ratio_opt);
  add_model_flags(tuning, tuning_flags, false);

  // surface
  commands::SurfaceOptions surface_opts;
  std::string surface_csv;
  auto* surface = app.add_subcommand("surface", "delta_z grid over rotation angle and pitch (CSV)");
  surface->add_option("--ratio", surface_opts.ratio, "A:P displacement ratio");
  surface->add_option("--angle-min-deg", surface_opts.angle_min_deg);
  surface->add_option("--angle-max-deg", surface_opts.angle_max_deg);
  surface->add_option("--pitch-min-mm", surface_opts.pitch_min_mm);
  surface->add_option("--pitch-max-mm", surface_opts.pitch_max_mm);
  surface->add_option("--angle-samples", surface_opts.angle_samples);
  surface->add_option("--pitch-samples", surface_opts.pitch_samples);
  surface->add_option("--csv", surface_csv, "output file (default: standard output)");

  // usaf
  int group = 0, element = 1;
  auto* usaf = app.add_subcommand("usaf", "USAF-1951 line width");
  usaf->add_option("--group", group)->required();
  usaf->add_option("--element", element)->required();

  // dof
  double wavelength = 0.55, na = 0.12;
  auto* dof = app.add_subcommand("dof", "depth of focus lambda / NA^2");
  dof->add_option("--wavelength-um", wavelength);
  dof->add_option("--na", na);

  // optimize
  ModelFlags opt_flags;
  std::string opt_csv;
  unsigned threads = 0;
  int opt_elements = 4;
  auto* optimize = app.add_subcommand("optimize", "constrained grid search over lever geometry");
  add_model_flags(optimize, opt_flags, true);
  optimize->add_option("--csv", opt_csv, "write the ranked candidates (default: standard output)");
  optimize->add_option("--threads", threads, "worker threads (0 = hardware)");
  optimize->add_option("--elements", opt_elements, "frame elements per segment for the top-k check");

  // fem-validate
  int validate_elements = 8;
  auto* fem_validate = app.add_subcommand("fem-validate", "frame solver patch and mesh-convergence table");
  fem_validate->add_option("--elements", validate_elements, "refined element count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  return commands::run_guarded(
      [&]() -> int {
        if (*analyze) {
          commands::AnalyzeOptions o;
          o.config = load_with_overrides(analyze_flags);
          o.force = force;
          o.active_mm = active_mm;
          o.sweep_steps = sweep_steps;
          o.csv_path = analyze_csv;
          o.with_fem = with_fem;
          o.fem_elements = analyze_elements;
          return commands::cmd_analyze(o, std::cout, std::cerr);
        }
        if (*adjudicate) {
          return commands::cmd_adjudicate(load_with_overrides(adj_flags), adj_csv, adj_elements, std::cout);
        }
        if (*tuning) {
          tuning_opts.ratio = tuning_ratio;
          if (from_geometry) {
            if (tuning_flags.config_path.empty()) {
              throw Error(ErrorCode::invalid_argument, "--from-geometry needs --config");
            }
            tuning_opts.from_geometry = load_with_overrides(tuning_flags);
          }
          return commands::cmd_tuning(tuning_opts, std::cout);
        }
        if (*surface) {
          if (surface_csv.empty()) return commands::cmd_surface(surface_opts, std::cout);
          std::ofstream f(surface_csv, std::ios::binary | std::ios::trunc);
          if (!f) throw Error(ErrorCode::invalid_argument, "cannot write '" + surface_csv + "'");
          return commands::cmd_surface(surface_opts, f);
        }
        if (*usaf) return commands::cmd_usaf(group, element, std::cout);
        if (*dof) return commands::cmd_depth_of_focus(wavelength, na, std::cout);
        if (*optimize) {
          commands::OptimizeOptions o;
          o.config = load_with_overrides(opt_flags);
          o.csv_path = opt_csv;
          o.threads = threads;
          o.fem_elements = opt_elements;
          return commands::cmd_optimize(o, std::cout);
        }
        if (*fem_validate) return commands::cmd_fem_validate(validate_elements, std::cout);
        return 1;
      },
      std::cerr);
}
