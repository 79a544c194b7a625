#pragma once

// Command implementations behind the `seesaw` CLI. Each writes its report to
// `out` and returns the process exit code; errors propagate as seesaw::Error
// and are mapped to exit codes by run_guarded.

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "seesaw/config.hpp"
#include "seesaw/mechanics.hpp"

namespace seesaw::commands {

/// Reference values from the characterization table of the fabricated lever.
namespace reference {
inline constexpr double theory_ratio = 11.78;
inline constexpr double simulation_ratio = 11.84;
inline constexpr double experiment_ratio = 11.19;
inline constexpr double experiment_ratio_sd = 0.11;
inline constexpr double theory_passive_um[6] = {85, 170, 255, 340, 424, 509};
inline constexpr double simulation_passive_um[6] = {82, 166, 251, 337, 424, 514};
inline constexpr double experiment_passive_um[6] = {90, 182, 274, 360, 441, 530};
}  // namespace reference

/// Runs `body`, printing any error to `err` and mapping it to an exit code
/// (1 usage/parse, 2 infeasible, 3 numerical failure).
int run_guarded(const std::function<int()>& body, std::ostream& err);

std::optional<ThicknessAssignment> parse_assignment(const std::string& text);
std::optional<DisplacementConvention> parse_convention(const std::string& text);

struct AnalyzeOptions {
  config::RunConfig config;
  std::optional<double> force;      // N
  std::optional<double> active_mm;  // prescribed A-side displacement
  int sweep_steps = 6;
  std::string csv_path;             // empty: no CSV
  bool with_fem = false;
  int fem_elements = 4;
};

int cmd_analyze(const AnalyzeOptions& opts, std::ostream& out, std::ostream& err);

struct AdjudicationRow {
  ThicknessAssignment assignment;
  DisplacementConvention convention;
  double closed_form_ratio = 0.0;
  double fem_ratio = 0.0;
  double dev_closed_vs_theory = 0.0;   // relative, signed
  double dev_fem_vs_simulation = 0.0;
  double dev_fem_vs_experiment = 0.0;
  double closed_form_passive_um[6] = {};  // P side for A = 1..6 mm
};

struct AdjudicationReport {
  std::vector<AdjudicationRow> rows;  // all four combinations
  std::size_t best = 0;               // index of the row closest to the simulation ratio
  /// Parasitic vertical:horizontal ratios for the configured assignment.
  double closed_form_parasitic = 0.0;
  double fem_parasitic = 0.0;
};

AdjudicationReport build_adjudication(const SeesawGeometry& geom, const Material& mat,
                                      int fem_elements = 4);

void write_adjudication_text(const AdjudicationReport& report, std::ostream& out);
void write_adjudication_csv(const AdjudicationReport& report, std::ostream& out);

int cmd_adjudicate(const config::RunConfig& cfg, const std::string& csv_path, int fem_elements,
                   std::ostream& out);

struct TuningOptions {
  double angle_deg = 5.0;
  double pitch_mm = 2.0;
  std::optional<double> ratio;
  std::optional<config::RunConfig> from_geometry;
};

int cmd_tuning(const TuningOptions& opts, std::ostream& out);

struct SurfaceOptions {
  double ratio = 11.0;
  double angle_min_deg = 0.5;
  double angle_max_deg = 30.0;
  double pitch_min_mm = 0.5;
  double pitch_max_mm = 3.0;
  int angle_samples = 25;
  int pitch_samples = 25;
};

/// Writes the surface CSV to `out`.
int cmd_surface(const SurfaceOptions& opts, std::ostream& out);

int cmd_usaf(int group, int element, std::ostream& out);

int cmd_depth_of_focus(double wavelength_um, double numerical_aperture, std::ostream& out);

struct OptimizeOptions {
  config::RunConfig config;
  std::string csv_path;
  unsigned threads = 0;
  int fem_elements = 4;
};

/// Exit 2 when the feasible set is empty.
int cmd_optimize(const OptimizeOptions& opts, std::ostream& out);

/// Patch and mesh-convergence table. Exit 3 if a check fails.
int cmd_fem_validate(int elements, std::ostream& out);

}  // namespace seesaw::commands
