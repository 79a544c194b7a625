#pragma once

// Focus models: depth of focus, screw-driven tuning accuracy and USAF-1951
// line widths. Lengths in micrometres unless a name says otherwise.

#include <cstddef>
#include <vector>

namespace seesaw::optics {

inline constexpr double pi = 3.14159265358979323846;

inline constexpr double deg_to_rad(double deg) noexcept { return deg * pi / 180.0; }
inline constexpr double rad_to_deg(double rad) noexcept { return rad * 180.0 / pi; }

/// The optical resolution is measured, not derived from NA, so it has no field.
struct OpticsSpec {
  double wavelength_um = 0.55;
  double numerical_aperture = 0.12;
  double magnification = 6.0;  // informational

  void validate() const;
};

struct ScrewSpec {
  double pitch_mm = 2.0;
  double min_rotation_rad = deg_to_rad(5.0);
  double diameter_mm = 6.0;  // informational

  void validate() const;
};

struct TuningResult {
  double delta_z_um = 0.0;
  double ratio_used = 0.0;
};

/// d = lambda / NA^2 (unit proportionality constant).
double depth_of_focus(const OpticsSpec& optics);

/// delta_z = a * pitch / (2 pi r). Throws Error(invalid_ratio) for r <= 0.
TuningResult tuning_accuracy(const ScrewSpec& screw, double ratio);

/// Inverse of tuning_accuracy: the displacement ratio reaching target_dz_um.
double required_ratio(double target_dz_um, const ScrewSpec& screw);

struct Range {
  double low = 0.0;
  double high = 0.0;
};

struct SurfacePoint {
  double angle_rad = 0.0;
  double pitch_mm = 0.0;
  double delta_z_um = 0.0;
};

/// Row-major grid (angle outer, pitch inner) of tuning_accuracy evaluations.
std::vector<SurfacePoint> accuracy_surface(Range pitch_mm, Range angle_rad, double ratio,
                                           std::size_t pitch_samples, std::size_t angle_samples);

/// Line width 500 / 2^(group + (element - 1)/6) um. Element 1..6, group -2..9.
double usaf_linewidth(int group, int element);

}  // namespace seesaw::optics
