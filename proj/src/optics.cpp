#include "seesaw/optics.hpp"

#include <cmath>
#include <string>

#include "seesaw/error.hpp"

namespace seesaw::optics {

namespace {

double grid_value(Range r, std::size_t i, std::size_t n) {
  if (n == 1) return r.low;
  return r.low + (r.high - r.low) * static_cast<double>(i) / static_cast<double>(n - 1);
}

}  // namespace

void OpticsSpec::validate() const {
  if (!(numerical_aperture > 0.0 && numerical_aperture < 1.0)) {
    throw Error(ErrorCode::validation, "numerical_aperture must lie in (0, 1)");
  }
  if (!(wavelength_um > 0.3 && wavelength_um < 1.1)) {
    throw Error(ErrorCode::validation, "wavelength must lie in (0.3, 1.1) um");
  }
  if (!(magnification > 0.0)) throw Error(ErrorCode::validation, "magnification must be positive");
}

void ScrewSpec::validate() const {
  if (!(pitch_mm > 0.0) || !std::isfinite(pitch_mm)) {
    throw Error(ErrorCode::validation, "pitch must be positive");
  }
  if (!(min_rotation_rad > 0.0 && min_rotation_rad <= 2.0 * pi)) {
    throw Error(ErrorCode::validation, "min_rotation must lie in (0, 360] degrees");
  }
  if (!(diameter_mm > 0.0)) throw Error(ErrorCode::validation, "diameter must be positive");
}

double depth_of_focus(const OpticsSpec& optics) {
  optics.validate();
  return optics.wavelength_um / (optics.numerical_aperture * optics.numerical_aperture);
}

TuningResult tuning_accuracy(const ScrewSpec& screw, double ratio) {
  if (!(ratio > 0.0) || !std::isfinite(ratio)) {
    throw Error(ErrorCode::invalid_ratio,
                "displacement ratio must be positive, got " + std::to_string(ratio));
  }
  const double dz_mm = screw.min_rotation_rad * screw.pitch_mm / (2.0 * pi * ratio);
  return {dz_mm * 1000.0, ratio};
}

double required_ratio(double target_dz_um, const ScrewSpec& screw) {
  if (!(target_dz_um > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "target delta_z must be positive");
  }
  return screw.min_rotation_rad * screw.pitch_mm * 1000.0 / (2.0 * pi * target_dz_um);
}

std::vector<SurfacePoint> accuracy_surface(Range pitch_mm, Range angle_rad, double ratio,
                                           std::size_t pitch_samples, std::size_t angle_samples) {
  if (pitch_samples < 2 || angle_samples < 2) {
    throw Error(ErrorCode::invalid_argument, "accuracy surface needs >= 2 samples per axis");
  }
  if (!(pitch_mm.low > 0.0 && pitch_mm.high >= pitch_mm.low) ||
      !(angle_rad.low > 0.0 && angle_rad.high >= angle_rad.low)) {
    throw Error(ErrorCode::invalid_argument, "accuracy surface ranges must be positive and ordered");
  }
  std::vector<SurfacePoint> grid;
  grid.reserve(pitch_samples * angle_samples);
  for (std::size_t i = 0; i < angle_samples; ++i) {
    const double a = grid_value(angle_rad, i, angle_samples);
    for (std::size_t j = 0; j < pitch_samples; ++j) {
      const double p = grid_value(pitch_mm, j, pitch_samples);
      const ScrewSpec screw{p, a, 0.0};
      grid.push_back({a, p, tuning_accuracy(screw, ratio).delta_z_um});
    }
  }
  return grid;
}

double usaf_linewidth(int group, int element) {
  if (element < 1 || element > 6) {
    throw Error(ErrorCode::invalid_element,
                "USAF-1951 element must be 1..6, got " + std::to_string(element));
  }
  if (group < -2 || group > 9) {
    throw Error(ErrorCode::invalid_element,
                "USAF-1951 group must be -2..9, got " + std::to_string(group));
  }
  return 500.0 / std::exp2(group + (element - 1) / 6.0);
}

}  // namespace seesaw::optics
