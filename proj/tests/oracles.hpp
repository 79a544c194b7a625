#pragma once

// Test-only reference computations. These deliberately avoid the library's
// code paths: beam responses come from integrating curvature numerically,
// and the naive enumerator walks the grid with nested loops.

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <random>

namespace oracle {

/// Rotation and deflection at x = L of a beam clamped at x = 0 carrying
/// bending moment m(x), by composite Simpson integration of m/EI twice.
template <typename MomentFn>
std::array<double, 2> integrate_curvature(MomentFn m, double length, double ei, int panels = 2000) {
  const double h = length / panels;
  double theta = 0.0;
  double w = 0.0;
  // Integrate panel by panel; theta(x) is carried, w accumulates theta.
  for (int i = 0; i < panels; ++i) {
    const double x0 = i * h;
    const double xm = x0 + h / 2.0;
    const double x1 = x0 + h;
    const double k0 = m(x0) / ei, km = m(xm) / ei, k1 = m(x1) / ei;
    const double theta_m = theta + h / 24.0 * (5.0 * k0 + 8.0 * km - k1);
    const double theta_1 = theta + h / 6.0 * (k0 + 4.0 * km + k1);
    w += h / 6.0 * (theta + 4.0 * theta_m + theta_1);
    theta = theta_1;
  }
  return {theta, w};
}

inline double ratio_eq8(double l1, double l2, double l3, double t_hanging, double t_supporting) {
  return std::pow(t_supporting / t_hanging, 3) * l1 * l1 /
         (3.0 * l2 * (l3 + 0.5 * t_supporting));
}

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& g, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(g);
}

inline double rel(double a, double b) {
  const double d = std::max(std::abs(a), std::abs(b));
  return d == 0.0 ? 0.0 : std::abs(a - b) / d;
}

}  // namespace oracle
