#include "seesaw/design_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>
#include <tuple>

#include "seesaw/error.hpp"
#include "seesaw/frame.hpp"

namespace seesaw::search {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();
constexpr double min_refine_step = 1e-4;

auto geometry_key(const SeesawGeometry& g) { return std::tie(g.l1, g.l2, g.l3, g.t1, g.t2, g.b); }

double objective(const DesignConstraints& c, double ratio, double dz) {
  if (c.target_ratio) return std::abs(ratio - *c.target_ratio);
  return std::abs(dz - *c.target_dz);
}

struct Partial {
  std::vector<DesignCandidate> feasible;
  Census census;
};

void trim(std::vector<DesignCandidate>& v, std::size_t keep) {
  if (keep == 0 || v.size() <= keep) return;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(keep), v.end(), ranks_before);
  v.resize(keep);
}

std::size_t reason_index(Infeasibility r) {
  for (std::size_t i = 0; i < infeasibility_reasons.size(); ++i) {
    if (infeasibility_reasons[i] == r) return i;
  }
  return 0;
}

}  // namespace

double ParameterRange::value(int i) const noexcept {
  if (samples <= 1) return low;
  return low + (high - low) * static_cast<double>(i) / static_cast<double>(samples - 1);
}

double ParameterRange::spacing() const noexcept {
  if (samples <= 1) return high - low;
  return (high - low) / static_cast<double>(samples - 1);
}

DesignSpace DesignSpace::around(const SeesawGeometry& geom, const Material& mat) {
  DesignSpace s;
  s.l1 = ParameterRange::fixed(geom.l1);
  s.l2 = ParameterRange::fixed(geom.l2);
  s.l3 = ParameterRange::fixed(geom.l3);
  s.t1 = ParameterRange::fixed(geom.t1);
  s.t2 = ParameterRange::fixed(geom.t2);
  s.b = ParameterRange::fixed(geom.b);
  s.material = mat;
  s.assignment = geom.assignment;
  return s;
}

std::size_t DesignSpace::candidate_count() const noexcept {
  std::size_t n = 1;
  for (const ParameterRange* r : ranges()) {
    if (r->samples < 1) return 0;
    const auto s = static_cast<std::size_t>(r->samples);
    if (n > std::numeric_limits<std::size_t>::max() / s) return std::numeric_limits<std::size_t>::max();
    n *= s;
  }
  return n;
}

SeesawGeometry DesignSpace::geometry_at(std::size_t index) const {
  std::array<double, 6> v{};
  const auto rs = ranges();
  for (int k = 5; k >= 0; --k) {
    const auto s = static_cast<std::size_t>(rs[k]->samples);
    v[k] = rs[k]->value(static_cast<int>(index % s));
    index /= s;
  }
  return {v[0], v[1], v[2], v[3], v[4], v[5], assignment};
}

bool DesignSpace::contains(const SeesawGeometry& g) const noexcept {
  const std::array<double, 6> v{g.l1, g.l2, g.l3, g.t1, g.t2, g.b};
  const auto rs = ranges();
  for (int k = 0; k < 6; ++k) {
    if (!(v[k] >= rs[k]->low && v[k] <= rs[k]->high)) return false;
  }
  return true;
}

void DesignSpace::validate() const {
  static constexpr std::array<const char*, 6> names{"l1", "l2", "l3", "t1", "t2", "b"};
  const auto rs = ranges();
  for (int k = 0; k < 6; ++k) {
    if (!(rs[k]->low <= rs[k]->high)) {
      throw Error(ErrorCode::validation, std::string("search range ") + names[k] + ": low > high");
    }
    if (rs[k]->samples < 1) {
      throw Error(ErrorCode::validation, std::string("search range ") + names[k] + ": samples must be >= 1");
    }
  }
  material.validate();
  screw.validate();
  if (candidate_count() > candidate_cap) {
    throw Error(ErrorCode::validation, "design space has " + std::to_string(candidate_count()) +
                                           " candidates, over the cap of " + std::to_string(candidate_cap));
  }
}

void DesignConstraints::validate() const {
  if (!(min_feature > 0.0)) throw Error(ErrorCode::validation, "min_feature must be positive");
  if (!(required_stroke > 0.0)) throw Error(ErrorCode::validation, "required_stroke must be positive");
  if (!(safety_factor >= 1.0)) throw Error(ErrorCode::validation, "safety_factor must be >= 1");
  if (!(max_parasitic_fraction > 0.0)) {
    throw Error(ErrorCode::validation, "max_parasitic_fraction must be positive");
  }
  if (target_dz.has_value() == target_ratio.has_value()) {
    throw Error(ErrorCode::validation, "exactly one of target_dz / target_ratio must be set");
  }
  if (target_dz && !(*target_dz > 0.0)) throw Error(ErrorCode::validation, "target_dz must be positive");
  if (target_ratio && !(*target_ratio > 0.0)) {
    throw Error(ErrorCode::validation, "target_ratio must be positive");
  }
}

const char* to_string(Infeasibility reason) noexcept {
  switch (reason) {
    case Infeasibility::none: return "none";
    case Infeasibility::printability: return "printability";
    case Infeasibility::ratio_range: return "ratio-range";
    case Infeasibility::strength: return "strength";
    case Infeasibility::parasitic: return "parasitic";
  }
  return "unknown";
}

std::size_t Census::count(Infeasibility reason) const noexcept {
  if (reason == Infeasibility::none) return feasible;
  return infeasible[reason_index(reason)];
}

bool ranks_before(const DesignCandidate& a, const DesignCandidate& b) noexcept {
  if (a.objective_score != b.objective_score) return a.objective_score < b.objective_score;
  if (a.max_stress_at_stroke != b.max_stress_at_stroke) {
    return a.max_stress_at_stroke < b.max_stress_at_stroke;
  }
  return geometry_key(a.geometry) < geometry_key(b.geometry);
}

DesignCandidate evaluate_candidate(const SeesawGeometry& geom, const DesignSpace& space,
                                   const DesignConstraints& constraints) {
  DesignCandidate c;
  c.geometry = geom;

  const std::array<double, 6> lengths{geom.l1, geom.l2, geom.l3, geom.t1, geom.t2, geom.b};
  const bool printable = std::all_of(lengths.begin(), lengths.end(), [&](double v) {
    return std::isfinite(v) && v >= constraints.min_feature;
  });
  if (!printable) {
    c.achieved_ratio = c.achieved_dz = c.max_stress_at_stroke = c.parasitic_fraction = nan;
    c.objective_score = std::numeric_limits<double>::infinity();
    c.reason = Infeasibility::printability;
    return c;
  }

  const double arm = geom.passive_arm();
  const double deflection_ratio = displacement_ratio_closed_form(geom);
  c.achieved_ratio = space.convention == DisplacementConvention::paper_deflection
                         ? deflection_ratio
                         : deflection_ratio + geom.l1 / arm;
  c.achieved_dz = optics::tuning_accuracy(space.screw, c.achieved_ratio).delta_z_um;
  c.objective_score = objective(constraints, c.achieved_ratio, c.achieved_dz);

  // Load that lifts the P tip by the required stroke.
  const double i2 = second_moment({geom.b, geom.supporting_thickness()});
  const double theta_per_newton =
      support_rotation(geom.l1, geom.l2, i2, space.material.youngs_modulus).rotation;
  const double force = constraints.required_stroke / (arm * theta_per_newton);
  const BeamTip support =
      support_rotation(force * geom.l1, geom.l2, i2, space.material.youngs_modulus);
  const double w3 = arm * support.rotation;

  c.max_stress_at_stroke = max_bending_stress(geom, force).max();
  c.parasitic_fraction = support.deflection / w3;

  if (!(c.achieved_ratio > 1.0) || !(std::abs(support.rotation) < small_angle_limit)) {
    c.reason = Infeasibility::ratio_range;
  } else if (c.max_stress_at_stroke * constraints.safety_factor > space.material.bending_strength) {
    c.reason = Infeasibility::strength;
  } else if (c.parasitic_fraction > constraints.max_parasitic_fraction) {
    c.reason = Infeasibility::parasitic;
  } else {
    c.feasible = true;
  }
  return c;
}

SearchResult grid_search(const DesignSpace& space, const DesignConstraints& constraints,
                         std::size_t keep, unsigned threads) {
  space.validate();
  constraints.validate();
  const std::size_t n = space.candidate_count();

  unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(1, n / 256)));

  std::vector<Partial> partials(workers);
  auto run = [&](unsigned w) {
    const std::size_t begin = n * w / workers;
    const std::size_t end = n * (w + 1) / workers;
    Partial& p = partials[w];
    for (std::size_t i = begin; i < end; ++i) {
      DesignCandidate c = evaluate_candidate(space.geometry_at(i), space, constraints);
      ++p.census.total;
      if (c.feasible) {
        ++p.census.feasible;
        p.feasible.push_back(c);
        if (keep != 0 && p.feasible.size() >= 2 * keep + 1024) trim(p.feasible, keep);
      } else {
        ++p.census.infeasible[reason_index(c.reason)];
      }
    }
    trim(p.feasible, keep);
  };

  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
  }

  SearchResult result;
  for (Partial& p : partials) {
    result.census.total += p.census.total;
    result.census.feasible += p.census.feasible;
    for (std::size_t r = 0; r < result.census.infeasible.size(); ++r) {
      result.census.infeasible[r] += p.census.infeasible[r];
    }
    result.ranked.insert(result.ranked.end(), p.feasible.begin(), p.feasible.end());
  }
  std::sort(result.ranked.begin(), result.ranked.end(), ranks_before);
  if (keep != 0 && result.ranked.size() > keep) result.ranked.resize(keep);
  return result;
}

RefineResult local_refine(const DesignCandidate& start, const DesignSpace& space,
                          const DesignConstraints& constraints, int max_iters) {
  if (!start.feasible) {
    throw Error(ErrorCode::invalid_argument, "local_refine needs a feasible starting candidate");
  }
  const auto rs = space.ranges();
  std::array<double, 6> step{};
  for (int k = 0; k < 6; ++k) step[k] = rs[k]->high > rs[k]->low ? rs[k]->spacing() / 2.0 : 0.0;

  auto coords = [](const SeesawGeometry& g) {
    return std::array<double, 6>{g.l1, g.l2, g.l3, g.t1, g.t2, g.b};
  };

  RefineResult out;
  out.best = start;
  auto max_step = [&step] { return *std::max_element(step.begin(), step.end()); };

  while (out.iterations < max_iters && max_step() >= min_refine_step) {
    bool improved = false;
    for (int k = 0; k < 6; ++k) {
      if (step[k] == 0.0) continue;
      for (const double dir : {1.0, -1.0}) {
        std::array<double, 6> x = coords(out.best.geometry);
        const double moved = std::clamp(x[k] + dir * step[k], rs[k]->low, rs[k]->high);
        if (moved == x[k]) continue;
        x[k] = moved;
        const SeesawGeometry g{x[0], x[1], x[2], x[3], x[4], x[5], out.best.geometry.assignment};
        const DesignCandidate trial = evaluate_candidate(g, space, constraints);
        if (trial.feasible && trial.objective_score < out.best.objective_score) {
          out.best = trial;
          improved = true;
          break;
        }
      }
    }
    ++out.iterations;
    out.trace.push_back(out.best.objective_score);
    if (!improved) {
      for (double& s : step) s /= 2.0;
    }
  }
  return out;
}

std::vector<FemCheck> fem_validate_top(const SearchResult& result, const DesignSpace& space,
                                       std::size_t k, int elements_per_segment) {
  std::vector<FemCheck> checks;
  for (std::size_t i = 0; i < std::min(k, result.ranked.size()); ++i) {
    const DesignCandidate& c = result.ranked[i];
    const double fem = frame::oracle_displacement_ratio(c.geometry, space.material, space.convention,
                                                        elements_per_segment);
    checks.push_back({c, fem, std::abs(fem - c.achieved_ratio) / std::abs(c.achieved_ratio)});
  }
  return checks;
}

}  // namespace seesaw::search
