#include "seesaw/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "seesaw/error.hpp"

namespace seesaw::config {

namespace {

struct Entry {
  std::string value;
  int line = 0;
};

using Section = std::map<std::string, Entry>;

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"geometry", {"l1", "l2", "l3", "t1", "t2", "b", "thickness_assignment", "convention"}},
      {"material", {"name", "youngs_modulus", "bending_strength", "density"}},
      {"screw", {"pitch", "min_rotation", "diameter"}},
      {"optics", {"wavelength", "numerical_aperture", "magnification"}},
      {"search", {"l1", "l2", "l3", "t1", "t2", "b", "candidate_cap", "top_k", "keep", "refine_iters"}},
      {"constraints",
       {"min_feature", "required_stroke", "safety_factor", "max_parasitic_fraction", "target_dz",
        "target_ratio"}},
  };
  return keys;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void parse_error(int line, const std::string& what) {
  throw Error(ErrorCode::parse, "line " + std::to_string(line) + ": " + what);
}

[[noreturn]] void field_error(const std::string& section, const std::string& key,
                              const std::string& what) {
  throw Error(ErrorCode::validation, "[" + section + "] " + key + ": " + what);
}

std::map<std::string, Section> tokenize(std::string_view text) {
  std::map<std::string, Section> sections;
  std::string current;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') parse_error(line_no, "unterminated section header");
      const std::string name(trim(line.substr(1, line.size() - 2)));
      if (!known_keys().contains(name)) parse_error(line_no, "unknown section [" + name + "]");
      if (sections.contains(name)) parse_error(line_no, "duplicate section [" + name + "]");
      sections[name];
      current = name;
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) parse_error(line_no, "expected 'key = value'");
    if (current.empty()) parse_error(line_no, "key outside of any section");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) parse_error(line_no, "empty key");
    if (value.empty()) parse_error(line_no, "empty value for '" + key + "'");
    if (!known_keys().at(current).contains(key)) {
      parse_error(line_no, "unknown key '" + key + "' in [" + current + "]");
    }
    Section& sec = sections[current];
    if (sec.contains(key)) parse_error(line_no, "duplicate key '" + key + "'");
    sec[key] = {value, line_no};
  }
  return sections;
}

double to_number(const std::string& section, const std::string& key, const std::string& text) {
  double v = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  if (*begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || ptr != end || !std::isfinite(v)) {
    field_error(section, key, "'" + text + "' is not a finite number");
  }
  return v;
}

class SectionReader {
 public:
  SectionReader(std::string name, const Section* sec) : name_(std::move(name)), sec_(sec) {}

  bool has(const std::string& key) const { return sec_ && sec_->contains(key); }

  std::optional<double> number(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return to_number(name_, key, sec_->at(key).value);
  }

  double positive(const std::string& key, std::optional<double> fallback = std::nullopt) const {
    const std::optional<double> v = number(key);
    if (!v && !fallback) field_error(name_, key, "missing required key");
    const double x = v ? *v : *fallback;
    if (!(x > 0.0)) field_error(name_, key, "must be strictly positive (got " + sec_->at(key).value + ")");
    return x;
  }

  std::size_t count(const std::string& key, std::size_t fallback) const {
    const std::optional<double> v = number(key);
    if (!v) return fallback;
    if (*v < 0.0 || std::floor(*v) != *v || *v > 1e15) field_error(name_, key, "must be a non-negative integer");
    return static_cast<std::size_t>(*v);
  }

  std::string text(const std::string& key, const std::string& fallback) const {
    return has(key) ? sec_->at(key).value : fallback;
  }

  search::ParameterRange range(const std::string& key, double fixed) const {
    if (!has(key)) return search::ParameterRange::fixed(fixed);
    const std::string& raw = sec_->at(key).value;
    std::vector<std::string> parts;
    std::stringstream ss(raw);
    for (std::string item; std::getline(ss, item, ',');) parts.emplace_back(trim(item));
    if (parts.size() != 3) field_error(name_, key, "expected 'low, high, samples'");
    search::ParameterRange r;
    r.low = to_number(name_, key, parts[0]);
    r.high = to_number(name_, key, parts[1]);
    const double s = to_number(name_, key, parts[2]);
    if (!(r.low <= r.high)) field_error(name_, key, "low must not exceed high");
    if (s < 1.0 || std::floor(s) != s || s > 1e9) field_error(name_, key, "samples must be an integer >= 1");
    r.samples = static_cast<int>(s);
    return r;
  }

 private:
  std::string name_;
  const Section* sec_;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

optics::ScrewSpec ScrewConfig::spec() const noexcept {
  return {pitch, optics::deg_to_rad(min_rotation), diameter};
}

search::DesignSpace RunConfig::design_space() const {
  if (!search) throw Error(ErrorCode::validation, "missing [search]");
  search::DesignSpace s;
  s.l1 = search->l1;
  s.l2 = search->l2;
  s.l3 = search->l3;
  s.t1 = search->t1;
  s.t2 = search->t2;
  s.b = search->b;
  s.material = material;
  s.screw = screw.spec();
  s.assignment = geometry.assignment;
  s.convention = convention;
  s.candidate_cap = search->candidate_cap;
  return s;
}

bool RunConfig::operator==(const RunConfig& o) const {
  return geometry == o.geometry && convention == o.convention && material == o.material &&
         screw == o.screw && optics.wavelength_um == o.optics.wavelength_um &&
         optics.numerical_aperture == o.optics.numerical_aperture &&
         optics.magnification == o.optics.magnification && search == o.search &&
         constraints == o.constraints;
}

RunConfig parse_config(std::string_view text) {
  const auto sections = tokenize(text);
  auto reader = [&sections](const std::string& name) {
    const auto it = sections.find(name);
    return SectionReader(name, it == sections.end() ? nullptr : &it->second);
  };

  if (!sections.contains("geometry")) throw Error(ErrorCode::validation, "missing [geometry]");

  RunConfig cfg;

  const SectionReader geo = reader("geometry");
  cfg.geometry.l1 = geo.positive("l1");
  cfg.geometry.l2 = geo.positive("l2");
  cfg.geometry.l3 = geo.positive("l3");
  cfg.geometry.t1 = geo.positive("t1");
  cfg.geometry.t2 = geo.positive("t2");
  cfg.geometry.b = geo.positive("b");
  const std::string assignment = geo.text("thickness_assignment", "as-printed");
  if (assignment == "as-printed") {
    cfg.geometry.assignment = ThicknessAssignment::as_printed;
  } else if (assignment == "swapped") {
    cfg.geometry.assignment = ThicknessAssignment::swapped;
  } else {
    field_error("geometry", "thickness_assignment", "expected as-printed or swapped, got '" + assignment + "'");
  }
  const std::string convention = geo.text("convention", "paper-deflection");
  if (convention == "paper-deflection") {
    cfg.convention = DisplacementConvention::paper_deflection;
  } else if (convention == "kinematic-total") {
    cfg.convention = DisplacementConvention::kinematic_total;
  } else {
    field_error("geometry", "convention",
                "expected paper-deflection or kinematic-total, got '" + convention + "'");
  }

  const SectionReader mat = reader("material");
  const std::string name = mat.text("name", sections.contains("material") ? "custom" : "resin");
  std::optional<Material> builtin;
  if (name == "resin") builtin = Material::resin();
  if (name == "nylon") builtin = Material::nylon();
  if (builtin) {
    cfg.material = *builtin;
    auto override_field = [&](const char* key, double& field) {
      if (const auto v = mat.number(key)) {
        const double x = mat.positive(key);
        if (x != field) {
          cfg.warnings.push_back(std::string("explicit ") + key + " = " + fmt(*v) +
                                 " overrides the built-in " + name + " value " + fmt(field));
        }
        field = x;
      }
    };
    override_field("youngs_modulus", cfg.material.youngs_modulus);
    override_field("bending_strength", cfg.material.bending_strength);
    override_field("density", cfg.material.density);
  } else {
    cfg.material.name = name;
    cfg.material.youngs_modulus = mat.positive("youngs_modulus");
    cfg.material.bending_strength = mat.positive("bending_strength");
    cfg.material.density = mat.positive("density");
  }

  const SectionReader screw = reader("screw");
  cfg.screw.pitch = screw.positive("pitch", 2.0);
  cfg.screw.min_rotation = screw.positive("min_rotation", 5.0);
  cfg.screw.diameter = screw.positive("diameter", 6.0);
  if (cfg.screw.min_rotation > 360.0) field_error("screw", "min_rotation", "must not exceed 360 degrees");

  const SectionReader opt = reader("optics");
  cfg.optics.wavelength_um = opt.positive("wavelength", 0.55);
  cfg.optics.numerical_aperture = opt.positive("numerical_aperture", 0.12);
  cfg.optics.magnification = opt.positive("magnification", 6.0);
  if (!(cfg.optics.wavelength_um > 0.3 && cfg.optics.wavelength_um < 1.1)) {
    field_error("optics", "wavelength", "must lie in (0.3, 1.1) um");
  }
  if (!(cfg.optics.numerical_aperture < 1.0)) {
    field_error("optics", "numerical_aperture", "must lie in (0, 1)");
  }

  if (sections.contains("search")) {
    const SectionReader s = reader("search");
    SearchConfig sc;
    sc.l1 = s.range("l1", cfg.geometry.l1);
    sc.l2 = s.range("l2", cfg.geometry.l2);
    sc.l3 = s.range("l3", cfg.geometry.l3);
    sc.t1 = s.range("t1", cfg.geometry.t1);
    sc.t2 = s.range("t2", cfg.geometry.t2);
    sc.b = s.range("b", cfg.geometry.b);
    sc.candidate_cap = s.count("candidate_cap", search::default_candidate_cap);
    sc.top_k = s.count("top_k", 5);
    sc.keep = s.count("keep", 20);
    sc.refine_iters = static_cast<int>(s.count("refine_iters", 0));
    cfg.search = sc;
    cfg.design_space().validate();
  }

  if (sections.contains("constraints")) {
    const SectionReader c = reader("constraints");
    search::DesignConstraints dc;
    dc.min_feature = c.positive("min_feature", dc.min_feature);
    dc.required_stroke = c.positive("required_stroke", dc.required_stroke);
    dc.safety_factor = c.positive("safety_factor", dc.safety_factor);
    dc.max_parasitic_fraction = c.positive("max_parasitic_fraction", dc.max_parasitic_fraction);
    if (c.has("target_dz")) dc.target_dz = c.positive("target_dz");
    if (c.has("target_ratio")) dc.target_ratio = c.positive("target_ratio");
    if (dc.safety_factor < 1.0) field_error("constraints", "safety_factor", "must be >= 1");
    if (dc.target_dz.has_value() == dc.target_ratio.has_value()) {
      field_error("constraints", "target_dz", "exactly one of target_dz / target_ratio must be set");
    }
    cfg.constraints = dc;
  }

  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::parse, "cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string emit_config(const RunConfig& c) {
  std::ostringstream out;
  out << "[geometry]\n"
      << "l1 = " << fmt(c.geometry.l1) << "\n"
      << "l2 = " << fmt(c.geometry.l2) << "\n"
      << "l3 = " << fmt(c.geometry.l3) << "\n"
      << "t1 = " << fmt(c.geometry.t1) << "\n"
      << "t2 = " << fmt(c.geometry.t2) << "\n"
      << "b = " << fmt(c.geometry.b) << "\n"
      << "thickness_assignment = " << to_string(c.geometry.assignment) << "\n"
      << "convention = " << to_string(c.convention) << "\n\n";

  out << "[material]\n"
      << "name = " << c.material.name << "\n"
      << "youngs_modulus = " << fmt(c.material.youngs_modulus) << "\n"
      << "bending_strength = " << fmt(c.material.bending_strength) << "\n"
      << "density = " << fmt(c.material.density) << "\n\n";

  out << "[screw]\n"
      << "pitch = " << fmt(c.screw.pitch) << "\n"
      << "min_rotation = " << fmt(c.screw.min_rotation) << "\n"
      << "diameter = " << fmt(c.screw.diameter) << "\n\n";

  out << "[optics]\n"
      << "wavelength = " << fmt(c.optics.wavelength_um) << "\n"
      << "numerical_aperture = " << fmt(c.optics.numerical_aperture) << "\n"
      << "magnification = " << fmt(c.optics.magnification) << "\n";

  if (c.search) {
    auto range = [&out](const char* key, const search::ParameterRange& r) {
      out << key << " = " << fmt(r.low) << ", " << fmt(r.high) << ", " << r.samples << "\n";
    };
    out << "\n[search]\n";
    range("l1", c.search->l1);
    range("l2", c.search->l2);
    range("l3", c.search->l3);
    range("t1", c.search->t1);
    range("t2", c.search->t2);
    range("b", c.search->b);
    out << "candidate_cap = " << c.search->candidate_cap << "\n"
        << "top_k = " << c.search->top_k << "\n"
        << "keep = " << c.search->keep << "\n"
        << "refine_iters = " << c.search->refine_iters << "\n";
  }

  if (c.constraints) {
    const search::DesignConstraints& d = *c.constraints;
    out << "\n[constraints]\n"
        << "min_feature = " << fmt(d.min_feature) << "\n"
        << "required_stroke = " << fmt(d.required_stroke) << "\n"
        << "safety_factor = " << fmt(d.safety_factor) << "\n"
        << "max_parasitic_fraction = " << fmt(d.max_parasitic_fraction) << "\n";
    if (d.target_dz) out << "target_dz = " << fmt(*d.target_dz) << "\n";
    if (d.target_ratio) out << "target_ratio = " << fmt(*d.target_ratio) << "\n";
  }
  return out.str();
}

}  // namespace seesaw::config
