#include "bohm/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>
#include <type_traits>
#include <utility>

#include "bohm/types.hpp"

namespace bohm::cli {

namespace {

using nlohmann::json;

struct Field {
  std::function<json(const RunConfig&)> get;
  std::function<void(RunConfig&, const json&)> set;
};

std::string type_name(const json& j) { return j.type_name(); }

template <class T>
T read_value(const json& j, const std::string& path);

template <>
double read_value<double>(const json& j, const std::string& path) {
  if (!j.is_number()) throw ValidationError(path + ": expected a number, got " + type_name(j));
  return j.get<double>();
}

template <>
std::size_t read_value<std::size_t>(const json& j, const std::string& path) {
  if (j.is_number_unsigned()) return j.get<std::size_t>();
  if (j.is_number_integer()) throw ValidationError(path + ": must be a non-negative integer");
  throw ValidationError(path + ": expected an integer, got " + type_name(j));
}

template <>
bool read_value<bool>(const json& j, const std::string& path) {
  if (!j.is_boolean()) throw ValidationError(path + ": expected a boolean, got " + type_name(j));
  return j.get<bool>();
}

template <>
std::string read_value<std::string>(const json& j, const std::string& path) {
  if (!j.is_string()) throw ValidationError(path + ": expected a string, got " + type_name(j));
  return j.get<std::string>();
}

template <>
std::vector<double> read_value<std::vector<double>>(const json& j, const std::string& path) {
  if (!j.is_array()) throw ValidationError(path + ": expected an array, got " + type_name(j));
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(read_value<double>(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

template <>
std::vector<std::string> read_value<std::vector<std::string>>(const json& j, const std::string& path) {
  if (!j.is_array()) throw ValidationError(path + ": expected an array, got " + type_name(j));
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(read_value<std::string>(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

template <>
std::array<double, 2> read_value<std::array<double, 2>>(const json& j, const std::string& path) {
  const auto v = read_value<std::vector<double>>(j, path);
  if (v.size() != 2) throw ValidationError(path + ": expected [lo, hi]");
  return {v[0], v[1]};
}

template <class Ref>
Field make_field(const std::string& path, Ref ref) {
  using T = std::remove_cvref_t<decltype(ref(std::declval<RunConfig&>()))>;
  return {[ref](const RunConfig& c) { return json(ref(c)); },
          [ref, path](RunConfig& c, const json& j) { ref(c) = read_value<T>(j, path); }};
}

// Registry of every config key, in help/serialization order.
const std::vector<std::pair<std::string, Field>>& registry() {
  static const auto fields = [] {
    std::vector<std::pair<std::string, Field>> f;
#define BOHM_FIELD(path, member) \
  f.emplace_back(path, make_field(path, [](auto& c) -> auto& { return c.member; }))
    BOHM_FIELD("preset", preset);
    BOHM_FIELD("seed", seed);
    BOHM_FIELD("members", members);
    BOHM_FIELD("h", h);
    BOHM_FIELD("T", T);
    BOHM_FIELD("out", out);
    BOHM_FIELD("emit_trajectories", emit_trajectories);
    BOHM_FIELD("oscillator.omega1", oscillator.omega1);
    BOHM_FIELD("oscillator.alpha", oscillator.alpha);
    BOHM_FIELD("oscillator.a1", oscillator.a1);
    BOHM_FIELD("oscillator.a2", oscillator.a2);
    BOHM_FIELD("oscillator.hbar", oscillator.hbar);
    BOHM_FIELD("oscillator.observables", oscillator.observables);
    BOHM_FIELD("oscillator.space_instants", oscillator.space_instants);
    BOHM_FIELD("oscillator.verdict_factor", oscillator.verdict_factor);
    BOHM_FIELD("oscillator.tail_tolerance", oscillator.tail_tolerance);
    BOHM_FIELD("interferometer.model", interferometer.model);
    BOHM_FIELD("interferometer.k", interferometer.k);
    BOHM_FIELD("interferometer.a", interferometer.a);
    BOHM_FIELD("interferometer.m", interferometer.m);
    BOHM_FIELD("interferometer.hbar", interferometer.hbar);
    BOHM_FIELD("interferometer.epsilon_r", interferometer.epsilon_r);
    BOHM_FIELD("interferometer.delta0", interferometer.delta0);
    BOHM_FIELD("interferometer.sigma0", interferometer.sigma0);
    BOHM_FIELD("interferometer.plane_half_width", interferometer.plane_half_width);
    BOHM_FIELD("interferometer.domain_half_size", interferometer.domain_half_size);
    BOHM_FIELD("interferometer.width_sweep", interferometer.width_sweep);
    BOHM_FIELD("detectors.x0", detectors.x0);
    BOHM_FIELD("detectors.d1", detectors.d1);
    BOHM_FIELD("detectors.d2", detectors.d2);
    BOHM_FIELD("torus.alphas", torus.alphas);
    BOHM_FIELD("torus.grid", torus.grid);
    BOHM_FIELD("torus.record_every", torus.record_every);
    BOHM_FIELD("torus.q1", torus.q1);
    BOHM_FIELD("torus.q2", torus.q2);
    BOHM_FIELD("torus.qdot1", torus.qdot1);
    BOHM_FIELD("torus.qdot2", torus.qdot2);
    BOHM_FIELD("spectral.flip_gap", spectral.flip_gap);
    BOHM_FIELD("spectral.max_dim", spectral.max_dim);
    BOHM_FIELD("spectral.min_gap", spectral.min_gap);
    BOHM_FIELD("spectral.random_horizon", spectral.random_horizon);
#undef BOHM_FIELD
    return f;
  }();
  return fields;
}

const Field* find_field(const std::string& path) {
  for (const auto& [p, f] : registry()) {
    if (p == path) return &f;
  }
  return nullptr;
}

bool is_section(const std::string& path) {
  const std::string prefix = path + ".";
  return std::any_of(registry().begin(), registry().end(),
                     [&](const auto& e) { return e.first.rfind(prefix, 0) == 0; });
}

void overlay(RunConfig& cfg, const json& j, const std::string& prefix) {
  for (const auto& [key, value] : j.items()) {
    const std::string path = prefix.empty() ? key : prefix + "." + key;
    if (const Field* f = find_field(path)) {
      f->set(cfg, value);
    } else if (is_section(path)) {
      if (!value.is_object()) throw ValidationError(path + ": expected an object, got " + type_name(value));
      overlay(cfg, value, path);
    } else {
      throw ValidationError(path + ": unknown key");
    }
  }
}

void require(bool ok, const std::string& path, const std::string& reason) {
  if (!ok) throw ValidationError(path + ": " + reason);
}

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

double RunConfig::plane_half_width() const {
  return interferometer.plane_half_width > 0.0 ? interferometer.plane_half_width : 0.5 * detectors.x0;
}

double RunConfig::domain_half_size() const {
  return interferometer.domain_half_size > 0.0 ? interferometer.domain_half_size : 3.0 * detectors.x0;
}

RunConfig preset_defaults(const std::string& name) {
  RunConfig c;
  c.preset = name;
  if (name == "oscillator-nonergodic") {
    c.members = 1000;
    c.h = 0.02;
    c.T = 200.0 * std::numbers::pi;
  } else if (name == "interferometer-incompatibility") {
    c.members = 10000;
    c.h = 1e-3;
    c.T = 3.0;
  } else if (name == "classical-torus") {
    c.members = 1;
    c.h = 0.02;
    c.T = 1000.0;
  } else if (name == "sqt-ergodic") {
    c.members = 100;
    c.h = 1.0;
    c.T = 1e7;
  } else {
    throw ValidationError("preset: unknown preset '" + name + "'");
  }
  return c;
}

nlohmann::json to_json(const RunConfig& cfg) {
  json j = json::object();
  for (const auto& [path, f] : registry()) {
    j[json::json_pointer("/" + [&] {
      std::string p = path;
      std::replace(p.begin(), p.end(), '.', '/');
      return p;
    }())] = f.get(cfg);
  }
  return j;
}

void apply_json(RunConfig& cfg, const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("config: expected a JSON object at top level");
  overlay(cfg, j, "");
}

RunConfig from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("config: expected a JSON object at top level");
  std::string preset = "interferometer-incompatibility";
  if (j.contains("preset")) preset = read_value<std::string>(j["preset"], "preset");
  RunConfig cfg = preset_defaults(preset);
  apply_json(cfg, j);
  return cfg;
}

void validate(const RunConfig& c) {
  require(std::find(kPresets.begin(), kPresets.end(), c.preset) != kPresets.end(), "preset",
          "unknown preset '" + c.preset + "'");
  require(c.members >= 1, "members", "must be >= 1");
  require(finite_positive(c.h), "h", "must be a finite number > 0");
  require(finite_positive(c.T), "T", "must be a finite number > 0");
  require(c.h <= c.T, "h", "must not exceed T");
  require(!c.out.empty(), "out", "must not be empty");

  const auto& o = c.oscillator;
  require(finite_positive(o.omega1), "oscillator.omega1", "must be > 0");
  require(std::isfinite(o.alpha) && o.alpha >= 0.0, "oscillator.alpha", "must be >= 0");
  require(std::isfinite(o.a1), "oscillator.a1", "must be finite");
  require(std::isfinite(o.a2), "oscillator.a2", "must be finite");
  require(finite_positive(o.hbar), "oscillator.hbar", "must be > 0");
  require(!o.observables.empty(), "oscillator.observables", "must list at least one observable");
  for (std::size_t i = 0; i < o.observables.size(); ++i) {
    static const std::vector<std::string> known = {"Q1", "Q2", "Q1sq", "Q2sq", "P1", "P2", "one"};
    require(std::find(known.begin(), known.end(), o.observables[i]) != known.end(),
            "oscillator.observables[" + std::to_string(i) + "]",
            "unknown observable '" + o.observables[i] + "' (Q1, Q2, Q1sq, Q2sq, P1, P2, one)");
  }
  require(o.space_instants >= 1, "oscillator.space_instants", "must be >= 1");
  require(finite_positive(o.verdict_factor), "oscillator.verdict_factor", "must be > 0");
  require(finite_positive(o.tail_tolerance), "oscillator.tail_tolerance", "must be > 0");

  const auto& w = c.interferometer;
  require(w.model == "bosonic" || w.model == "non-overlap", "interferometer.model",
          "must be 'bosonic' or 'non-overlap'");
  require(finite_positive(w.k), "interferometer.k", "must be > 0");
  require(finite_positive(w.a), "interferometer.a", "must be > 0");
  require(finite_positive(w.m), "interferometer.m", "must be > 0");
  require(finite_positive(w.hbar), "interferometer.hbar", "must be > 0");
  require(finite_positive(w.epsilon_r), "interferometer.epsilon_r", "must be > 0");
  require(w.epsilon_r <= 0.1 * w.a, "interferometer.epsilon_r", "must be <= 0.1 a");
  require(std::isfinite(w.delta0) && w.delta0 >= 0.0, "interferometer.delta0", "must be >= 0");
  require(std::isfinite(w.sigma0) && w.sigma0 >= 0.0, "interferometer.sigma0", "must be >= 0");
  require(std::isfinite(w.plane_half_width) && w.plane_half_width >= 0.0, "interferometer.plane_half_width",
          "must be >= 0 (0 derives x0/2)");
  require(std::isfinite(w.domain_half_size) && w.domain_half_size >= 0.0, "interferometer.domain_half_size",
          "must be >= 0 (0 derives 3 x0)");
  for (std::size_t i = 0; i < w.width_sweep.size(); ++i) {
    require(std::isfinite(w.width_sweep[i]) && w.width_sweep[i] >= 0.0,
            "interferometer.width_sweep[" + std::to_string(i) + "]", "must be >= 0");
  }

  const auto& d = c.detectors;
  require(finite_positive(d.x0), "detectors.x0", "must be > 0");
  require(d.x0 >= 10.0 * w.a, "detectors.x0", "must be >= 10 a (far zone)");
  require(std::isfinite(d.d1[0]) && std::isfinite(d.d1[1]) && d.d1[0] < d.d1[1], "detectors.d1",
          "needs finite lo < hi");
  require(std::isfinite(d.d2[0]) && std::isfinite(d.d2[1]) && d.d2[0] < d.d2[1], "detectors.d2",
          "needs finite lo < hi");
  require(c.domain_half_size() > d.x0, "interferometer.domain_half_size", "must exceed detectors.x0");

  const auto& t = c.torus;
  require(!t.alphas.empty(), "torus.alphas", "must list at least one coupling");
  for (std::size_t i = 0; i < t.alphas.size(); ++i) {
    require(std::isfinite(t.alphas[i]) && t.alphas[i] >= 0.0, "torus.alphas[" + std::to_string(i) + "]",
            "must be >= 0");
  }
  require(t.grid >= 1 && t.grid <= 4096, "torus.grid", "must be in [1, 4096]");
  require(t.record_every >= 1, "torus.record_every", "must be >= 1");
  for (const auto& [name, v] : {std::pair{"torus.q1", t.q1}, {"torus.q2", t.q2}, {"torus.qdot1", t.qdot1},
                                {"torus.qdot2", t.qdot2}}) {
    require(std::isfinite(v), name, "must be finite");
  }

  const auto& s = c.spectral;
  require(finite_positive(s.flip_gap), "spectral.flip_gap", "must be > 0");
  require(s.max_dim >= 2 && s.max_dim <= 256, "spectral.max_dim", "must be in [2, 256]");
  require(finite_positive(s.min_gap), "spectral.min_gap", "must be > 0");
  require(finite_positive(s.random_horizon), "spectral.random_horizon", "must be > 0");
}

std::string describe_keys() {
  std::ostringstream os;
  os << "Config keys (JSON file via --config; dotted names are nested objects).\n"
        "Defaults per preset, in the order "
     << kPresets[0] << " | " << kPresets[1] << " | " << kPresets[2] << " | " << kPresets[3] << ":\n";
  std::vector<RunConfig> defaults;
  for (const auto& p : kPresets) defaults.push_back(preset_defaults(p));
  for (const auto& [path, f] : registry()) {
    std::vector<std::string> values;
    for (const auto& d : defaults) values.push_back(f.get(d).dump());
    os << "  " << path << " = ";
    if (std::all_of(values.begin(), values.end(), [&](const auto& v) { return v == values[0]; })) {
      os << values[0];
    } else {
      for (std::size_t i = 0; i < values.size(); ++i) os << (i ? " | " : "") << values[i];
    }
    os << "\n";
  }
  os << "Notes: members counts oscillator members, interferometer pairs or random spectral systems\n"
        "(ignored by classical-torus). interferometer.plane_half_width = 0 means x0/2 and\n"
        "interferometer.domain_half_size = 0 means 3*x0. For sqt-ergodic, T is the two-level horizon\n"
        "and h is unused. Flags override the file, which overrides preset defaults.\n";
  return os.str();
}

}  // namespace bohm::cli
