#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace bohm::cli {

inline constexpr const char* kVersion = "0.1.0";

inline const std::vector<std::string> kPresets = {"oscillator-nonergodic", "interferometer-incompatibility",
                                                  "classical-torus", "sqt-ergodic"};

struct OscillatorSection {
  double omega1 = 1.0;
  /// Spring coupling; omega2 = sqrt(1 + 2 alpha) omega1.
  double alpha = 1.5;
  double a1 = 1.0;
  double a2 = 1.0;
  double hbar = 1.0;
  std::vector<std::string> observables = {"Q1", "Q2", "Q1sq"};
  std::size_t space_instants = 32;
  double verdict_factor = 5.0;
  double tail_tolerance = 1e-2;
};

struct InterferometerSection {
  /// "bosonic" or "non-overlap".
  std::string model = "bosonic";
  double k = 10.0;
  double a = 1.0;
  double m = 1.0;
  double hbar = 1.0;
  double epsilon_r = 1e-3;
  double delta0 = 0.0;
  double sigma0 = 0.0;
  /// 0 derives x0 / 2.
  double plane_half_width = 0.0;
  /// 0 derives 3 x0.
  double domain_half_size = 0.0;
  /// Extra time-ensemble runs with delta0 = sigma0 = w for each listed w.
  std::vector<double> width_sweep;
};

struct DetectorSection {
  double x0 = 20.0;
  std::array<double, 2> d1 = {0.5, 1.5};
  std::array<double, 2> d2 = {0.25, 1.25};
};

struct TorusSection {
  std::vector<double> alphas = {1.5, 0.80901699437494745};
  std::size_t grid = 64;
  std::size_t record_every = 500;
  double q1 = 0.3;
  double q2 = 0.1;
  double qdot1 = 0.0;
  double qdot2 = 0.2;
};

struct SpectralSection {
  /// Level spacing of the two-level system run at horizon T.
  double flip_gap = 1.0;
  std::size_t max_dim = 16;
  double min_gap = 0.05;
  double random_horizon = 1e4;
};

/// Everything a run needs. `members` means oscillator members, interferometer
/// pairs or random spectral systems depending on the preset; the torus preset
/// ignores it.
struct RunConfig {
  std::string preset = "interferometer-incompatibility";
  std::uint64_t seed = 1;
  std::size_t members = 10000;
  double h = 1e-3;
  double T = 3.0;
  std::string out = "out";
  bool emit_trajectories = false;
  OscillatorSection oscillator;
  InterferometerSection interferometer;
  DetectorSection detectors;
  TorusSection torus;
  SpectralSection spectral;

  double plane_half_width() const;
  double domain_half_size() const;
};

/// Defaults of a named preset; throws ValidationError for unknown names.
RunConfig preset_defaults(const std::string& name);

nlohmann::json to_json(const RunConfig& cfg);

/// Overlays the keys present in j onto cfg. Unknown keys and type mismatches
/// throw ValidationError naming the dotted field path.
void apply_json(RunConfig& cfg, const nlohmann::json& j);

RunConfig from_json(const nlohmann::json& j);

/// Range checks with dotted field paths in the messages.
void validate(const RunConfig& cfg);

/// Every config key with its default for each preset, for --help.
std::string describe_keys();

}  // namespace bohm::cli
