#pragma once

#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <json.hpp>

#include "bohm/dynamics.hpp"

namespace bohm {

/// Counter-based generator: output n of stream (seed, stream) is a SplitMix64
/// finalization of key + n * gamma. Streams for distinct member indices are
/// independent of evaluation order.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, std::uint64_t stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

enum class EnsembleKind { Gibbs, TimeEnsemble };

std::string to_string(EnsembleKind kind);

struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::Gibbs;
  std::size_t count = 1000;
  std::uint64_t seed = 1;
  /// Width of the Gaussian x-offset x1 - x2 at launch (interferometer).
  double delta0 = 0.0;
  /// Width of the Gaussian y-sum offset y1 + y2 at launch (interferometer).
  double sigma0 = 0.0;
  /// Sampling bounds (oscillator); unused by the interferometer launch.
  Window window;
  /// Launch directions are uniform in (-aperture, aperture) about +x.
  double aperture = 0.5 * std::numbers::pi;

  void validate(const WavefunctionModel& model) const;
};

nlohmann::json to_json(const EnsembleSpec& spec);

/// Realized launch offsets of one interferometer pair.
struct LaunchOffsets {
  double delta = 0.0;  // x1 - x2 at t0
  double sigma = 0.0;  // y1 + y2 at t0
};

struct SampleBatch {
  std::vector<Configuration> members;
  /// Interferometer only; parallel to members.
  std::vector<LaunchOffsets> offsets;
  std::size_t rejected = 0;
  std::string provenance;

  double acceptance_rate() const;
};

/// Sampling window of +-nsigma packet widths around every position the
/// oscillator packet centres visit.
Window oscillator_window(const OscillatorParams& params, double nsigma = 8.0);

/// Bounding box that trajectories may not leave: |x|, |y| <= half_size.
Window interferometer_domain(double half_size);

/// Pair launched from the radius-epsilon_r circles at t0 = epsilon_r / v.
/// Particle 1 leaves slit A in direction theta1; particle 2 leaves slit B in
/// direction -theta2 (mirror image of particle 1 when theta1 == theta2).
Configuration launch_pair(const InterferometerParams& params, double theta1, double theta2);

struct PairLaunch {
  Configuration config;
  LaunchOffsets offsets;
};

/// Perturbs the mirror-symmetric pair at direction theta by the requested
/// (x1 - x2, y1 + y2) offset. Both particles stay on their launch circles,
/// which leaves a single admissible offset direction (-sin theta, cos theta);
/// the request is projected onto it and the realized offsets returned.
PairLaunch launch_with_offsets(const InterferometerParams& params, double theta, double dx,
                               double dy);

/// Born-rule initial configurations.
///  - Oscillator: rejection sampling of |psi(Q1, Q2, t)|^2 in spec.window
///    under a widened Gaussian envelope.
///  - Interferometer: uniform launch direction with Gaussian offsets of
///    widths delta0, sigma0 (see launch_with_offsets); t is ignored and the
///    launch happens at t0.
/// Member i depends only on (spec.seed, i).
SampleBatch sample_initial(const WavefunctionModel& model, const EnsembleSpec& spec, double t = 0.0);

/// Integrates every member; output order matches batch order.
std::vector<Trajectory> evolve_batch(const WavefunctionModel& model, const SampleBatch& batch,
                                     double h, double T, const Window* domain = nullptr);

/// Manifest: spec echo, model id, acceptance rate, provenance and status counts.
nlohmann::json batch_manifest(const WavefunctionModel& model, const EnsembleSpec& spec,
                              const SampleBatch& batch, const std::vector<Trajectory>& trajectories);

/// 64-bit FNV-1a, used for provenance tags.
std::uint64_t fnv1a(std::string_view text);

}  // namespace bohm
