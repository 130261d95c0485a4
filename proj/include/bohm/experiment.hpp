#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>

#include <json.hpp>

#include "bohm/ensembles.hpp"

namespace bohm {

/// Detector interval [y_min, y_max] on the plane x = x0.
struct DetectorRegion {
  double x0 = 20.0;
  double y_min = 0.0;
  double y_max = 1.0;
  std::string label = "D1";

  /// Requires y_min < y_max and x0 >= 10 a (far zone).
  void validate(double a) const;
  bool contains(double y) const { return y >= y_min && y <= y_max; }
};

struct DetectorPair {
  DetectorRegion d1;
  DetectorRegion d2;

  void validate(double a) const;
  /// D1' = reflection of D2, D2' = reflection of D1.
  DetectorPair reflected_and_swapped() const;
};

/// Default geometry: x0 = 20 a, D1 = [0.5 a, 1.5 a], D2 = [0.25 a, 1.25 a].
DetectorPair default_detectors(double a);

enum class DetectorHit { None, D1, D2 };

std::string to_string(DetectorHit hit);

struct DetectionEvent {
  std::size_t member = 0;
  int particle = 1;
  /// False when the particle never reached the plane within the trajectory.
  bool crossed = false;
  double t_cross = 0.0;
  double y_cross = 0.0;
  DetectorHit detector = DetectorHit::None;
};

/// First-crossing detection of the plane x = x0 by each particle, with linear
/// interpolation between bracketing samples. Fed one sample at a time so the
/// same logic serves stored and streamed trajectories.
class CrossingTracker {
 public:
  CrossingTracker(const DetectorPair& regions, std::size_t member = 0);

  void feed(const Configuration& c);
  bool done() const { return events_[0].crossed && events_[1].crossed; }
  const std::pair<DetectionEvent, DetectionEvent> events() const { return {events_[0], events_[1]}; }
  bool joint_hit() const;

 private:
  DetectorPair regions_;
  std::array<DetectionEvent, 2> events_;
  std::optional<Configuration> previous_;
};

std::pair<DetectionEvent, DetectionEvent> detect(const Trajectory& traj, const DetectorPair& regions,
                                                 std::size_t member = 0);

struct ProbabilityEstimate {
  double value = 0.0;
  /// One-sigma error: Wilson score half-width at z = 1, or the quadrature error.
  double std_error = 0.0;
  double lo95 = 0.0;
  double hi95 = 0.0;
};

struct DetectionCounts {
  std::size_t members = 0;
  std::size_t joint = 0;
  std::size_t single = 0;
  std::size_t misses = 0;
  std::size_t aborted = 0;
};

struct TimeEnsembleResult {
  ProbabilityEstimate p_star;
  DetectionCounts counts;
  /// False when more than 1% of members aborted at nodes.
  bool valid = true;
  /// Largest |y1 + y2| and whether any particle changed side of the axis
  /// before detection (diagnostics for mirror-symmetric ensembles).
  double max_abs_ysum = 0.0;
  std::size_t axis_crossings = 0;
};

/// Joint detection probability over sequential single-pair preparations:
/// the fraction of non-aborted members whose particle 1 fires D1 and
/// particle 2 fires D2.
TimeEnsembleResult joint_probability_time_ensemble(const WavefunctionModel& model,
                                                   const EnsembleSpec& spec,
                                                   const DetectorPair& regions, double h, double T,
                                                   const Window* domain = nullptr);

/// Stationary-density proxy for the standard-quantum joint probability: |psi|^2
/// on the plane x1 = x2 = x0, normalized over y1, y2 in [-W, W], integrated over
/// D1 x D2.
ProbabilityEstimate joint_probability_space_average(const WavefunctionModel& model,
                                                    const DetectorPair& regions,
                                                    double plane_half_width, double rel_tol = 1e-4);

struct JointDetectionReport {
  TimeEnsembleResult time_ensemble;
  ProbabilityEstimate p_bar;
  DetectorPair geometry;
  double delta0 = 0.0;
  double sigma0 = 0.0;
  double plane_half_width = 0.0;

  double gap() const { return p_bar.value - time_ensemble.p_star.value; }
  /// Gap in units of the combined one-sigma error.
  double gap_sigmas() const;
};

nlohmann::json to_json(const JointDetectionReport& r);

}  // namespace bohm
