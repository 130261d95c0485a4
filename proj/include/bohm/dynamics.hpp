#pragma once

#include <cmath>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bohm/wavefunctions.hpp"

namespace bohm {

enum class TrajectoryStatus { Completed, NodeAborted, LeftDomain };

std::string to_string(TrajectoryStatus status);

/// Uniformly sampled Bohmian trajectory. samples.front() is the initial configuration.
struct Trajectory {
  std::vector<Configuration> samples;
  std::string model_id;
  Configuration initial;
  double h = 0.0;
  TrajectoryStatus status = TrajectoryStatus::Completed;
};

struct QuantumPotentialSample {
  double t = 0.0;
  double q1 = 0.0;
  double q2 = 0.0;
};

/// Guidance velocity grad S / m. Oscillator normal coordinates carry unit mass.
Coords velocity_field(const WavefunctionModel& model, const Configuration& c);

/// Number of RK4 steps of size h needed to reach horizon T, i.e. ceil(T/h).
std::size_t step_count(double h, double T);

namespace detail {
void validate_step(double h, double T, const Configuration& c0, const WavefunctionModel& model);
Configuration rk4_step(const WavefunctionModel& model, const Configuration& c, const Coords& k1,
                       double h);
}  // namespace detail

/// Fixed-step classic RK4 on the guidance equation, streaming each sample
/// (starting with c0) to `observer`. The observer returns false to stop early.
/// Node hits abort with NodeAborted; leaving `domain` (or the model's own
/// domain) stops with LeftDomain. Samples passed to the observer have had
/// their velocity evaluated successfully.
template <class Observer>
TrajectoryStatus integrate_streaming(const WavefunctionModel& model, const Configuration& c0,
                                     double h, double T, Observer&& observer,
                                     const Window* domain = nullptr) {
  detail::validate_step(h, T, c0, model);
  Configuration c = c0;
  Coords k1;
  try {
    k1 = velocity_field(model, c);
  } catch (const NodeError&) {
    return TrajectoryStatus::NodeAborted;
  } catch (const DomainError&) {
    return TrajectoryStatus::LeftDomain;
  }
  if (domain && !domain->contains(c)) return TrajectoryStatus::LeftDomain;
  if (!observer(static_cast<const Configuration&>(c))) return TrajectoryStatus::Completed;

  const std::size_t steps = step_count(h, T);
  for (std::size_t n = 1; n <= steps; ++n) {
    Configuration next;
    try {
      next = detail::rk4_step(model, c, k1, h);
      next.t = c0.t + static_cast<double>(n) * h;
      if (domain && !domain->contains(next)) return TrajectoryStatus::LeftDomain;
      k1 = velocity_field(model, next);
    } catch (const NodeError&) {
      return TrajectoryStatus::NodeAborted;
    } catch (const DomainError&) {
      return TrajectoryStatus::LeftDomain;
    }
    c = next;
    if (!observer(static_cast<const Configuration&>(c))) break;
  }
  return TrajectoryStatus::Completed;
}

/// Stored trajectory over [c0.t, c0.t + ceil(T/h) h].
Trajectory integrate(const WavefunctionModel& model, const Configuration& c0, double h, double T,
                     const Window* domain = nullptr);

/// Closed-form oscillator trajectory Q1(t) = Q1(0) + a1 (cos w1 t - 1), Q2(t) = Q2(0) - a2 (cos w2 t - 1).
std::array<double, 2> oscillator_trajectory_exact(const OscillatorParams& params, double q1_0,
                                                  double q2_0, double t);

QuantumPotentialSample quantum_potential(const OscillatorParams& params, const Configuration& c);

struct EnergyCheck {
  /// LHS - RHS of the per-oscillator energy relation, one entry per sample.
  std::vector<double> residual1;
  std::vector<double> residual2;
  double max_abs_residual = 0.0;
};

/// Checks 1/2 (P_i^2 + w_i^2 Q_i^2) + Q(i) against its closed form along an
/// oscillator trajectory:
///   oscillator 1: hbar w1/2 + w1^2 a1^2/2 + w1^2 a1 (Q1(0) - a1) cos w1 t
///   oscillator 2: hbar w2/2 + w2^2 a2^2/2 - w2^2 a2 (Q2(0) + a2) cos w2 t
EnergyCheck energy_check(const OscillatorParams& params, const Trajectory& traj);

struct PairSample {
  double t = 0.0;
  double dx = 0.0;    // x1 - x2
  double ysum = 0.0;  // y1 + y2
};

std::vector<PairSample> pair_coordinates(const Trajectory& traj);

/// Least-squares slope of (x1 - x2) against t.
double fitted_separation_slope(const std::vector<PairSample>& series);

/// CSV export: header row, then one sample per line at 17 significant digits.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

std::vector<std::string> coordinate_names(std::size_t dim);

}  // namespace bohm
