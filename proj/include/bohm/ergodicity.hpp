#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "bohm/ensembles.hpp"

namespace bohm {

/// Real-valued phase-space function F(q, p) evaluated with p = grad S.
struct Observable {
  std::string name;
  std::function<double(const Configuration&, const Coords&)> eval;
  /// False when eval ignores its momentum argument, which skips grad S.
  bool uses_momentum = false;

  double operator()(const WavefunctionModel& model, const Configuration& c) const;
};

namespace observables {
Observable coordinate(std::size_t index, std::string name);
Observable coordinate_squared(std::size_t index, std::string name);
Observable momentum(std::size_t index, std::string name);
Observable constant(double value);
/// Lookup by name: "Q1", "Q2", "Q1sq", "Q2sq", "P1", "P2", "one".
Observable by_name(const std::string& name);
}  // namespace observables

struct MeanEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t count = 0;
};

/// Gibbs-ensemble estimate of the integral of F(q, grad S) |psi(q, t)|^2 dq,
/// from fresh Born-rule samples at time t.
MeanEstimate space_mean(const WavefunctionModel& model, const EnsembleSpec& spec,
                        const Observable& obs, double t);

struct TimeMean {
  double value = 0.0;
  /// Average over the first half of the samples.
  double half_horizon_value = 0.0;
  /// |value - half_horizon_value|.
  double tail_difference = 0.0;
  bool converged = true;
  std::size_t samples = 0;
};

/// Running Cesaro sum over uniformly spaced samples.
class CesaroAccumulator {
 public:
  explicit CesaroAccumulator(std::size_t expected_samples);

  void add(double value);
  TimeMean result(double tolerance) const;

 private:
  std::size_t half_;
  std::size_t n_ = 0;
  double sum_ = 0.0;
  double half_sum_ = 0.0;
};

/// Cesaro average of obs along a completed trajectory. `converged` is false
/// when the full- and half-horizon averages differ by more than `tolerance`.
TimeMean time_mean(const WavefunctionModel& model, const Trajectory& traj, const Observable& obs,
                   double tolerance = 1e-2);

/// f(q, p, t) = P(q, t) delta(p - grad S(q, t)), kept as its position factor
/// and momentum support point.
struct PhaseSpacePoint {
  double density = 0.0;
  Coords momentum{};
};

PhaseSpacePoint joint_distribution(const WavefunctionModel& model, const Configuration& c);

enum class Verdict { ErgodicConsistent, NonErgodic };

std::string to_string(Verdict v);

struct AverageReport {
  std::string observable;
  MeanEstimate space;
  /// Per-member Cesaro averages.
  std::vector<double> time_means;
  double time_mean_average = 0.0;
  double time_mean_spread = 0.0;
  double max_tail_difference = 0.0;
  std::size_t unconverged = 0;
  std::size_t aborted = 0;
  double horizon = 0.0;
  double h = 0.0;
  std::size_t count = 0;
  std::uint64_t seed = 0;
  Verdict verdict = Verdict::ErgodicConsistent;
};

struct CompareOptions {
  /// Number of instants the Gibbs space mean is averaged over.
  std::size_t space_instants = 32;
  double verdict_factor = 5.0;
  double tail_tolerance = 1e-2;
};

/// Re-derives the verdict from the stored fields: non-ergodic when the spread
/// of per-member time means exceeds factor * (space-mean error + worst tail
/// difference), or when their average departs from the space mean by more than
/// factor * combined standard error.
Verdict decide_verdict(const AverageReport& r, double factor = 5.0);

/// Space mean (time-averaged over the horizon) against per-member time means.
AverageReport compare_means(const WavefunctionModel& model, const EnsembleSpec& spec,
                            const Observable& obs, double h, double T,
                            const CompareOptions& options = {});

nlohmann::json to_json(const AverageReport& r, bool include_member_values = false);

// ---------------------------------------------------------------------------
// Finite-basis quantum ergodic theorem

struct SpectralSystem {
  Eigen::VectorXd energies;
  Eigen::VectorXcd coeffs;
  Eigen::MatrixXcd observable;
  double hbar = 1.0;

  std::size_t dim() const { return static_cast<std::size_t>(energies.size()); }
  double min_gap() const;
  void validate() const;
};

struct SpectralAverage {
  /// Closed form: sum_n |c_n|^2 F_nn.
  double closed_form = 0.0;
  /// Cesaro average of <F>(t) over uniform samples on [0, T).
  double cesaro = 0.0;
  /// Tr(rho F) with rho the time-averaged (diagonal) density matrix.
  double trace = 0.0;
  double horizon = 0.0;
  double sample_step = 0.0;
  std::size_t samples = 0;
  double min_gap = 0.0;

  /// 5 / (T * min level gap).
  double bound() const { return 5.0 / (horizon * min_gap); }
};

/// <F>(t) = sum_nm conj(c_n) c_m exp(i (E_n - E_m) t / hbar) F_nm.
double spectral_expectation(const SpectralSystem& sys, double t);

SpectralAverage spectral_time_average(const SpectralSystem& sys, double T);

/// Random non-degenerate system: sorted energies with gaps >= min_gap, complex
/// Gaussian amplitudes (normalized) and a Hermitian observable with entries of
/// unit scale.
SpectralSystem random_spectral_system(std::size_t dim, CounterRng& rng, double min_gap = 0.05);

nlohmann::json to_json(const SpectralAverage& avg);

// ---------------------------------------------------------------------------
// Classical coupled pendulums

struct PendulumState {
  double q1 = 0.0, q2 = 0.0, qdot1 = 0.0, qdot2 = 0.0;
};

/// Closed-form motion of two unit pendulums coupled with strength alpha
/// (decoupled in Q1 = (q1+q2)/sqrt2, Q2 = (q1-q2)/sqrt2).
PendulumState pendulum_state(double alpha, const PendulumState& initial, double t);

/// Normal-mode phase angles (theta1, theta2) in [0, 2 pi).
std::array<double, 2> torus_angles(double alpha, const PendulumState& s);

struct CoveragePoint {
  double t = 0.0;
  double fraction = 0.0;
};

struct TorusOrbit {
  double alpha = 0.0;
  double frequency_ratio = 0.0;
  std::size_t grid = 0;
  std::vector<CoveragePoint> coverage;
  double final_coverage = 0.0;
};

/// Samples the orbit every h up to T, bins the angle pair into a grid x grid
/// partition of the torus and records the visited fraction every
/// `record_every` samples (and at the end).
TorusOrbit classical_pendulums(double alpha, const PendulumState& initial, double T, double h,
                               std::size_t grid = 64, std::size_t record_every = 100);

nlohmann::json to_json(const TorusOrbit& orbit);

}  // namespace bohm
