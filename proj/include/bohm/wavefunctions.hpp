#pragma once

#include <complex>
#include <string>
#include <variant>

#include "bohm/types.hpp"

namespace bohm {

using Complex = std::complex<double>;

/// Coupled-oscillator parameters in normal coordinates (unit mass).
struct OscillatorParams {
  double omega1 = 1.0;
  double omega2 = 2.0;
  double a1 = 1.0;
  double a2 = 1.0;
  double hbar = 1.0;

  /// Pendulums of unit length and mass joined by a spring of strength alpha:
  /// omega1 = 1, omega2 = sqrt(1 + 2 alpha).
  static OscillatorParams from_coupling(double alpha, double a1, double a2, double hbar = 1.0);

  void validate() const;

  /// Standard deviation of |psi_A|^2 and |psi_B|^2.
  double width1() const;
  double width2() const;
};

/// Two-slit geometry: slit A at (0, +a), slit B at (0, -a).
struct InterferometerParams {
  double k = 10.0;
  double a = 1.0;
  double m = 1.0;
  double hbar = 1.0;
  double epsilon_r = 1e-3;

  void validate() const;

  double speed() const { return hbar * k / m; }
  /// Time at which a trajectory started on the radius-epsilon_r circle satisfies r = v t.
  double launch_time() const { return epsilon_r / speed(); }
  /// Kinetic energy of the pair, 2 * (hbar k)^2 / (2 m).
  double energy() const { return hbar * hbar * k * k / m; }
};

enum class WavefunctionKind { OscillatorProduct, SphericalNonOverlap, SphericalBosonic };

std::string to_string(WavefunctionKind kind);

/// psi_A(Q1, t) psi_B(Q2, t): two non-dispersive packets oscillating about
/// Q1 = a1 and Q2 = -a2.
class OscillatorProduct {
 public:
  explicit OscillatorProduct(const OscillatorParams& params);

  const OscillatorParams& params() const { return params_; }

  Complex psi(const Configuration& c) const;
  double phase(const Configuration& c) const;
  Coords grad_phase(const Configuration& c) const;
  double density(const Configuration& c) const;

  /// Packet centres (a1 cos w1 t, -a2 cos w2 t).
  std::array<double, 2> centers(double t) const;

 private:
  OscillatorParams params_;
};

/// Outgoing spherical waves from slit A (particle 1) and slit B (particle 2),
/// valid where the waves do not overlap.
class SphericalNonOverlap {
 public:
  explicit SphericalNonOverlap(const InterferometerParams& params);

  const InterferometerParams& params() const { return params_; }

  Complex psi(const Configuration& c) const;
  double phase(const Configuration& c) const;
  Coords grad_phase(const Configuration& c) const;
  double density(const Configuration& c) const;

 private:
  InterferometerParams params_;
};

/// Exchange-symmetric superposition of the A/B and B/A spherical-wave pairs.
/// The overall 1/N factor is applied by WavefunctionModel::normalized.
class SphericalBosonic {
 public:
  explicit SphericalBosonic(const InterferometerParams& params);

  const InterferometerParams& params() const { return params_; }

  Complex psi(const Configuration& c) const;
  /// Principal branch: hbar * arg(spatial part) - E t.
  double phase(const Configuration& c) const;
  Coords grad_phase(const Configuration& c) const;
  double density(const Configuration& c) const;

 private:
  InterferometerParams params_;
};

/// Immutable closed-form two-particle wavefunction. Safe to share across threads.
class WavefunctionModel {
 public:
  static WavefunctionModel oscillator(const OscillatorParams& params);
  static WavefunctionModel spherical_non_overlap(const InterferometerParams& params);
  static WavefunctionModel spherical_bosonic(const InterferometerParams& params);

  WavefunctionKind kind() const;
  std::size_t dimension() const;
  std::string id() const;

  Complex psi(const Configuration& c) const;
  double phase(const Configuration& c) const;
  Coords grad_phase(const Configuration& c) const;
  double born_density(const Configuration& c) const;

  /// Overall amplitude factor multiplying the closed form (1 unless rescaled).
  double scale() const { return scale_; }
  WavefunctionModel scaled(double factor) const;
  /// Divides psi by n, as returned by normalize_numeric.
  WavefunctionModel normalized(double n) const;

  const OscillatorParams* oscillator_params() const;
  const InterferometerParams* interferometer_params() const;
  const OscillatorProduct* as_oscillator() const { return std::get_if<OscillatorProduct>(&impl_); }

 private:
  using Impl = std::variant<OscillatorProduct, SphericalNonOverlap, SphericalBosonic>;
  explicit WavefunctionModel(Impl impl) : impl_(std::move(impl)) {}

  Impl impl_;
  double scale_ = 1.0;
};

/// N such that the integral of |psi|^2 / N^2 over the window is 1.
/// Interferometer windows must keep particles at least epsilon_r from both slits.
double normalize_numeric(const WavefunctionModel& model, const Window& window, double t = 0.0,
                         double rel_tol = 1e-4);

/// Distances of each particle from each slit: {r1A, r1B, r2A, r2B}.
std::array<double, 4> slit_radii(const InterferometerParams& params, const Configuration& c);

}  // namespace bohm
