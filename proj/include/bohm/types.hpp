#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bohm {

/// Largest configuration space handled: two particles in a plane.
inline constexpr std::size_t kMaxCoords = 4;

/// Per-coordinate values (positions, velocities, phase gradients).
using Coords = std::array<double, kMaxCoords>;

/// Instantaneous configuration of the two-particle system.
///
/// Oscillator models use (Q1, Q2) normal coordinates, dim == 2.
/// Interferometer models use (x1, y1, x2, y2), dim == 4.
struct Configuration {
  double t = 0.0;
  Coords q{};
  std::size_t dim = 0;

  static Configuration oscillator(double t, double q1, double q2) {
    return {t, {q1, q2, 0.0, 0.0}, 2};
  }
  static Configuration plane(double t, double x1, double y1, double x2, double y2) {
    return {t, {x1, y1, x2, y2}, 4};
  }

  std::span<const double> coords() const { return {q.data(), dim}; }
  bool finite() const;
};

/// Evaluation point is outside the model's domain (e.g. inside a slit's regularization radius).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Wavefunction (nearly) vanishes; phase and velocity undefined.
class NodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters or configuration; the message names the offending field.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x <= hi; }
};

/// Axis-aligned box in configuration space. A degenerate interval (lo == hi)
/// pins that coordinate, which lets the same type describe sections such as
/// the detection plane x1 = x2 = x0.
struct Window {
  std::vector<Interval> bounds;

  bool contains(const Configuration& c) const;
};

}  // namespace bohm
