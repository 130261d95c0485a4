#include <algorithm>
#include <cmath>
#include <numbers>

#include "bohm/ergodicity.hpp"

namespace bohm {

namespace {

double mode_frequency(double alpha) { return std::sqrt(1.0 + 2.0 * alpha); }

double wrap_angle(double theta) {
  const double two_pi = 2.0 * std::numbers::pi;
  double r = std::fmod(theta, two_pi);
  if (r < 0.0) r += two_pi;
  return r;
}

}  // namespace

PendulumState pendulum_state(double alpha, const PendulumState& s0, double t) {
  if (!(alpha >= 0.0)) throw ValidationError("alpha: spring coupling must be >= 0");
  const double r2 = std::numbers::sqrt2;
  const double w1 = 1.0, w2 = mode_frequency(alpha);
  const double Q1 = (s0.q1 + s0.q2) / r2, Q2 = (s0.q1 - s0.q2) / r2;
  const double V1 = (s0.qdot1 + s0.qdot2) / r2, V2 = (s0.qdot1 - s0.qdot2) / r2;
  const double c1 = std::cos(w1 * t), s1 = std::sin(w1 * t);
  const double c2 = std::cos(w2 * t), s2 = std::sin(w2 * t);
  const double Q1t = Q1 * c1 + V1 / w1 * s1, V1t = -Q1 * w1 * s1 + V1 * c1;
  const double Q2t = Q2 * c2 + V2 / w2 * s2, V2t = -Q2 * w2 * s2 + V2 * c2;
  return {(Q1t + Q2t) / r2, (Q1t - Q2t) / r2, (V1t + V2t) / r2, (V1t - V2t) / r2};
}

std::array<double, 2> torus_angles(double alpha, const PendulumState& s) {
  const double r2 = std::numbers::sqrt2;
  const double w2 = mode_frequency(alpha);
  const double Q1 = (s.q1 + s.q2) / r2, Q2 = (s.q1 - s.q2) / r2;
  const double V1 = (s.qdot1 + s.qdot2) / r2, V2 = (s.qdot1 - s.qdot2) / r2;
  return {wrap_angle(std::atan2(-V1, Q1)), wrap_angle(std::atan2(-V2 / w2, Q2))};
}

TorusOrbit classical_pendulums(double alpha, const PendulumState& initial, double T, double h,
                               std::size_t grid, std::size_t record_every) {
  if (!(alpha >= 0.0)) throw ValidationError("alpha: spring coupling must be >= 0");
  if (!(h > 0.0) || !(T >= 0.0)) throw ValidationError("classical_pendulums: need h > 0 and T >= 0");
  if (grid < 1) throw ValidationError("grid: must be >= 1");
  record_every = std::max<std::size_t>(1, record_every);

  TorusOrbit orbit;
  orbit.alpha = alpha;
  orbit.frequency_ratio = mode_frequency(alpha);
  orbit.grid = grid;

  std::vector<char> visited(grid * grid, 0);
  std::size_t count = 0;
  const double cell = 2.0 * std::numbers::pi / static_cast<double>(grid);
  auto bin = [&](double theta) {
    return std::min(grid - 1, static_cast<std::size_t>(theta / cell));
  };
  const double total = static_cast<double>(grid * grid);

  const std::size_t steps = step_count(h, T);
  for (std::size_t n = 0; n <= steps; ++n) {
    const double t = static_cast<double>(n) * h;
    const auto angles = torus_angles(alpha, pendulum_state(alpha, initial, t));
    char& cellref = visited[bin(angles[0]) * grid + bin(angles[1])];
    if (!cellref) {
      cellref = 1;
      ++count;
    }
    if (n % record_every == 0 || n == steps) {
      orbit.coverage.push_back({t, static_cast<double>(count) / total});
    }
  }
  orbit.final_coverage = static_cast<double>(count) / total;
  return orbit;
}

nlohmann::json to_json(const TorusOrbit& orbit) {
  return {{"alpha", orbit.alpha},
          {"frequency_ratio", orbit.frequency_ratio},
          {"grid", orbit.grid},
          {"final_coverage", orbit.final_coverage},
          {"horizon", orbit.coverage.empty() ? 0.0 : orbit.coverage.back().t}};
}

}  // namespace bohm
