#include "bohm/dynamics.hpp"

#include <charconv>
#include <ostream>

namespace bohm {

std::string to_string(TrajectoryStatus status) {
  switch (status) {
    case TrajectoryStatus::Completed: return "completed";
    case TrajectoryStatus::NodeAborted: return "node-aborted";
    case TrajectoryStatus::LeftDomain: return "left-domain";
  }
  return "unknown";
}

Coords velocity_field(const WavefunctionModel& model, const Configuration& c) {
  Coords v = model.grad_phase(c);
  if (const auto* p = model.interferometer_params()) {
    for (auto& vi : v) vi /= p->m;
  }
  return v;
}

std::size_t step_count(double h, double T) {
  if (T <= 0.0) return 0;
  // Absorb rounding in T/h so that T = n h does not produce n + 1 steps.
  return static_cast<std::size_t>(std::ceil(T / h - 1e-9));
}

namespace detail {

void validate_step(double h, double T, const Configuration& c0, const WavefunctionModel& model) {
  if (!(std::isfinite(h) && h > 0.0)) throw ValidationError("h: step must be > 0");
  if (!(std::isfinite(T) && T >= 0.0)) throw ValidationError("T: horizon must be >= 0");
  if (c0.dim != model.dimension()) throw ValidationError("initial configuration dimension mismatch");
  if (!c0.finite()) throw ValidationError("initial configuration must be finite");
}

Configuration rk4_step(const WavefunctionModel& model, const Configuration& c, const Coords& k1,
                       double h) {
  const std::size_t d = c.dim;
  auto shifted = [&](const Coords& k, double dt) {
    Configuration s = c;
    s.t = c.t + dt;
    for (std::size_t i = 0; i < d; ++i) s.q[i] = c.q[i] + dt * k[i];
    return s;
  };
  const Coords k2 = velocity_field(model, shifted(k1, 0.5 * h));
  const Coords k3 = velocity_field(model, shifted(k2, 0.5 * h));
  const Coords k4 = velocity_field(model, shifted(k3, h));
  Configuration out = c;
  out.t = c.t + h;
  for (std::size_t i = 0; i < d; ++i) {
    out.q[i] = c.q[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return out;
}

}  // namespace detail

Trajectory integrate(const WavefunctionModel& model, const Configuration& c0, double h, double T,
                     const Window* domain) {
  Trajectory traj;
  traj.model_id = model.id();
  traj.initial = c0;
  traj.h = h;
  traj.samples.reserve(step_count(h, T) + 1);
  traj.status = integrate_streaming(
      model, c0, h, T,
      [&](const Configuration& c) {
        traj.samples.push_back(c);
        return true;
      },
      domain);
  return traj;
}

std::array<double, 2> oscillator_trajectory_exact(const OscillatorParams& p, double q1_0,
                                                  double q2_0, double t) {
  return {q1_0 + p.a1 * (std::cos(p.omega1 * t) - 1.0),
          q2_0 - p.a2 * (std::cos(p.omega2 * t) - 1.0)};
}

QuantumPotentialSample quantum_potential(const OscillatorParams& p, const Configuration& c) {
  const double d1 = c.q[0] - p.a1 * std::cos(p.omega1 * c.t);
  const double d2 = c.q[1] + p.a2 * std::cos(p.omega2 * c.t);
  return {c.t, 0.5 * p.hbar * p.omega1 - 0.5 * p.omega1 * p.omega1 * d1 * d1,
          0.5 * p.hbar * p.omega2 - 0.5 * p.omega2 * p.omega2 * d2 * d2};
}

EnergyCheck energy_check(const OscillatorParams& p, const Trajectory& traj) {
  EnergyCheck out;
  if (traj.samples.empty()) return out;
  const auto model = WavefunctionModel::oscillator(p);
  const double q1_0 = traj.samples.front().q[0];
  const double q2_0 = traj.samples.front().q[1];
  const double t0 = traj.samples.front().t;
  out.residual1.reserve(traj.samples.size());
  out.residual2.reserve(traj.samples.size());
  for (const auto& c : traj.samples) {
    const Coords mom = model.grad_phase(c);
    const auto qp = quantum_potential(p, c);
    const double w1 = p.omega1, w2 = p.omega2;
    const double lhs1 = 0.5 * (mom[0] * mom[0] + w1 * w1 * c.q[0] * c.q[0]) + qp.q1;
    const double lhs2 = 0.5 * (mom[1] * mom[1] + w2 * w2 * c.q[1] * c.q[1]) + qp.q2;
    // Q_i(0) from the first sample when the trajectory starts at t0 > 0.
    const std::array<double, 2> origin = {q1_0 - p.a1 * (std::cos(p.omega1 * t0) - 1.0),
                                          q2_0 + p.a2 * (std::cos(p.omega2 * t0) - 1.0)};
    const double rhs1 = 0.5 * p.hbar * w1 + 0.5 * w1 * w1 * p.a1 * p.a1 +
                        w1 * w1 * p.a1 * (origin[0] - p.a1) * std::cos(w1 * c.t);
    const double rhs2 = 0.5 * p.hbar * w2 + 0.5 * w2 * w2 * p.a2 * p.a2 -
                        w2 * w2 * p.a2 * (origin[1] + p.a2) * std::cos(w2 * c.t);
    out.residual1.push_back(lhs1 - rhs1);
    out.residual2.push_back(lhs2 - rhs2);
    out.max_abs_residual =
        std::max({out.max_abs_residual, std::abs(lhs1 - rhs1), std::abs(lhs2 - rhs2)});
  }
  return out;
}

std::vector<PairSample> pair_coordinates(const Trajectory& traj) {
  std::vector<PairSample> out;
  out.reserve(traj.samples.size());
  for (const auto& c : traj.samples) {
    if (c.dim != 4) throw ValidationError("pair_coordinates: needs a 4-coordinate trajectory");
    out.push_back({c.t, c.q[0] - c.q[2], c.q[1] + c.q[3]});
  }
  return out;
}

double fitted_separation_slope(const std::vector<PairSample>& series) {
  if (series.size() < 2) throw ValidationError("slope fit needs at least two samples");
  const double n = static_cast<double>(series.size());
  double mt = 0.0, mx = 0.0;
  for (const auto& s : series) {
    mt += s.t;
    mx += s.dx;
  }
  mt /= n;
  mx /= n;
  double stt = 0.0, stx = 0.0;
  for (const auto& s : series) {
    stt += (s.t - mt) * (s.t - mt);
    stx += (s.t - mt) * (s.dx - mx);
  }
  return stx / stt;
}

std::vector<std::string> coordinate_names(std::size_t dim) {
  if (dim == 2) return {"Q1", "Q2"};
  return {"x1", "y1", "x2", "y2"};
}

namespace {

void put_number(std::ostream& os, double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  os.write(buf, res.ptr - buf);
}

}  // namespace

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  const std::size_t dim = traj.initial.dim;
  os << "t";
  for (const auto& name : coordinate_names(dim)) os << ',' << name;
  os << '\n';
  for (const auto& c : traj.samples) {
    put_number(os, c.t);
    for (std::size_t i = 0; i < dim; ++i) {
      os << ',';
      put_number(os, c.q[i]);
    }
    os << '\n';
  }
}

}  // namespace bohm
