#include "bohm/ergodicity.hpp"

#include <algorithm>
#include <cmath>

#include "bohm/stats.hpp"

namespace bohm {

double Observable::operator()(const WavefunctionModel& model, const Configuration& c) const {
  if (uses_momentum) return eval(c, model.grad_phase(c));
  return eval(c, Coords{});
}

namespace observables {

Observable coordinate(std::size_t index, std::string name) {
  return {std::move(name), [index](const Configuration& c, const Coords&) { return c.q[index]; },
          false};
}

Observable coordinate_squared(std::size_t index, std::string name) {
  return {std::move(name),
          [index](const Configuration& c, const Coords&) { return c.q[index] * c.q[index]; }, false};
}

Observable momentum(std::size_t index, std::string name) {
  return {std::move(name), [index](const Configuration&, const Coords& p) { return p[index]; },
          true};
}

Observable constant(double value) {
  return {"one", [value](const Configuration&, const Coords&) { return value; }, false};
}

Observable by_name(const std::string& name) {
  if (name == "Q1") return coordinate(0, name);
  if (name == "Q2") return coordinate(1, name);
  if (name == "Q1sq") return coordinate_squared(0, name);
  if (name == "Q2sq") return coordinate_squared(1, name);
  if (name == "P1") return momentum(0, name);
  if (name == "P2") return momentum(1, name);
  if (name == "one") return constant(1.0);
  throw ValidationError("observable: unknown name '" + name + "'");
}

}  // namespace observables

MeanEstimate space_mean(const WavefunctionModel& model, const EnsembleSpec& spec,
                        const Observable& obs, double t) {
  if (spec.kind != EnsembleKind::Gibbs) throw ValidationError("space_mean: needs a Gibbs ensemble");
  std::vector<double> values(spec.count);
  if (model.kind() == WavefunctionKind::OscillatorProduct) {
    const auto batch = sample_initial(model, spec, t);
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = obs(model, batch.members[i]);
  } else {
    // Launch ensemble transported to t; equivariance keeps it |psi|^2-distributed.
    const auto batch = sample_initial(model, spec);
    const double t0 = batch.members.front().t;
    if (t < t0) throw ValidationError("space_mean: t precedes the launch time");
    const double span = t - t0;
    constexpr double kTransportSteps = 1000.0;
    std::vector<char> ok(values.size(), 0);
#pragma omp parallel for schedule(dynamic, 8)
    for (std::size_t i = 0; i < values.size(); ++i) {
      Configuration end = batch.members[i];
      bool completed = true;
      if (span > 0.0) {
        const auto tr = integrate(model, end, span / kTransportSteps, span);
        completed = tr.status == TrajectoryStatus::Completed;
        end = tr.samples.back();
      }
      if (completed) {
        values[i] = obs(model, end);
        ok[i] = 1;
      }
    }
    std::vector<double> kept;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (ok[i]) kept.push_back(values[i]);
    }
    values = std::move(kept);
    if (values.empty()) throw ValidationError("space_mean: every member aborted");
  }
  const auto m = moments(values);
  return {m.mean, m.std_error(), m.count};
}

CesaroAccumulator::CesaroAccumulator(std::size_t expected_samples)
    : half_((expected_samples + 1) / 2) {}

void CesaroAccumulator::add(double value) {
  sum_ += value;
  if (n_ < half_) half_sum_ += value;
  ++n_;
}

TimeMean CesaroAccumulator::result(double tolerance) const {
  TimeMean out;
  out.samples = n_;
  if (n_ == 0) return out;
  out.value = sum_ / static_cast<double>(n_);
  const std::size_t nh = std::min(n_, half_);
  out.half_horizon_value = half_sum_ / static_cast<double>(nh);
  out.tail_difference = std::abs(out.value - out.half_horizon_value);
  out.converged = out.tail_difference <= tolerance;
  return out;
}

TimeMean time_mean(const WavefunctionModel& model, const Trajectory& traj, const Observable& obs,
                   double tolerance) {
  if (traj.status != TrajectoryStatus::Completed) {
    throw ValidationError("time_mean: trajectory did not complete (" + to_string(traj.status) + ")");
  }
  if (traj.samples.empty()) throw ValidationError("time_mean: empty trajectory");
  CesaroAccumulator acc(traj.samples.size());
  for (const auto& c : traj.samples) acc.add(obs(model, c));
  return acc.result(tolerance);
}

PhaseSpacePoint joint_distribution(const WavefunctionModel& model, const Configuration& c) {
  return {model.born_density(c), model.grad_phase(c)};
}

std::string to_string(Verdict v) {
  return v == Verdict::NonErgodic ? "non-ergodic" : "ergodic-consistent";
}

Verdict decide_verdict(const AverageReport& r, double factor) {
  // Rounding floor so that exactly equal estimates never differ "significantly".
  const double floor = 1e-12 * (1.0 + std::abs(r.space.value));
  const double n = static_cast<double>(r.time_means.empty() ? 1 : r.time_means.size());
  const double time_se = r.time_mean_spread / std::sqrt(n);
  const double combined = std::hypot(r.space.std_error, time_se);
  if (r.time_mean_spread > factor * (r.space.std_error + r.max_tail_difference) + floor) {
    return Verdict::NonErgodic;
  }
  if (std::abs(r.time_mean_average - r.space.value) > factor * combined + floor) {
    return Verdict::NonErgodic;
  }
  return Verdict::ErgodicConsistent;
}

AverageReport compare_means(const WavefunctionModel& model, const EnsembleSpec& spec,
                            const Observable& obs, double h, double T,
                            const CompareOptions& options) {
  AverageReport report;
  report.observable = obs.name;
  report.horizon = T;
  report.h = h;
  report.count = spec.count;
  report.seed = spec.seed;

  const auto batch = sample_initial(model, spec);
  const std::size_t samples = step_count(h, T) + 1;
  std::vector<TimeMean> means(batch.members.size());
  std::vector<TrajectoryStatus> status(batch.members.size());

#pragma omp parallel for schedule(dynamic, 4)
  for (std::size_t i = 0; i < batch.members.size(); ++i) {
    CesaroAccumulator acc(samples);
    status[i] = integrate_streaming(model, batch.members[i], h, T, [&](const Configuration& c) {
      acc.add(obs(model, c));
      return true;
    });
    means[i] = acc.result(options.tail_tolerance);
  }

  for (std::size_t i = 0; i < means.size(); ++i) {
    if (status[i] != TrajectoryStatus::Completed) {
      ++report.aborted;
      continue;
    }
    report.time_means.push_back(means[i].value);
    report.max_tail_difference = std::max(report.max_tail_difference, means[i].tail_difference);
    if (!means[i].converged) ++report.unconverged;
  }
  if (report.time_means.empty()) throw ValidationError("compare_means: every member aborted");
  const auto tm = moments(report.time_means);
  report.time_mean_average = tm.mean;
  report.time_mean_spread = tm.stddev;

  // Independent Gibbs ensembles at evenly spaced instants across the horizon.
  const std::size_t instants = T > 0.0 ? std::max<std::size_t>(2, options.space_instants) : 1;
  const double t0 = batch.members.front().t;
  double sum = 0.0, var = 0.0;
  for (std::size_t j = 0; j < instants; ++j) {
    EnsembleSpec gibbs = spec;
    gibbs.kind = EnsembleKind::Gibbs;
    gibbs.seed = CounterRng(spec.seed, 0xA5A5A5A5ULL + j)();
    const double tj = instants == 1 ? t0 : t0 + T * static_cast<double>(j) / static_cast<double>(instants - 1);
    const auto est = space_mean(model, gibbs, obs, tj);
    sum += est.value;
    var += est.std_error * est.std_error;
  }
  const double k = static_cast<double>(instants);
  report.space = {sum / k, std::sqrt(var) / k, spec.count * instants};
  report.verdict = decide_verdict(report, options.verdict_factor);
  return report;
}

nlohmann::json to_json(const AverageReport& r, bool include_member_values) {
  nlohmann::json j = {
      {"observable", r.observable},
      {"space_mean", {{"value", r.space.value}, {"std_error", r.space.std_error}, {"samples", r.space.count}}},
      {"time_mean",
       {{"average", r.time_mean_average},
        {"spread", r.time_mean_spread},
        {"members", r.time_means.size()},
        {"max_tail_difference", r.max_tail_difference},
        {"unconverged", r.unconverged}}},
      {"aborted", r.aborted},
      {"horizon", r.horizon},
      {"h", r.h},
      {"count", r.count},
      {"seed", r.seed},
      {"verdict", to_string(r.verdict)}};
  if (include_member_values) j["time_mean"]["values"] = r.time_means;
  return j;
}

}  // namespace bohm
