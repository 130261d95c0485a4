#include "bohm/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bohm/quadrature.hpp"
#include "bohm/stats.hpp"

namespace bohm {

namespace {

constexpr double kFarZoneFactor = 10.0;
constexpr double kMaxAbortedFraction = 0.01;

DetectorHit assign(const DetectorPair& regions, int particle, double y) {
  const auto& first = particle == 1 ? regions.d1 : regions.d2;
  const auto& second = particle == 1 ? regions.d2 : regions.d1;
  const auto label = [](int which) { return which == 1 ? DetectorHit::D1 : DetectorHit::D2; };
  if (first.contains(y)) return label(particle);
  if (second.contains(y)) return label(3 - particle);
  return DetectorHit::None;
}

}  // namespace

void DetectorRegion::validate(double a) const {
  if (!(y_min < y_max)) throw ValidationError("detector " + label + ": y_min must be < y_max");
  if (!(x0 > 0.0)) throw ValidationError("detector " + label + ": x0 must be > 0");
  if (x0 < kFarZoneFactor * a) throw ValidationError("detector " + label + ": x0 must be >= 10 a");
}

void DetectorPair::validate(double a) const {
  d1.validate(a);
  d2.validate(a);
  if (d1.x0 != d2.x0) throw ValidationError("detectors: D1 and D2 must share the plane x0");
}

DetectorPair DetectorPair::reflected_and_swapped() const {
  return {{d2.x0, -d2.y_max, -d2.y_min, d1.label}, {d1.x0, -d1.y_max, -d1.y_min, d2.label}};
}

DetectorPair default_detectors(double a) {
  return {{20.0 * a, 0.5 * a, 1.5 * a, "D1"}, {20.0 * a, 0.25 * a, 1.25 * a, "D2"}};
}

std::string to_string(DetectorHit hit) {
  switch (hit) {
    case DetectorHit::D1: return "D1";
    case DetectorHit::D2: return "D2";
    case DetectorHit::None: return "none";
  }
  return "none";
}

CrossingTracker::CrossingTracker(const DetectorPair& regions, std::size_t member) : regions_(regions) {
  events_[0].member = events_[1].member = member;
  events_[0].particle = 1;
  events_[1].particle = 2;
}

void CrossingTracker::feed(const Configuration& c) {
  if (previous_) {
    const double x0 = regions_.d1.x0;
    for (std::size_t p = 0; p < 2; ++p) {
      auto& ev = events_[p];
      if (ev.crossed) continue;
      const double xa = previous_->q[2 * p], xb = c.q[2 * p];
      if (xa < x0 && xb >= x0) {
        const double f = (x0 - xa) / (xb - xa);
        ev.crossed = true;
        ev.t_cross = previous_->t + f * (c.t - previous_->t);
        ev.y_cross = previous_->q[2 * p + 1] + f * (c.q[2 * p + 1] - previous_->q[2 * p + 1]);
        ev.detector = assign(regions_, ev.particle, ev.y_cross);
      }
    }
  }
  previous_ = c;
}

bool CrossingTracker::joint_hit() const {
  return events_[0].detector == DetectorHit::D1 && events_[1].detector == DetectorHit::D2;
}

std::pair<DetectionEvent, DetectionEvent> detect(const Trajectory& traj, const DetectorPair& regions,
                                                 std::size_t member) {
  if (traj.initial.dim != 4) throw ValidationError("detect: needs an interferometer trajectory");
  CrossingTracker tracker(regions, member);
  for (const auto& c : traj.samples) {
    tracker.feed(c);
    if (tracker.done()) break;
  }
  return tracker.events();
}

TimeEnsembleResult joint_probability_time_ensemble(const WavefunctionModel& model,
                                                   const EnsembleSpec& spec,
                                                   const DetectorPair& regions, double h, double T,
                                                   const Window* domain) {
  if (spec.kind != EnsembleKind::TimeEnsemble) {
    throw ValidationError("joint_probability_time_ensemble: spec.kind must be time-ensemble");
  }
  const auto* params = model.interferometer_params();
  if (!params) throw ValidationError("joint_probability_time_ensemble: needs an interferometer model");
  regions.validate(params->a);

  const auto batch = sample_initial(model, spec);
  const std::size_t n = batch.members.size();

  struct MemberOutcome {
    TrajectoryStatus status = TrajectoryStatus::Completed;
    bool joint = false;
    bool single = false;
    double max_abs_ysum = 0.0;
    bool axis_crossing = false;
  };
  std::vector<MemberOutcome> outcomes(n);

#pragma omp parallel for schedule(dynamic, 16)
  for (std::size_t i = 0; i < n; ++i) {
    CrossingTracker tracker(regions, i);
    MemberOutcome& out = outcomes[i];
    const double sign1 = std::copysign(1.0, batch.members[i].q[1]);
    const double sign2 = std::copysign(1.0, batch.members[i].q[3]);
    out.status = integrate_streaming(
        model, batch.members[i], h, T,
        [&](const Configuration& c) {
          out.max_abs_ysum = std::max(out.max_abs_ysum, std::abs(c.q[1] + c.q[3]));
          if (std::copysign(1.0, c.q[1]) != sign1 || std::copysign(1.0, c.q[3]) != sign2) {
            out.axis_crossing = true;
          }
          tracker.feed(c);
          return !tracker.done();
        },
        domain);
    const auto [e1, e2] = tracker.events();
    out.joint = tracker.joint_hit();
    out.single = !out.joint && (e1.detector == DetectorHit::D1 || e2.detector == DetectorHit::D2);
  }

  TimeEnsembleResult result;
  result.counts.members = n;
  for (const auto& o : outcomes) {
    if (o.status == TrajectoryStatus::NodeAborted) {
      ++result.counts.aborted;
      continue;
    }
    result.max_abs_ysum = std::max(result.max_abs_ysum, o.max_abs_ysum);
    if (o.axis_crossing) ++result.axis_crossings;
    if (o.joint) {
      ++result.counts.joint;
    } else if (o.single) {
      ++result.counts.single;
    } else {
      ++result.counts.misses;
    }
  }
  const std::size_t trials = n - result.counts.aborted;
  const auto one_sigma = wilson_interval(result.counts.joint, trials, 1.0);
  const auto ci95 = wilson_interval(result.counts.joint, trials, 1.96);
  result.p_star.value = trials ? static_cast<double>(result.counts.joint) / static_cast<double>(trials) : 0.0;
  result.p_star.std_error = one_sigma.half_width();
  result.p_star.lo95 = ci95.lo;
  result.p_star.hi95 = ci95.hi;
  result.valid = static_cast<double>(result.counts.aborted) <= kMaxAbortedFraction * static_cast<double>(n);
  return result;
}

ProbabilityEstimate joint_probability_space_average(const WavefunctionModel& model,
                                                    const DetectorPair& regions,
                                                    double plane_half_width, double rel_tol) {
  const auto* params = model.interferometer_params();
  if (!params) throw ValidationError("joint_probability_space_average: needs an interferometer model");
  for (const auto* d : {&regions.d1, &regions.d2}) {
    if (!(d->y_min <= d->y_max)) throw ValidationError("detector " + d->label + ": y_min must be <= y_max");
    if (d->x0 < kFarZoneFactor * params->a) throw ValidationError("detector " + d->label + ": x0 must be >= 10 a");
  }
  if (regions.d1.x0 != regions.d2.x0) throw ValidationError("detectors: D1 and D2 must share the plane x0");
  if (!(plane_half_width > 0.0)) throw ValidationError("plane_half_width: must be > 0");

  const double x0 = regions.d1.x0;
  const Interval plane{x0, x0};
  const Interval span{-plane_half_width, plane_half_width};
  const Window norm_window{{plane, span, plane, span}};
  const double n = normalize_numeric(model, norm_window, 0.0, rel_tol);
  const auto normalized = model.normalized(n);

  if (regions.d1.y_min == regions.d1.y_max || regions.d2.y_min == regions.d2.y_max) return {};

  const Window detector_window{
      {plane, {regions.d1.y_min, regions.d1.y_max}, plane, {regions.d2.y_min, regions.d2.y_max}}};
  QuadratureOptions opts;
  opts.rel_tol = rel_tol;
  const auto res = integrate_box([&](const Configuration& c) { return normalized.born_density(c); },
                                 detector_window, 4, 0.0, opts);
  ProbabilityEstimate out;
  out.value = res.value;
  // Detector integral error plus the normalization tolerance.
  out.std_error = res.error + rel_tol * res.value;
  out.lo95 = std::max(0.0, out.value - 1.96 * out.std_error);
  out.hi95 = std::min(1.0, out.value + 1.96 * out.std_error);
  return out;
}

double JointDetectionReport::gap_sigmas() const {
  const double combined = std::hypot(time_ensemble.p_star.std_error, p_bar.std_error);
  return combined > 0.0 ? gap() / combined : std::numeric_limits<double>::infinity();
}

namespace {

nlohmann::json to_json(const DetectorRegion& d) {
  return {{"label", d.label}, {"x0", d.x0}, {"y_min", d.y_min}, {"y_max", d.y_max}};
}

nlohmann::json to_json(const ProbabilityEstimate& p) {
  return {{"value", p.value}, {"std_error", p.std_error}, {"lo95", p.lo95}, {"hi95", p.hi95}};
}

}  // namespace

nlohmann::json to_json(const JointDetectionReport& r) {
  const auto& te = r.time_ensemble;
  return {{"p_star_dbb", to_json(te.p_star)},
          {"p_bar_sqt", to_json(r.p_bar)},
          {"gap", r.gap()},
          {"gap_sigmas", r.gap_sigmas()},
          {"counts",
           {{"members", te.counts.members},
            {"joint", te.counts.joint},
            {"single", te.counts.single},
            {"misses", te.counts.misses},
            {"aborted", te.counts.aborted}}},
          {"valid", te.valid},
          {"max_abs_ysum", te.max_abs_ysum},
          {"axis_crossings", te.axis_crossings},
          {"geometry", {{"d1", to_json(r.geometry.d1)}, {"d2", to_json(r.geometry.d2)}}},
          {"widths", {{"delta0", r.delta0}, {"sigma0", r.sigma0}}},
          {"plane_half_width", r.plane_half_width}};
}

}  // namespace bohm
