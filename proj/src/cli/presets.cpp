#include "bohm/cli/presets.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "bohm/ergodicity.hpp"

namespace bohm::cli {

namespace {

using nlohmann::json;

constexpr double kMaxAbortedFraction = 0.01;

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return {buf, res.ptr};
}

std::string trajectory_csv(const Trajectory& traj) {
  std::ostringstream os;
  write_trajectory_csv(os, traj);
  return os.str();
}

ReportBundle oscillator_nonergodic(const RunConfig& cfg) {
  const auto params = oscillator_params(cfg);
  const auto model = WavefunctionModel::oscillator(params);
  EnsembleSpec spec;
  spec.kind = EnsembleKind::Gibbs;
  spec.count = cfg.members;
  spec.seed = cfg.seed;
  spec.window = oscillator_window(params);

  CompareOptions options;
  options.space_instants = cfg.oscillator.space_instants;
  options.verdict_factor = cfg.oscillator.verdict_factor;
  options.tail_tolerance = cfg.oscillator.tail_tolerance;

  ReportBundle bundle;
  json averages = json::array();
  bool non_ergodic = false;
  for (const auto& name : cfg.oscillator.observables) {
    const auto avg = compare_means(model, spec, observables::by_name(name), cfg.h, cfg.T, options);
    non_ergodic = non_ergodic || avg.verdict == Verdict::NonErgodic;
    if (static_cast<double>(avg.aborted) > kMaxAbortedFraction * static_cast<double>(avg.count)) {
      bundle.valid = false;
    }
    averages.push_back(to_json(avg));
  }
  bundle.report["model"] = model.id();
  bundle.report["averages"] = averages;
  bundle.report["verdict"] = to_string(non_ergodic ? Verdict::NonErgodic : Verdict::ErgodicConsistent);

  if (cfg.emit_trajectories) {
    const auto batch = sample_initial(model, spec);
    bundle.files.emplace_back("trajectories.csv",
                              trajectory_csv(integrate(model, batch.members.front(), cfg.h, cfg.T)));
  }
  return bundle;
}

json time_ensemble_json(const TimeEnsembleResult& te) {
  return {{"p_star_dbb",
           {{"value", te.p_star.value},
            {"std_error", te.p_star.std_error},
            {"lo95", te.p_star.lo95},
            {"hi95", te.p_star.hi95}}},
          {"counts",
           {{"members", te.counts.members},
            {"joint", te.counts.joint},
            {"single", te.counts.single},
            {"misses", te.counts.misses},
            {"aborted", te.counts.aborted}}},
          {"valid", te.valid}};
}

ReportBundle interferometer_incompatibility(const RunConfig& cfg) {
  const auto model = interferometer_model(cfg);
  const auto regions = detector_pair(cfg);
  const auto domain = interferometer_domain(cfg.domain_half_size());

  EnsembleSpec spec;
  spec.kind = EnsembleKind::TimeEnsemble;
  spec.count = cfg.members;
  spec.seed = cfg.seed;
  spec.delta0 = cfg.interferometer.delta0;
  spec.sigma0 = cfg.interferometer.sigma0;

  JointDetectionReport report;
  report.time_ensemble = joint_probability_time_ensemble(model, spec, regions, cfg.h, cfg.T, &domain);
  report.p_bar = joint_probability_space_average(model, regions, cfg.plane_half_width());
  report.geometry = regions;
  report.delta0 = spec.delta0;
  report.sigma0 = spec.sigma0;
  report.plane_half_width = cfg.plane_half_width();

  ReportBundle bundle;
  bundle.valid = report.time_ensemble.valid;
  bundle.report["model"] = model.id();
  bundle.report["joint_detection"] = to_json(report);

  json sweep = json::array();
  for (const double w : cfg.interferometer.width_sweep) {
    EnsembleSpec s = spec;
    s.delta0 = s.sigma0 = w;
    const auto te = joint_probability_time_ensemble(model, s, regions, cfg.h, cfg.T, &domain);
    bundle.valid = bundle.valid && te.valid;
    auto entry = time_ensemble_json(te);
    entry["width"] = w;
    sweep.push_back(entry);
  }
  bundle.report["width_sweep"] = sweep;

  if (cfg.emit_trajectories) {
    const auto batch = sample_initial(model, spec);
    bundle.files.emplace_back(
        "trajectories.csv", trajectory_csv(integrate(model, batch.members.front(), cfg.h, cfg.T, &domain)));
  }
  return bundle;
}

ReportBundle classical_torus(const RunConfig& cfg) {
  const PendulumState initial{cfg.torus.q1, cfg.torus.q2, cfg.torus.qdot1, cfg.torus.qdot2};
  ReportBundle bundle;
  json orbits = json::array();
  std::string csv = "alpha,t,coverage\n";
  for (const double alpha : cfg.torus.alphas) {
    const auto orbit = classical_pendulums(alpha, initial, cfg.T, cfg.h, cfg.torus.grid, cfg.torus.record_every);
    auto j = to_json(orbit);
    // Both modes return together after one slow period when the ratio is an integer.
    const auto back = pendulum_state(alpha, initial, 2.0 * std::numbers::pi);
    j["recurrence_error_2pi"] = std::max({std::abs(back.q1 - initial.q1), std::abs(back.q2 - initial.q2),
                                          std::abs(back.qdot1 - initial.qdot1),
                                          std::abs(back.qdot2 - initial.qdot2)});
    orbits.push_back(j);
    for (const auto& p : orbit.coverage) {
      csv += format_double(alpha) + "," + format_double(p.t) + "," + format_double(p.fraction) + "\n";
    }
  }
  bundle.report["orbits"] = orbits;
  bundle.files.emplace_back("coverage.csv", std::move(csv));
  return bundle;
}

ReportBundle sqt_ergodic(const RunConfig& cfg) {
  const auto& s = cfg.spectral;
  SpectralSystem flip;
  flip.energies = Eigen::Vector2d(0.0, s.flip_gap);
  flip.coeffs = Eigen::Vector2cd(std::sqrt(0.5), std::sqrt(0.5));
  flip.observable = Eigen::Matrix2cd{{0.0, 1.0}, {1.0, 0.0}};
  const auto flip_avg = spectral_time_average(flip, cfg.T);

  double max_ratio = 0.0, max_trace_diff = 0.0;
  std::size_t within = 0;
  for (std::size_t i = 0; i < cfg.members; ++i) {
    CounterRng rng(cfg.seed, i);
    std::uniform_int_distribution<std::size_t> dim_dist(2, s.max_dim);
    const auto sys = random_spectral_system(dim_dist(rng), rng, s.min_gap);
    const auto avg = spectral_time_average(sys, s.random_horizon);
    const double diff = std::abs(avg.cesaro - avg.closed_form);
    max_ratio = std::max(max_ratio, diff / avg.bound());
    max_trace_diff = std::max(max_trace_diff, std::abs(avg.closed_form - avg.trace));
    if (diff < avg.bound()) ++within;
  }

  ReportBundle bundle;
  auto flip_json = to_json(flip_avg);
  flip_json["abs_difference_trace"] = std::abs(flip_avg.cesaro - flip_avg.trace);
  bundle.report["two_level"] = flip_json;
  bundle.report["random_systems"] = {{"systems", cfg.members},
                                     {"max_dim", s.max_dim},
                                     {"horizon", s.random_horizon},
                                     {"within_bound", within},
                                     {"max_ratio_to_bound", max_ratio},
                                     {"max_closed_form_vs_trace", max_trace_diff}};
  return bundle;
}

}  // namespace

OscillatorParams oscillator_params(const RunConfig& cfg) {
  const auto& o = cfg.oscillator;
  auto p = OscillatorParams::from_coupling(o.alpha, o.a1, o.a2, o.hbar);
  p.omega2 *= o.omega1;
  p.omega1 = o.omega1;
  p.validate();
  return p;
}

InterferometerParams interferometer_params(const RunConfig& cfg) {
  const auto& w = cfg.interferometer;
  InterferometerParams p;
  p.k = w.k;
  p.a = w.a;
  p.m = w.m;
  p.hbar = w.hbar;
  p.epsilon_r = w.epsilon_r;
  p.validate();
  return p;
}

WavefunctionModel interferometer_model(const RunConfig& cfg) {
  const auto p = interferometer_params(cfg);
  return cfg.interferometer.model == "non-overlap" ? WavefunctionModel::spherical_non_overlap(p)
                                                   : WavefunctionModel::spherical_bosonic(p);
}

DetectorPair detector_pair(const RunConfig& cfg) {
  const auto& d = cfg.detectors;
  return {{d.x0, d.d1[0], d.d1[1], "D1"}, {d.x0, d.d2[0], d.d2[1], "D2"}};
}

ReportBundle run_preset(const RunConfig& cfg) {
  validate(cfg);
  ReportBundle bundle;
  if (cfg.preset == "oscillator-nonergodic") {
    bundle = oscillator_nonergodic(cfg);
  } else if (cfg.preset == "interferometer-incompatibility") {
    bundle = interferometer_incompatibility(cfg);
  } else if (cfg.preset == "classical-torus") {
    bundle = classical_torus(cfg);
  } else {
    bundle = sqt_ergodic(cfg);
  }
  bundle.report["preset"] = cfg.preset;
  bundle.report["seed"] = cfg.seed;
  bundle.report["version"] = kVersion;
  bundle.report["status"] = bundle.valid ? "ok" : "invalid";
  return bundle;
}

}  // namespace bohm::cli
