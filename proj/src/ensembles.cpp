#include "bohm/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

namespace bohm {

namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Proposal widths relative to the exact packet widths.
constexpr double kEnvelopeWidening = 1.25;
constexpr std::size_t kMaxAttemptsPerMember = 100000;
constexpr double kMinAcceptance = 1e-4;

double gaussian_pdf(double x, double mean, double sd) {
  const double z = (x - mean) / sd;
  return std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * std::numbers::pi));
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(mix64(seed ^ mix64(stream + kGamma))) {}

CounterRng::result_type CounterRng::operator()() { return mix64(key_ + (++counter_) * kGamma); }

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string to_string(EnsembleKind kind) {
  return kind == EnsembleKind::Gibbs ? "gibbs" : "time-ensemble";
}

void EnsembleSpec::validate(const WavefunctionModel& model) const {
  if (count < 1) throw ValidationError("ensemble.count: must be >= 1");
  if (!(std::isfinite(delta0) && delta0 >= 0.0)) throw ValidationError("ensemble.delta0: must be >= 0");
  if (!(std::isfinite(sigma0) && sigma0 >= 0.0)) throw ValidationError("ensemble.sigma0: must be >= 0");
  if (model.kind() == WavefunctionKind::OscillatorProduct) {
    if (window.bounds.size() != 2) throw ValidationError("ensemble.window: oscillator needs 2 intervals");
    for (const auto& b : window.bounds) {
      if (!(std::isfinite(b.lo) && std::isfinite(b.hi) && b.lo < b.hi)) {
        throw ValidationError("ensemble.window: intervals must be finite with lo < hi");
      }
    }
  } else if (!(aperture > 0.0 && aperture <= 0.5 * std::numbers::pi)) {
    throw ValidationError("ensemble.aperture: must lie in (0, pi/2]");
  }
}

nlohmann::json to_json(const EnsembleSpec& spec) {
  nlohmann::json window = nlohmann::json::array();
  for (const auto& b : spec.window.bounds) window.push_back({b.lo, b.hi});
  return {{"kind", to_string(spec.kind)},
          {"count", spec.count},
          {"seed", spec.seed},
          {"delta0", spec.delta0},
          {"sigma0", spec.sigma0},
          {"window", window},
          {"aperture", spec.aperture}};
}

double SampleBatch::acceptance_rate() const {
  const double accepted = static_cast<double>(members.size());
  return accepted / (accepted + static_cast<double>(rejected));
}

Window oscillator_window(const OscillatorParams& p, double nsigma) {
  const double w1 = p.a1 + nsigma * p.width1();
  const double w2 = p.a2 + nsigma * p.width2();
  return Window{{{-w1, w1}, {-w2, w2}}};
}

Window interferometer_domain(double half_size) {
  const Interval iv{-half_size, half_size};
  return Window{{iv, iv, iv, iv}};
}

Configuration launch_pair(const InterferometerParams& p, double theta1, double theta2) {
  const double eps = p.epsilon_r;
  return Configuration::plane(p.launch_time(), eps * std::cos(theta1), p.a + eps * std::sin(theta1),
                              eps * std::cos(theta2), -p.a - eps * std::sin(theta2));
}

PairLaunch launch_with_offsets(const InterferometerParams& p, double theta, double dx, double dy) {
  const double s = (-std::sin(theta) * dx + std::cos(theta) * dy) / (2.0 * p.epsilon_r);
  const double eta = std::asin(std::clamp(s, -1.0, 1.0));
  PairLaunch out;
  out.config = launch_pair(p, theta + eta, theta - eta);
  out.offsets = {out.config.q[0] - out.config.q[2], out.config.q[1] + out.config.q[3]};
  return out;
}

SampleBatch sample_initial(const WavefunctionModel& model, const EnsembleSpec& spec, double t) {
  spec.validate(model);
  SampleBatch batch;
  batch.members.resize(spec.count);
  {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a(to_json(spec).dump() + model.id())));
    batch.provenance = buf;
  }

  if (const auto* osc = model.as_oscillator()) {
    const auto& p = osc->params();
    const auto ctr = osc->centers(t);
    const double sd1 = kEnvelopeWidening * p.width1();
    const double sd2 = kEnvelopeWidening * p.width2();
    // sup of (normalized density) / (proposal density)
    const double bound = kEnvelopeWidening * kEnvelopeWidening;
    const double norm = model.scale() * model.scale();
    std::vector<std::size_t> rejected(spec.count, 0);
    bool exhausted = false;

#pragma omp parallel for schedule(dynamic, 64)
    for (std::size_t i = 0; i < spec.count; ++i) {
      CounterRng rng(spec.seed, i);
      std::normal_distribution<double> n1(ctr[0], sd1), n2(ctr[1], sd2);
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      for (std::size_t attempt = 0;; ++attempt) {
        if (attempt == kMaxAttemptsPerMember) {
#pragma omp atomic write
          exhausted = true;
          break;
        }
        const Configuration c = Configuration::oscillator(t, n1(rng), n2(rng));
        const double u = unit(rng);
        if (spec.window.contains(c)) {
          const double target = model.born_density(c) / norm;
          const double proposal = gaussian_pdf(c.q[0], ctr[0], sd1) * gaussian_pdf(c.q[1], ctr[1], sd2);
          if (u * bound * proposal < target) {
            batch.members[i] = c;
            break;
          }
        }
        ++rejected[i];
      }
    }
    for (std::size_t r : rejected) batch.rejected += r;
    if (exhausted || batch.acceptance_rate() < kMinAcceptance) {
      throw ValidationError("ensemble.window: too small, acceptance rate below 1e-4");
    }
    return batch;
  }

  const auto& p = *model.interferometer_params();
  batch.offsets.resize(spec.count);
  for (std::size_t i = 0; i < spec.count; ++i) {
    CounterRng rng(spec.seed, i);
    std::uniform_real_distribution<double> angle(-spec.aperture, spec.aperture);
    std::normal_distribution<double> unit_normal(0.0, 1.0);
    const double theta = angle(rng);
    const double gx = unit_normal(rng);
    const double gy = unit_normal(rng);
    const auto launch = launch_with_offsets(p, theta, spec.delta0 * gx, spec.sigma0 * gy);
    batch.members[i] = launch.config;
    batch.offsets[i] = launch.offsets;
  }
  return batch;
}

std::vector<Trajectory> evolve_batch(const WavefunctionModel& model, const SampleBatch& batch,
                                     double h, double T, const Window* domain) {
  std::vector<Trajectory> out(batch.members.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::size_t i = 0; i < batch.members.size(); ++i) {
    out[i] = integrate(model, batch.members[i], h, T, domain);
  }
  return out;
}

nlohmann::json batch_manifest(const WavefunctionModel& model, const EnsembleSpec& spec,
                              const SampleBatch& batch, const std::vector<Trajectory>& trajectories) {
  std::size_t completed = 0, aborted = 0, left = 0;
  for (const auto& tr : trajectories) {
    switch (tr.status) {
      case TrajectoryStatus::Completed: ++completed; break;
      case TrajectoryStatus::NodeAborted: ++aborted; break;
      case TrajectoryStatus::LeftDomain: ++left; break;
    }
  }
  return {{"spec", to_json(spec)},
          {"model", model.id()},
          {"members", batch.members.size()},
          {"rejected", batch.rejected},
          {"acceptance_rate", batch.acceptance_rate()},
          {"provenance", batch.provenance},
          {"status", {{"completed", completed}, {"node-aborted", aborted}, {"left-domain", left}}}};
}

}  // namespace bohm
