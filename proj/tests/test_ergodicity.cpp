#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>
#include <vector>

#include "bohm/ergodicity.hpp"

using namespace bohm;

namespace {

const double pi = std::numbers::pi;

EnsembleSpec gibbs(const OscillatorParams& p, std::size_t count, std::uint64_t seed = 1) {
  EnsembleSpec s;
  s.count = count;
  s.seed = seed;
  s.window = oscillator_window(p);
  return s;
}

// Normal-mode phases advance linearly: theta_i(t) = theta_i(0) + omega_i t.
double oracle_coverage(double phi1, double phi2, double w1, double w2, double T, double h, int grid) {
  std::set<std::pair<int, int>> seen;
  const auto n = static_cast<std::size_t>(std::ceil(T / h - 1e-9));
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) * h;
    const double a = std::fmod(phi1 + w1 * t, 2 * pi);
    const double b = std::fmod(phi2 + w2 * t, 2 * pi);
    const int ia = std::min(grid - 1, static_cast<int>(a / (2 * pi) * grid));
    const int ib = std::min(grid - 1, static_cast<int>(b / (2 * pi) * grid));
    seen.insert({ia, ib});
  }
  return static_cast<double>(seen.size()) / (grid * grid);
}

double wrap(double x) {
  x = std::fmod(x, 2 * pi);
  return x < 0 ? x + 2 * pi : x;
}

}  // namespace

TEST_CASE("time mean of Q1 converges to Q1(0) - a1") {
  const OscillatorParams p{1.0, std::sqrt(3.0), 1.0, 1.0, 1.0};
  const auto m = WavefunctionModel::oscillator(p);
  const double T = 100 * 2 * pi;
  for (const double q1 : {1.4, 0.2, -0.5}) {
    const auto tr = integrate(m, Configuration::oscillator(0.0, q1, -1.0), T / 40000.0, T);
    const auto tm = time_mean(m, tr, observables::by_name("Q1"));
    CHECK(std::abs(tm.value - (q1 - p.a1)) < 1e-3);
    CHECK(tm.converged);
    CHECK(tm.samples == tr.samples.size());
  }
}

TEST_CASE("time mean of Q1 squared from Q1(0) = a1 tends to a1^2 / 2") {
  const OscillatorParams p{1.0, 2.0, 1.3, 1.0, 1.0};
  const auto m = WavefunctionModel::oscillator(p);
  const double T = 200 * 2 * pi;
  const auto tr = integrate(m, Configuration::oscillator(0.0, p.a1, 0.0), T / 80000.0, T);
  CHECK(time_mean(m, tr, observables::by_name("Q1sq")).value ==
        doctest::Approx(p.a1 * p.a1 / 2).epsilon(1e-3));
}

TEST_CASE("constant observable averages to itself") {
  const auto m = WavefunctionModel::oscillator({});
  const auto tr = integrate(m, Configuration::oscillator(0.0, 0.1, 0.2), 0.1, 3.0);
  const auto tm = time_mean(m, tr, observables::constant(2.5));
  CHECK(tm.value == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(tm.tail_difference < 1e-14);

  const OscillatorParams p;
  const auto sm = space_mean(m, gibbs(p, 100), observables::constant(1.0), 0.3);
  CHECK(sm.value == 1.0);
  CHECK(sm.std_error == 0.0);
}

TEST_CASE("cesaro accumulator reports the half-horizon tail") {
  CesaroAccumulator acc(4);
  for (const double v : {1.0, 1.0, 3.0, 3.0}) acc.add(v);
  const auto r = acc.result(0.5);
  CHECK(r.value == 2.0);
  CHECK(r.half_horizon_value == 1.0);
  CHECK(r.tail_difference == 1.0);
  CHECK_FALSE(r.converged);
  CHECK(acc.result(2.0).converged);
}

TEST_CASE("space mean of Q1 follows the packet centre") {
  const OscillatorParams p{1.0, 2.0, 1.2, 0.8, 1.0};
  const auto m = WavefunctionModel::oscillator(p);
  int inside = 0, trials = 0;
  for (const double t : {0.0, 0.9, 2.0, 4.4}) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto est = space_mean(m, gibbs(p, 4000, seed), observables::by_name("Q1"), t);
      CHECK(est.count == 4000);
      CHECK(est.std_error == doctest::Approx(std::sqrt(0.5 / 4000)).epsilon(0.1));
      ++trials;
      if (std::abs(est.value - p.a1 * std::cos(t)) < 4 * est.std_error) ++inside;
    }
  }
  CHECK(inside >= trials - 1);
}

TEST_CASE("momentum observable vanishes at t = 0") {
  const OscillatorParams p;
  const auto m = WavefunctionModel::oscillator(p);
  const auto est = space_mean(m, gibbs(p, 200), observables::by_name("P1"), 0.0);
  CHECK(est.value == 0.0);
  const auto f = joint_distribution(m, Configuration::oscillator(0.0, 0.4, -0.3));
  CHECK(f.momentum[0] == 0.0);
  CHECK(f.momentum[1] == 0.0);
  CHECK(f.density == doctest::Approx(m.born_density(Configuration::oscillator(0.0, 0.4, -0.3))));
}

TEST_CASE("joint distribution momentum support is grad S") {
  const OscillatorParams p{1.0, 2.0, 1.0, 1.0, 1.0};
  const auto m = WavefunctionModel::oscillator(p);
  const auto c = Configuration::oscillator(0.7, 0.2, 0.1);
  const auto f = joint_distribution(m, c);
  CHECK(f.momentum[0] == doctest::Approx(-p.omega1 * p.a1 * std::sin(0.7)));
  CHECK(f.momentum[1] == doctest::Approx(p.omega2 * p.a2 * std::sin(1.4)));
}

TEST_CASE("unknown observable names are rejected") {
  CHECK_THROWS_AS(observables::by_name("Q3"), ValidationError);
  for (const char* n : {"Q1", "Q2", "Q1sq", "Q2sq", "P1", "P2", "one"}) {
    CHECK(observables::by_name(n).name == n);
  }
}

TEST_CASE("verdict rule on synthetic reports") {
  AverageReport r;
  r.space = {0.0, 0.01, 1000};
  r.time_means = {0.0, 0.001, -0.001};
  r.time_mean_average = 0.0;
  r.time_mean_spread = 0.001;
  CHECK(decide_verdict(r) == Verdict::ErgodicConsistent);
  r.time_mean_spread = 0.2;
  CHECK(decide_verdict(r) == Verdict::NonErgodic);
  r.time_mean_spread = 0.001;
  r.time_mean_average = 1.0;
  CHECK(decide_verdict(r) == Verdict::NonErgodic);
  // Large tail differences soften the spread test.
  r.time_mean_average = 0.0;
  r.time_mean_spread = 0.2;
  r.max_tail_difference = 0.1;
  CHECK(decide_verdict(r) == Verdict::ErgodicConsistent);
}

TEST_CASE("oscillator position observables are non-ergodic") {
  const OscillatorParams p{1.0, 2.0, 1.0, 1.0, 1.0};
  const auto m = WavefunctionModel::oscillator(p);
  const auto spec = gibbs(p, 1000, 17);
  const double T = 100 * 2 * pi;
  for (const char* name : {"Q1", "Q2", "Q1sq"}) {
    const auto r = compare_means(m, spec, observables::by_name(name), 0.02, T);
    CHECK_MESSAGE(r.verdict == Verdict::NonErgodic, name);
    CHECK(r.verdict == decide_verdict(r));
    CHECK(r.aborted == 0);
    CHECK(r.time_means.size() == 1000);
    const auto j = to_json(r);
    CHECK(j["verdict"] == "non-ergodic");
    CHECK(j["seed"] == 17);
    CHECK(j["count"] == 1000);
  }
  // Time means are Q1(0) - a1 member by member.
  const auto r = compare_means(m, spec, observables::by_name("Q1"), 0.02, T);
  const auto batch = sample_initial(m, spec);
  for (std::size_t i = 0; i < batch.members.size(); ++i) {
    REQUIRE(std::abs(r.time_means[i] - (batch.members[i].q[0] - p.a1)) < 1e-3);
  }
  CHECK(std::abs(r.space.value) < 5 * r.space.std_error + 1e-2);
}

TEST_CASE("constant observable is ergodic-consistent") {
  const OscillatorParams p;
  const auto m = WavefunctionModel::oscillator(p);
  const auto r = compare_means(m, gibbs(p, 100), observables::constant(1.0), 0.05, 20.0);
  CHECK(r.verdict == Verdict::ErgodicConsistent);
}

TEST_CASE("two-level flip observable averages to zero") {
  SpectralSystem s;
  s.energies = Eigen::Vector2d(0.0, 1.0);
  s.coeffs = Eigen::Vector2cd(std::sqrt(0.5), std::sqrt(0.5));
  s.observable = Eigen::Matrix2cd{{0.0, 1.0}, {1.0, 0.0}};
  for (const double t : {0.0, 0.5, 2.0}) CHECK(spectral_expectation(s, t) == doctest::Approx(std::cos(t)));
  const auto avg = spectral_time_average(s, 1e4);
  CHECK(avg.closed_form == 0.0);
  CHECK(avg.trace == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(std::abs(avg.cesaro) < avg.bound());
  CHECK(avg.bound() == doctest::Approx(5e-4));
}

TEST_CASE("diagonal observables and eigenstates") {
  SpectralSystem s;
  s.energies = Eigen::Vector3d(0.0, 0.7, 2.0);
  s.coeffs = Eigen::Vector3cd(0.6, Complex(0.0, 0.8), 0.0);
  s.observable = Eigen::Vector3cd(1.0, -2.0, 5.0).asDiagonal();
  const double expect = 0.36 * 1.0 + 0.64 * -2.0;
  for (const double t : {0.0, 1.3, 40.0}) CHECK(spectral_expectation(s, t) == doctest::Approx(expect));
  CHECK(spectral_time_average(s, 100.0).closed_form == doctest::Approx(expect));

  s.coeffs = Eigen::Vector3cd(1.0, 0.0, 0.0);
  s.observable(0, 1) = 3.0;
  s.observable(1, 0) = 3.0;
  const auto avg = spectral_time_average(s, 50.0);
  CHECK(avg.closed_form == 1.0);
  CHECK(avg.cesaro == doctest::Approx(1.0));
}

TEST_CASE("random systems satisfy the finite-horizon bound") {
  std::size_t within = 0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    CounterRng rng(2024, i);
    const std::size_t dim = 2 + i % 15;
    const auto sys = random_spectral_system(dim, rng);
    REQUIRE_NOTHROW(sys.validate());
    CHECK(sys.dim() == dim);
    CHECK(sys.min_gap() >= 0.05);
    const auto avg = spectral_time_average(sys, 1e4);
    // Independent closed form: sum |c_n|^2 F_nn.
    double oracle = 0.0;
    for (Eigen::Index n = 0; n < sys.energies.size(); ++n) {
      oracle += std::norm(sys.coeffs[n]) * sys.observable(n, n).real();
    }
    CHECK(avg.closed_form == doctest::Approx(oracle).epsilon(1e-12));
    CHECK(avg.trace == doctest::Approx(oracle).epsilon(1e-10));
    if (std::abs(avg.cesaro - avg.closed_form) < avg.bound()) ++within;
  }
  CHECK(within == 100);
}

TEST_CASE("invalid spectral systems are rejected") {
  SpectralSystem s;
  s.energies = Eigen::Vector2d(1.0, 1.0);
  s.coeffs = Eigen::Vector2cd(std::sqrt(0.5), std::sqrt(0.5));
  s.observable = Eigen::Matrix2cd::Identity();
  CHECK_THROWS_WITH_AS(s.validate(), doctest::Contains("degenerate"), ValidationError);
  CHECK_THROWS_AS(spectral_time_average(s, 10.0), ValidationError);
  s.energies = Eigen::Vector2d(0.0, 1.0);
  s.observable(0, 1) = Complex(0.0, 1.0);
  CHECK_THROWS_WITH_AS(s.validate(), doctest::Contains("Hermitian"), ValidationError);
  s.observable = Eigen::Matrix2cd::Identity();
  s.coeffs = Eigen::Vector2cd(1.0, 1.0);
  CHECK_THROWS_WITH_AS(s.validate(), doctest::Contains("normalized"), ValidationError);
}

TEST_CASE("in-phase mode keeps the pendulums together") {
  const PendulumState init{0.3, 0.3, 0.1, 0.1};
  for (const double alpha : {0.5, 1.5}) {
    for (const double t : {0.4, 3.0, 17.0}) {
      const auto s = pendulum_state(alpha, init, t);
      CHECK(s.q1 == doctest::Approx(s.q2).epsilon(1e-12));
      CHECK(s.q1 == doctest::Approx(0.3 * std::cos(t) + 0.1 * std::sin(t)));
    }
  }
}

TEST_CASE("pendulum closed form solves the coupled equations") {
  const PendulumState init{0.3, 0.1, 0.0, 0.2};
  const double alpha = 0.7, t = 2.3, d = 1e-4;
  const auto a = pendulum_state(alpha, init, t - d);
  const auto b = pendulum_state(alpha, init, t);
  const auto c = pendulum_state(alpha, init, t + d);
  const double acc1 = (a.q1 - 2 * b.q1 + c.q1) / (d * d);
  const double acc2 = (a.q2 - 2 * b.q2 + c.q2) / (d * d);
  // q1'' = -q1 - alpha (q1 - q2), q2'' = -q2 - alpha (q2 - q1)
  CHECK(acc1 == doctest::Approx(-b.q1 - alpha * (b.q1 - b.q2)).epsilon(1e-5));
  CHECK(acc2 == doctest::Approx(-b.q2 - alpha * (b.q2 - b.q1)).epsilon(1e-5));
  CHECK((c.q1 - a.q1) / (2 * d) == doctest::Approx(b.qdot1).epsilon(1e-6));
}

TEST_CASE("torus angles advance linearly") {
  const PendulumState init{0.3, 0.1, 0.0, 0.2};
  const double alpha = 0.9, w2 = std::sqrt(1 + 2 * alpha);
  const auto a0 = torus_angles(alpha, init);
  const auto at = torus_angles(alpha, pendulum_state(alpha, init, 5.0));
  CHECK(std::abs(wrap(at[0] - a0[0] - 5.0) - pi) == doctest::Approx(pi).epsilon(1e-9));
  CHECK(std::abs(wrap(at[1] - a0[1] - 5.0 * w2) - pi) == doctest::Approx(pi).epsilon(1e-9));
}

TEST_CASE("ratio two orbit closes and coverage saturates") {
  const PendulumState init{0.3, 0.1, 0.0, 0.2};
  const auto orbit = classical_pendulums(1.5, init, 400.0, 0.01, 64, 200);
  CHECK(orbit.frequency_ratio == doctest::Approx(2.0));
  CHECK(orbit.final_coverage < 0.2);
  const auto back = pendulum_state(1.5, init, 2 * pi);
  CHECK(std::abs(back.q1 - init.q1) < 1e-9);
  CHECK(std::abs(back.qdot2 - init.qdot2) < 1e-9);
  // No growth once the orbit has closed (a few periods in).
  double at_closure = 0.0;
  for (std::size_t i = 1; i < orbit.coverage.size(); ++i) {
    CHECK(orbit.coverage[i].fraction >= orbit.coverage[i - 1].fraction);
    if (orbit.coverage[i].t <= 40.0) at_closure = orbit.coverage[i].fraction;
  }
  CHECK(orbit.final_coverage == at_closure);
}

TEST_CASE("golden ratio orbit covers the torus") {
  const PendulumState init{0.3, 0.1, 0.0, 0.2};
  const double phi = std::numbers::phi;
  const double alpha = (phi * phi - 1) / 2;
  const auto a0 = torus_angles(alpha, init);
  const double h = 0.02;

  // Brute-force horizon from the linear phases.
  double horizon = 0.0;
  for (double T = 50.0; T <= 1000.0; T += 10.0) {
    if (oracle_coverage(a0[0], a0[1], 1.0, phi, T, h, 64) > 0.99) {
      horizon = T;
      break;
    }
  }
  REQUIRE(horizon > 0.0);
  const auto orbit = classical_pendulums(alpha, init, horizon, h, 64, 500);
  CHECK(orbit.frequency_ratio == doctest::Approx(phi));
  CHECK(orbit.final_coverage == doctest::Approx(oracle_coverage(a0[0], a0[1], 1.0, phi, horizon, h, 64)).epsilon(2e-3));
  CHECK(orbit.final_coverage > 0.99);
  for (std::size_t i = 1; i < orbit.coverage.size(); ++i) {
    CHECK(orbit.coverage[i].fraction >= orbit.coverage[i - 1].fraction);
  }
  CHECK(classical_pendulums(alpha, init, 1000.0, h, 64, 500).final_coverage > 0.99);
}
