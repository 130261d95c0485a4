#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "bohm/dynamics.hpp"
#include "bohm/quadrature.hpp"
#include "bohm/wavefunctions.hpp"

using namespace bohm;

namespace {

// Packets written out independently of the library.
Complex packet_a(double q, double t, double w, double a, double hbar) {
  const double norm = std::pow(w / (std::numbers::pi * hbar), 0.25);
  const double re = -(w / (2 * hbar)) * std::pow(q - a * std::cos(w * t), 2);
  const double im = -0.5 * (w * t + (w / hbar) * (2 * q * a * std::sin(w * t) - 0.5 * a * a * std::sin(2 * w * t)));
  return norm * std::exp(Complex(re, im));
}

Complex packet_b(double q, double t, double w, double a, double hbar) {
  const double norm = std::pow(w / (std::numbers::pi * hbar), 0.25);
  const double re = -(w / (2 * hbar)) * std::pow(q + a * std::cos(w * t), 2);
  const double im = -0.5 * (w * t + (w / hbar) * (-2 * q * a * std::sin(w * t) - 0.5 * a * a * std::sin(2 * w * t)));
  return norm * std::exp(Complex(re, im));
}

Complex spherical(double x, double y, double sy, double k) {
  const double r = std::hypot(x, y - sy);
  return std::exp(Complex(0, k * r)) / r;
}

double wrap(double d, double period) { return d - period * std::round(d / period); }

// Central differences of the phase, unwrapped across the principal branch.
Coords fd_grad_phase(const WavefunctionModel& m, const Configuration& c, double step, double period) {
  Coords g{};
  for (std::size_t i = 0; i < c.dim; ++i) {
    Configuration p = c, q = c, p2 = c, q2 = c;
    p.q[i] += step;
    q.q[i] -= step;
    p2.q[i] += 2 * step;
    q2.q[i] -= 2 * step;
    const double s0 = m.phase(c);
    const double d1 = wrap(m.phase(p) - s0, period) - wrap(m.phase(q) - s0, period);
    const double d2 = wrap(m.phase(p2) - s0, period) - wrap(m.phase(q2) - s0, period);
    g[i] = (8 * d1 - d2) / (12 * step);
  }
  return g;
}

double rel_error(const Coords& a, const Coords& b, std::size_t dim) {
  double num = 0, den = 0;
  for (std::size_t i = 0; i < dim; ++i) {
    num = std::max(num, std::abs(a[i] - b[i]));
    den = std::max(den, std::abs(b[i]));
  }
  return num / std::max(den, 1.0);
}

}  // namespace

TEST_CASE("oscillator psi matches the packet product") {
  OscillatorParams p{1.3, 2.1, 0.7, 1.2, 0.9};
  const auto m = WavefunctionModel::oscillator(p);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-3, 3), ut(0, 20);
  for (int n = 0; n < 200; ++n) {
    const auto c = Configuration::oscillator(ut(rng), u(rng), u(rng));
    const Complex ref = packet_a(c.q[0], c.t, p.omega1, p.a1, p.hbar) * packet_b(c.q[1], c.t, p.omega2, p.a2, p.hbar);
    CHECK(std::abs(m.psi(c) - ref) <= 1e-12 * std::max(1e-300, std::abs(ref)) + 1e-300);
    CHECK(m.born_density(c) == doctest::Approx(std::norm(ref)).epsilon(1e-12));
  }
}

TEST_CASE("oscillator phase gradient is the closed-form momentum") {
  const OscillatorParams p{1.0, 2.0, 1.0, 1.0, 1.0};
  const auto m = WavefunctionModel::oscillator(p);
  for (double t : {0.0, 0.3, 1.7, 5.0}) {
    const auto g = m.grad_phase(Configuration::oscillator(t, 0.4, -0.2));
    CHECK(g[0] == doctest::Approx(-p.omega1 * p.a1 * std::sin(p.omega1 * t)));
    CHECK(g[1] == doctest::Approx(p.omega2 * p.a2 * std::sin(p.omega2 * t)));
  }
}

TEST_CASE("interferometer psi matches spherical-wave products") {
  InterferometerParams p;
  p.k = 7.0;
  p.a = 1.5;
  const auto non = WavefunctionModel::spherical_non_overlap(p);
  const auto bos = WavefunctionModel::spherical_bosonic(p);
  const double E = p.energy();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ux(0.5, 25), uy(-6, 6);
  for (int n = 0; n < 200; ++n) {
    const double t = 1.3;
    const auto c = Configuration::plane(t, ux(rng), uy(rng), ux(rng), uy(rng));
    const Complex tf = std::exp(Complex(0, -E * t / p.hbar));
    const Complex u = spherical(c.q[0], c.q[1], p.a, p.k) * spherical(c.q[2], c.q[3], -p.a, p.k);
    const Complex w = spherical(c.q[0], c.q[1], -p.a, p.k) * spherical(c.q[2], c.q[3], p.a, p.k);
    const Complex ref_non = u / (2 * std::numbers::pi) * tf;
    const Complex ref_bos = (u + w) * tf;
    CHECK(std::abs(non.psi(c) - ref_non) <= 1e-12 * std::abs(ref_non));
    CHECK(std::abs(bos.psi(c) - ref_bos) <= 1e-11 * (std::abs(u) + std::abs(w)));
  }
}

TEST_CASE("grad_phase agrees with finite differences at 10^4 points") {
  std::mt19937_64 rng(11);
  SUBCASE("oscillator") {
    const auto m = WavefunctionModel::oscillator(OscillatorParams{1.0, 1.7, 1.0, 0.8, 1.0});
    std::uniform_real_distribution<double> u(-3, 3), ut(0, 10);
    double worst = 0;
    for (int n = 0; n < 10000; ++n) {
      const auto c = Configuration::oscillator(ut(rng), u(rng), u(rng));
      worst = std::max(worst, rel_error(fd_grad_phase(m, c, 1e-3, 1e300), m.grad_phase(c), 2));
    }
    CHECK(worst < 1e-6);
  }
  SUBCASE("non-overlap") {
    InterferometerParams p;
    const auto m = WavefunctionModel::spherical_non_overlap(p);
    std::uniform_real_distribution<double> ux(0.2, 25), uy(-8, 8);
    double worst = 0;
    for (int n = 0; n < 10000; ++n) {
      const auto c = Configuration::plane(1.0, ux(rng), uy(rng), ux(rng), uy(rng));
      worst = std::max(worst, rel_error(fd_grad_phase(m, c, 1e-4, 1e300), m.grad_phase(c), 4));
    }
    CHECK(worst < 1e-6);
  }
  SUBCASE("bosonic") {
    InterferometerParams p;
    const auto m = WavefunctionModel::spherical_bosonic(p);
    std::uniform_real_distribution<double> ux(0.2, 25), uy(-8, 8);
    const double period = 2 * std::numbers::pi * p.hbar;
    double worst = 0;
    int used = 0;
    for (int n = 0; n < 10000; ++n) {
      const auto c = Configuration::plane(1.0, ux(rng), uy(rng), ux(rng), uy(rng));
      // Near nodes the phase varies on scales below any fixed stencil; refine there.
      const auto r = slit_radii(p, c);
      const Complex u = std::polar(1.0 / (r[0] * r[3]), p.k * (r[0] + r[3]));
      const Complex w = std::polar(1.0 / (r[1] * r[2]), p.k * (r[1] + r[2]));
      const double closeness = std::abs(u + w) / (std::abs(u) + std::abs(w));
      const double step = 1e-4 * std::min(1.0, 10 * closeness);
      Coords g;
      try {
        g = m.grad_phase(c);
      } catch (const NodeError&) {
        continue;
      }
      ++used;
      worst = std::max(worst, rel_error(fd_grad_phase(m, c, step, period), g, 4));
    }
    CHECK(used == 10000);
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("bosonic psi is symmetric under exchange and under reflection") {
  InterferometerParams p;
  const auto m = WavefunctionModel::spherical_bosonic(p);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ux(0.2, 25), uy(-8, 8);
  for (int n = 0; n < 1000; ++n) {
    const auto c = Configuration::plane(0.7, ux(rng), uy(rng), ux(rng), uy(rng));
    const auto swapped = Configuration::plane(c.t, c.q[2], c.q[3], c.q[0], c.q[1]);
    const auto reflected = Configuration::plane(c.t, c.q[0], -c.q[1], c.q[2], -c.q[3]);
    const double scale = std::abs(m.psi(c)) + 1e-300;
    CHECK(std::abs(m.psi(swapped) - m.psi(c)) <= 1e-12 * scale);
    CHECK(std::abs(m.psi(reflected) - m.psi(c)) <= 1e-12 * scale);
  }
}

TEST_CASE("non-overlap psi is symmetric under reflection together with exchange") {
  InterferometerParams p;
  const auto m = WavefunctionModel::spherical_non_overlap(p);
  const auto c = Configuration::plane(0.4, 3.0, 1.7, 5.0, -0.3);
  const auto mirrored = Configuration::plane(c.t, c.q[2], -c.q[3], c.q[0], -c.q[1]);
  CHECK(std::abs(m.psi(mirrored) - m.psi(c)) <= 1e-14 * std::abs(m.psi(c)));
}

TEST_CASE("non-overlap velocities are radial with speed hbar k / m") {
  InterferometerParams p;
  p.k = 4.0;
  p.m = 2.5;
  p.hbar = 0.7;
  const auto m = WavefunctionModel::spherical_non_overlap(p);
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> ux(0.2, 25), uy(-8, 8);
  for (int n = 0; n < 500; ++n) {
    const auto c = Configuration::plane(1.0, ux(rng), uy(rng), ux(rng), uy(rng));
    const auto v = velocity_field(m, c);
    CHECK(std::hypot(v[0], v[1]) == doctest::Approx(p.speed()).epsilon(1e-13));
    CHECK(std::hypot(v[2], v[3]) == doctest::Approx(p.speed()).epsilon(1e-13));
    // Direction away from slit A for particle 1.
    CHECK(v[0] * c.q[0] + v[1] * (c.q[1] - p.a) == doctest::Approx(p.speed() * std::hypot(c.q[0], c.q[1] - p.a)));
  }
}

TEST_CASE("radii below epsilon_r raise DomainError") {
  InterferometerParams p;
  for (const auto& m : {WavefunctionModel::spherical_non_overlap(p), WavefunctionModel::spherical_bosonic(p)}) {
    const auto at_slit = Configuration::plane(1.0, 0.0, p.a + 0.5 * p.epsilon_r, 5.0, -1.0);
    CHECK_THROWS_AS(m.psi(at_slit), DomainError);
    CHECK_THROWS_AS(m.grad_phase(at_slit), DomainError);
  }
}

TEST_CASE("bosonic nodes raise NodeError") {
  InterferometerParams p;
  const auto m = WavefunctionModel::spherical_bosonic(p);
  // Particle 2 fixed. |u| = |w| holds on the circle of points P with
  // |P - A| = rho |P - B|; walk it until u / w crosses -1.
  const double x2 = 6.0, y2 = 0.8;
  const double rho = std::hypot(x2, y2 - p.a) / std::hypot(x2, y2 + p.a);
  const double cy = p.a * (1 + rho * rho) / (1 - rho * rho), radius = 2 * p.a * rho / (1 - rho * rho);
  auto point = [&](double phi) { return Configuration::plane(1.0, radius * std::cos(phi), cy + radius * std::sin(phi), x2, y2); };
  auto ratio = [&](double phi) {
    const auto r = slit_radii(p, point(phi));
    return std::polar(r[1] * r[2] / (r[0] * r[3]), p.k * (r[0] + r[3] - r[1] - r[2]));
  };
  double lo = -0.5 * std::numbers::pi, hi = lo;
  for (double phi = lo + 1e-3; phi < 0.0; phi += 1e-3) {
    if (ratio(phi).real() < 0 && std::signbit(ratio(phi).imag()) != std::signbit(ratio(phi - 1e-3).imag())) {
      lo = phi - 1e-3;
      hi = phi;
      break;
    }
  }
  REQUIRE(hi > lo);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (std::signbit(ratio(mid).imag()) == std::signbit(ratio(lo).imag()) ? lo : hi) = mid;
  }
  const auto node = point(lo);
  REQUIRE(node.q[0] > 0.1);
  const auto r = slit_radii(p, node);
  const Complex u = std::polar(1.0 / (r[0] * r[3]), p.k * (r[0] + r[3]));
  const Complex w = std::polar(1.0 / (r[1] * r[2]), p.k * (r[1] + r[2]));
  REQUIRE(std::abs(u + w) < 1e-12 * (std::abs(u) + std::abs(w)));
  CHECK(m.born_density(node) <= 1e-24 * std::norm(std::abs(u) + std::abs(w)));
  CHECK_THROWS_AS(m.grad_phase(node), NodeError);
  CHECK(integrate(m, node, 1e-3, 0.1).status == TrajectoryStatus::NodeAborted);
  auto off = node;
  off.q[0] += 1e-3;
  CHECK_NOTHROW(m.grad_phase(off));
}

TEST_CASE("scaling psi leaves grad_phase unchanged") {
  InterferometerParams p;
  const auto m = WavefunctionModel::spherical_bosonic(p);
  const auto c = Configuration::plane(0.5, 4.0, 1.2, 3.0, -0.4);
  const auto g = m.grad_phase(c), g2 = m.scaled(2.0).grad_phase(c);
  for (std::size_t i = 0; i < 4; ++i) CHECK(g2[i] == g[i]);
  CHECK(m.scaled(2.0).born_density(c) == doctest::Approx(4 * m.born_density(c)));
}

TEST_CASE("bosonic norm away from overlap is the sum of the two direct norms") {
  InterferometerParams p;
  const auto m = WavefunctionModel::spherical_bosonic(p);
  const Window w{{{2, 3}, {0.5, 1.5}, {2, 3}, {-1.5, -0.5}}};
  QuadratureOptions opts;
  opts.rel_tol = 1e-6;
  auto direct = [&](bool swapped) {
    return integrate_box(
               [&](const Configuration& c) {
                 const auto r = slit_radii(p, c);
                 return swapped ? 1.0 / std::pow(r[1] * r[2], 2) : 1.0 / std::pow(r[0] * r[3], 2);
               },
               w, 4, 0.0, opts)
        .value;
  };
  const double n = normalize_numeric(m, w);
  CHECK(n * n == doctest::Approx(direct(false) + direct(true)).epsilon(1e-2));
}

TEST_CASE("normalize_numeric returns 1 for the normalized oscillator packets") {
  const OscillatorParams p{1.0, 2.0, 1.0, 1.0, 1.0};
  const auto m = WavefunctionModel::oscillator(p);
  const Window w{{{-10, 10}, {-10, 10}}};
  for (double t : {0.0, 0.9, 2.5}) CHECK(normalize_numeric(m, w, t) == doctest::Approx(1.0).epsilon(1e-4));
  const auto scaled = m.scaled(3.0);
  const double n = normalize_numeric(scaled, w, 0.4);
  CHECK(n == doctest::Approx(3.0).epsilon(1e-4));
  CHECK(normalize_numeric(scaled.normalized(n), w, 0.4) == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("normalize_numeric rejects windows touching the slits") {
  InterferometerParams p;
  const auto m = WavefunctionModel::spherical_bosonic(p);
  const Window touching{{{0.0, 1.0}, {-2, 2}, {20, 20}, {-2, 2}}};
  CHECK_THROWS_AS(normalize_numeric(m, touching), DomainError);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(WavefunctionModel::oscillator(OscillatorParams{0.0, 2.0, 1.0, 1.0, 1.0}), ValidationError);
  CHECK_THROWS_AS(WavefunctionModel::oscillator(OscillatorParams{1.0, 2.0, 1.0, 1.0, -1.0}), ValidationError);
  InterferometerParams p;
  p.epsilon_r = 0.5;
  CHECK_THROWS_AS(WavefunctionModel::spherical_bosonic(p), ValidationError);
  p = {};
  p.k = 0;
  CHECK_THROWS_AS(WavefunctionModel::spherical_non_overlap(p), ValidationError);
  CHECK(OscillatorParams::from_coupling(1.5, 1, 1).omega2 == doctest::Approx(2.0));
}

TEST_CASE("model identity") {
  InterferometerParams p;
  CHECK(WavefunctionModel::spherical_bosonic(p).kind() == WavefunctionKind::SphericalBosonic);
  CHECK(WavefunctionModel::spherical_bosonic(p).dimension() == 4);
  CHECK(WavefunctionModel::oscillator({}).dimension() == 2);
  CHECK(WavefunctionModel::oscillator({}).id() != WavefunctionModel::oscillator({}).scaled(2).id());
}
