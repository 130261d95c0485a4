#include "bohm/wavefunctions.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "bohm/quadrature.hpp"

namespace bohm {

namespace {

constexpr double kNodeThreshold = 1e-12;

void require(bool ok, const char* what) {
  if (!ok) throw ValidationError(what);
}

void require_finite(const Configuration& c) {
  if (!c.finite()) throw DomainError("configuration has non-finite coordinates");
}

void require_dim(const Configuration& c, std::size_t dim) {
  if (c.dim != dim) {
    throw ValidationError("configuration has " + std::to_string(c.dim) +
                          " coordinates, model expects " + std::to_string(dim));
  }
}

// Radii and the spatial amplitudes of both exchange terms.
struct SphericalTerms {
  std::array<double, 4> r;  // r1A, r1B, r2A, r2B
  Complex u;                // exp(ik(r1A + r2B)) / (r1A r2B)
  Complex w;                // exp(ik(r1B + r2A)) / (r1B r2A)
};

SphericalTerms spherical_terms(const InterferometerParams& p, const Configuration& c) {
  require_dim(c, 4);
  require_finite(c);
  const auto r = slit_radii(p, c);
  // Launch points sit on the epsilon_r circle up to rounding.
  const double cutoff = p.epsilon_r * (1.0 - 1e-9);
  for (double ri : r) {
    if (ri < cutoff) {
      throw DomainError("particle within epsilon_r of a slit (point-slit singularity)");
    }
  }
  const double r1A = r[0], r1B = r[1], r2A = r[2], r2B = r[3];
  return {r, std::polar(1.0 / (r1A * r2B), p.k * (r1A + r2B)),
          std::polar(1.0 / (r1B * r2A), p.k * (r1B + r2A))};
}

Complex time_factor(const InterferometerParams& p, double t) {
  return std::polar(1.0, -p.energy() * t / p.hbar);
}

}  // namespace

bool Configuration::finite() const {
  if (!std::isfinite(t)) return false;
  for (double x : coords()) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

bool Window::contains(const Configuration& c) const {
  const std::size_t n = std::min(bounds.size(), c.dim);
  for (std::size_t i = 0; i < n; ++i) {
    if (!bounds[i].contains(c.q[i])) return false;
  }
  return true;
}

std::string to_string(WavefunctionKind kind) {
  switch (kind) {
    case WavefunctionKind::OscillatorProduct: return "oscillator-product";
    case WavefunctionKind::SphericalNonOverlap: return "spherical-non-overlap";
    case WavefunctionKind::SphericalBosonic: return "spherical-bosonic";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Parameters

OscillatorParams OscillatorParams::from_coupling(double alpha, double a1, double a2, double hbar) {
  require(alpha >= 0.0, "alpha: spring coupling must be >= 0");
  OscillatorParams p;
  p.omega1 = 1.0;
  p.omega2 = std::sqrt(1.0 + 2.0 * alpha);
  p.a1 = a1;
  p.a2 = a2;
  p.hbar = hbar;
  p.validate();
  return p;
}

void OscillatorParams::validate() const {
  require(std::isfinite(omega1) && omega1 > 0.0, "omega1: must be > 0");
  require(std::isfinite(omega2) && omega2 > 0.0, "omega2: must be > 0");
  require(std::isfinite(a1) && a1 >= 0.0, "a1: must be >= 0");
  require(std::isfinite(a2) && a2 >= 0.0, "a2: must be >= 0");
  require(std::isfinite(hbar) && hbar > 0.0, "hbar: must be > 0");
}

double OscillatorParams::width1() const { return std::sqrt(hbar / (2.0 * omega1)); }
double OscillatorParams::width2() const { return std::sqrt(hbar / (2.0 * omega2)); }

void InterferometerParams::validate() const {
  require(std::isfinite(k) && k > 0.0, "k: must be > 0");
  require(std::isfinite(a) && a > 0.0, "a: must be > 0");
  require(std::isfinite(m) && m > 0.0, "m: must be > 0");
  require(std::isfinite(hbar) && hbar > 0.0, "hbar: must be > 0");
  require(std::isfinite(epsilon_r) && epsilon_r > 0.0, "epsilon_r: must be > 0");
  require(epsilon_r <= 0.1 * a, "epsilon_r: must be much smaller than a (<= 0.1 a)");
}

std::array<double, 4> slit_radii(const InterferometerParams& p, const Configuration& c) {
  const double x1 = c.q[0], y1 = c.q[1], x2 = c.q[2], y2 = c.q[3];
  return {std::hypot(x1, y1 - p.a), std::hypot(x1, y1 + p.a), std::hypot(x2, y2 - p.a),
          std::hypot(x2, y2 + p.a)};
}

// ---------------------------------------------------------------------------
// Oscillator product

OscillatorProduct::OscillatorProduct(const OscillatorParams& params) : params_(params) {
  params_.validate();
}

std::array<double, 2> OscillatorProduct::centers(double t) const {
  return {params_.a1 * std::cos(params_.omega1 * t), -params_.a2 * std::cos(params_.omega2 * t)};
}

double OscillatorProduct::phase(const Configuration& c) const {
  require_dim(c, 2);
  const auto& p = params_;
  const double t = c.t;
  const double w1t = p.omega1 * t, w2t = p.omega2 * t;
  const double s1 = -0.5 * p.hbar * w1t -
                    0.5 * p.omega1 *
                        (2.0 * c.q[0] * p.a1 * std::sin(w1t) - 0.5 * p.a1 * p.a1 * std::sin(2.0 * w1t));
  const double s2 = -0.5 * p.hbar * w2t -
                    0.5 * p.omega2 *
                        (-2.0 * c.q[1] * p.a2 * std::sin(w2t) - 0.5 * p.a2 * p.a2 * std::sin(2.0 * w2t));
  return s1 + s2;
}

double OscillatorProduct::density(const Configuration& c) const {
  require_dim(c, 2);
  require_finite(c);
  const auto& p = params_;
  const auto ctr = centers(c.t);
  const double d1 = c.q[0] - ctr[0], d2 = c.q[1] - ctr[1];
  const double norm = std::sqrt(p.omega1 * p.omega2) / (std::numbers::pi * p.hbar);
  return norm * std::exp(-(p.omega1 * d1 * d1 + p.omega2 * d2 * d2) / p.hbar);
}

Complex OscillatorProduct::psi(const Configuration& c) const {
  return std::polar(std::sqrt(density(c)), phase(c) / params_.hbar);
}

Coords OscillatorProduct::grad_phase(const Configuration& c) const {
  require_dim(c, 2);
  require_finite(c);
  const auto& p = params_;
  return {-p.omega1 * p.a1 * std::sin(p.omega1 * c.t), p.omega2 * p.a2 * std::sin(p.omega2 * c.t),
          0.0, 0.0};
}

// ---------------------------------------------------------------------------
// Spherical waves, non-overlapping region

SphericalNonOverlap::SphericalNonOverlap(const InterferometerParams& params) : params_(params) {
  params_.validate();
}

Complex SphericalNonOverlap::psi(const Configuration& c) const {
  const auto terms = spherical_terms(params_, c);
  return terms.u * time_factor(params_, c.t) / (2.0 * std::numbers::pi);
}

double SphericalNonOverlap::phase(const Configuration& c) const {
  const auto terms = spherical_terms(params_, c);
  return params_.hbar * params_.k * (terms.r[0] + terms.r[3]) - params_.energy() * c.t;
}

double SphericalNonOverlap::density(const Configuration& c) const {
  return std::norm(psi(c));
}

Coords SphericalNonOverlap::grad_phase(const Configuration& c) const {
  const auto terms = spherical_terms(params_, c);
  const double hk = params_.hbar * params_.k;
  const double r1A = terms.r[0], r2B = terms.r[3];
  return {hk * c.q[0] / r1A, hk * (c.q[1] - params_.a) / r1A, hk * c.q[2] / r2B,
          hk * (c.q[3] + params_.a) / r2B};
}

// ---------------------------------------------------------------------------
// Spherical waves, bosonic superposition

SphericalBosonic::SphericalBosonic(const InterferometerParams& params) : params_(params) {
  params_.validate();
}

Complex SphericalBosonic::psi(const Configuration& c) const {
  const auto terms = spherical_terms(params_, c);
  return (terms.u + terms.w) * time_factor(params_, c.t);
}

double SphericalBosonic::phase(const Configuration& c) const {
  const auto terms = spherical_terms(params_, c);
  const Complex sum = terms.u + terms.w;
  if (std::abs(sum) < kNodeThreshold * (std::abs(terms.u) + std::abs(terms.w))) {
    throw NodeError("phase undefined at a node of the bosonic wavefunction");
  }
  return params_.hbar * std::arg(sum) - params_.energy() * c.t;
}

double SphericalBosonic::density(const Configuration& c) const {
  const auto terms = spherical_terms(params_, c);
  return std::norm(terms.u + terms.w);
}

Coords SphericalBosonic::grad_phase(const Configuration& c) const {
  const auto terms = spherical_terms(params_, c);
  const Complex sum = terms.u + terms.w;
  if (std::abs(sum) < kNodeThreshold * (std::abs(terms.u) + std::abs(terms.w))) {
    throw NodeError("velocity undefined at a node of the bosonic wavefunction");
  }
  const auto& p = params_;
  const double x1 = c.q[0], y1 = c.q[1], x2 = c.q[2], y2 = c.q[3];
  const double r1A = terms.r[0], r1B = terms.r[1], r2A = terms.r[2], r2B = terms.r[3];
  const Complex ik{0.0, p.k};

  // d/dr of exp(ikr)/r is (ik - 1/r) exp(ikr)/r; chain rule through each radius.
  const Complex u1 = terms.u * (ik - 1.0 / r1A) / r1A;
  const Complex u2 = terms.u * (ik - 1.0 / r2B) / r2B;
  const Complex w1 = terms.w * (ik - 1.0 / r1B) / r1B;
  const Complex w2 = terms.w * (ik - 1.0 / r2A) / r2A;

  const std::array<Complex, 4> grad{u1 * x1 + w1 * x1, u1 * (y1 - p.a) + w1 * (y1 + p.a),
                                    u2 * x2 + w2 * x2, u2 * (y2 + p.a) + w2 * (y2 - p.a)};
  Coords out{};
  for (std::size_t i = 0; i < 4; ++i) out[i] = p.hbar * (grad[i] / sum).imag();
  return out;
}

// ---------------------------------------------------------------------------
// Model wrapper

WavefunctionModel WavefunctionModel::oscillator(const OscillatorParams& params) {
  return WavefunctionModel(Impl{OscillatorProduct(params)});
}

WavefunctionModel WavefunctionModel::spherical_non_overlap(const InterferometerParams& params) {
  return WavefunctionModel(Impl{SphericalNonOverlap(params)});
}

WavefunctionModel WavefunctionModel::spherical_bosonic(const InterferometerParams& params) {
  return WavefunctionModel(Impl{SphericalBosonic(params)});
}

WavefunctionKind WavefunctionModel::kind() const {
  return static_cast<WavefunctionKind>(impl_.index());
}

std::size_t WavefunctionModel::dimension() const {
  return kind() == WavefunctionKind::OscillatorProduct ? 2 : 4;
}

std::string WavefunctionModel::id() const {
  std::ostringstream os;
  os.precision(17);
  os << to_string(kind());
  if (const auto* p = oscillator_params()) {
    os << "(omega1=" << p->omega1 << ",omega2=" << p->omega2 << ",a1=" << p->a1
       << ",a2=" << p->a2 << ",hbar=" << p->hbar;
  } else if (const auto* q = interferometer_params()) {
    os << "(k=" << q->k << ",a=" << q->a << ",m=" << q->m << ",hbar=" << q->hbar
       << ",epsilon_r=" << q->epsilon_r;
  }
  os << ",scale=" << scale_ << ")";
  return os.str();
}

Complex WavefunctionModel::psi(const Configuration& c) const {
  return scale_ * std::visit([&](const auto& m) { return m.psi(c); }, impl_);
}

double WavefunctionModel::phase(const Configuration& c) const {
  return std::visit([&](const auto& m) { return m.phase(c); }, impl_);
}

Coords WavefunctionModel::grad_phase(const Configuration& c) const {
  return std::visit([&](const auto& m) { return m.grad_phase(c); }, impl_);
}

double WavefunctionModel::born_density(const Configuration& c) const {
  return scale_ * scale_ * std::visit([&](const auto& m) { return m.density(c); }, impl_);
}

WavefunctionModel WavefunctionModel::scaled(double factor) const {
  require(std::isfinite(factor) && factor > 0.0, "scale factor must be finite and > 0");
  WavefunctionModel out = *this;
  out.scale_ *= factor;
  return out;
}

WavefunctionModel WavefunctionModel::normalized(double n) const {
  require(std::isfinite(n) && n > 0.0, "normalization constant must be finite and > 0");
  return scaled(1.0 / n);
}

const OscillatorParams* WavefunctionModel::oscillator_params() const {
  if (const auto* m = std::get_if<OscillatorProduct>(&impl_)) return &m->params();
  return nullptr;
}

const InterferometerParams* WavefunctionModel::interferometer_params() const {
  if (const auto* m = std::get_if<SphericalNonOverlap>(&impl_)) return &m->params();
  if (const auto* m = std::get_if<SphericalBosonic>(&impl_)) return &m->params();
  return nullptr;
}

// ---------------------------------------------------------------------------

namespace {

double distance_to_box(double px, double py, const Interval& bx, const Interval& by) {
  const double dx = std::max({bx.lo - px, 0.0, px - bx.hi});
  const double dy = std::max({by.lo - py, 0.0, py - by.hi});
  return std::hypot(dx, dy);
}

}  // namespace

double normalize_numeric(const WavefunctionModel& model, const Window& window, double t,
                         double rel_tol) {
  const std::size_t dim = model.dimension();
  if (window.bounds.size() != dim) {
    throw ValidationError("window: expected " + std::to_string(dim) + " intervals");
  }
  for (const auto& b : window.bounds) {
    if (!(std::isfinite(b.lo) && std::isfinite(b.hi) && b.lo <= b.hi)) {
      throw ValidationError("window: bounds must be finite with lo <= hi");
    }
  }
  if (const auto* p = model.interferometer_params()) {
    for (std::size_t particle = 0; particle < 2; ++particle) {
      const auto& bx = window.bounds[2 * particle];
      const auto& by = window.bounds[2 * particle + 1];
      if (distance_to_box(0.0, p->a, bx, by) < p->epsilon_r ||
          distance_to_box(0.0, -p->a, bx, by) < p->epsilon_r) {
        throw DomainError("window: must exclude the epsilon_r balls around both slits");
      }
    }
  }
  QuadratureOptions opts;
  opts.rel_tol = rel_tol;
  const auto result = integrate_box(
      [&](const Configuration& c) { return model.born_density(c); }, window, dim, t, opts);
  if (!(result.value > 0.0)) throw QuadratureError("normalization integral is not positive");
  return std::sqrt(result.value);
}

}  // namespace bohm
