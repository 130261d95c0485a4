#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "bohm/ergodicity.hpp"

namespace bohm {

namespace {
constexpr double kNormTolerance = 1e-12;
// Amplitudes are re-evaluated from the closed form this often to stop phase drift.
constexpr std::size_t kResyncInterval = 1024;
}  // namespace

double SpectralSystem::min_gap() const {
  double gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < energies.size(); ++i) {
    for (Eigen::Index j = i + 1; j < energies.size(); ++j) {
      gap = std::min(gap, std::abs(energies[i] - energies[j]));
    }
  }
  return gap;
}

void SpectralSystem::validate() const {
  const auto n = energies.size();
  if (n < 1) throw ValidationError("spectral: empty system");
  if (coeffs.size() != n || observable.rows() != n || observable.cols() != n) {
    throw ValidationError("spectral: energies, coeffs and observable sizes differ");
  }
  if (!(hbar > 0.0)) throw ValidationError("spectral: hbar must be > 0");
  const double scale = std::max(1.0, energies.cwiseAbs().maxCoeff());
  if (n > 1 && !(min_gap() > 1e-12 * scale)) {
    throw ValidationError("spectral: degenerate energy spectrum");
  }
  if (std::abs(coeffs.squaredNorm() - 1.0) > kNormTolerance) {
    throw ValidationError("spectral: coefficients not normalized");
  }
  const double fscale = std::max(1.0, observable.cwiseAbs().maxCoeff());
  if ((observable - observable.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * fscale) {
    throw ValidationError("spectral: observable is not Hermitian");
  }
}

double spectral_expectation(const SpectralSystem& sys, double t) {
  const auto n = sys.energies.size();
  Eigen::VectorXcd a(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    a[i] = sys.coeffs[i] * std::polar(1.0, -sys.energies[i] * t / sys.hbar);
  }
  return (a.adjoint() * sys.observable * a)(0, 0).real();
}

SpectralAverage spectral_time_average(const SpectralSystem& sys, double T) {
  sys.validate();
  if (!(T > 0.0)) throw ValidationError("spectral: horizon must be > 0");
  const auto n = sys.energies.size();
  SpectralAverage out;
  out.horizon = T;
  out.min_gap = n > 1 ? sys.min_gap() : std::numeric_limits<double>::infinity();

  for (Eigen::Index i = 0; i < n; ++i) out.closed_form += std::norm(sys.coeffs[i]) * sys.observable(i, i).real();

  const Eigen::MatrixXcd rho = sys.coeffs.cwiseAbs2().cast<std::complex<double>>().asDiagonal();
  out.trace = (rho * sys.observable).trace().real();

  // Quarter of the fastest Bohr period keeps every phase step below pi/2.
  const double spread = n > 1 ? sys.energies.maxCoeff() - sys.energies.minCoeff() : 0.0;
  const double omega_max = spread / sys.hbar;
  double step = omega_max > 0.0 ? 0.5 * std::numbers::pi / omega_max : T;
  step = std::min(step, T / 1000.0);
  out.samples = static_cast<std::size_t>(std::ceil(T / step));
  out.sample_step = T / static_cast<double>(out.samples);

  std::vector<std::complex<double>> amp(n), rot(n);
  std::vector<std::complex<double>> fa(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    rot[i] = std::polar(1.0, -sys.energies[i] * out.sample_step / sys.hbar);
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < out.samples; ++k) {
    if (k % kResyncInterval == 0) {
      const double t = static_cast<double>(k) * out.sample_step;
      for (Eigen::Index i = 0; i < n; ++i) {
        amp[i] = sys.coeffs[i] * std::polar(1.0, -sys.energies[i] * t / sys.hbar);
      }
    }
    double value = 0.0;
    for (Eigen::Index r = 0; r < n; ++r) {
      std::complex<double> row{0.0, 0.0};
      for (Eigen::Index c = 0; c < n; ++c) row += sys.observable(r, c) * amp[c];
      value += (std::conj(amp[r]) * row).real();
    }
    sum += value;
    for (Eigen::Index i = 0; i < n; ++i) amp[i] *= rot[i];
  }
  out.cesaro = sum / static_cast<double>(out.samples);
  return out;
}

SpectralSystem random_spectral_system(std::size_t dim, CounterRng& rng, double min_gap) {
  if (dim < 1) throw ValidationError("spectral: dimension must be >= 1");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto n = static_cast<Eigen::Index>(dim);
  SpectralSystem sys;
  sys.energies.resize(n);
  double e = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    sys.energies[i] = e;
    e += min_gap + unit(rng);
  }
  sys.coeffs.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) sys.coeffs[i] = {normal(rng), normal(rng)};
  sys.coeffs.normalize();
  Eigen::MatrixXcd g(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) g(r, c) = {normal(rng), normal(rng)};
  }
  sys.observable = 0.5 * (g + g.adjoint());
  return sys;
}

nlohmann::json to_json(const SpectralAverage& avg) {
  return {{"closed_form", avg.closed_form},
          {"cesaro", avg.cesaro},
          {"trace_rho_F", avg.trace},
          {"horizon", avg.horizon},
          {"sample_step", avg.sample_step},
          {"samples", avg.samples},
          {"min_gap", avg.min_gap},
          {"bound", avg.bound()},
          {"abs_difference", std::abs(avg.cesaro - avg.closed_form)}};
}

}  // namespace bohm
