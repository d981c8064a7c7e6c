#include "sshlight/spectral.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "sshlight/errors.hpp"

namespace sshlight::spectral {

Spectrum eigendecompose(const lattice::Hamiltonian& h) {
  auto eig = jacobi_eigensym(h.matrix);  // throws NumericalError on stall

  const std::size_t n = h.dimension;
  for (std::size_t m = 0; m < n; ++m) {
    double* row = eig.vectors.row(m);
    double peak = 0.0;
    for (std::size_t i = 0; i < n; ++i) peak = std::max(peak, std::abs(row[i]));
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(row[i]) > 1e-10 * peak) {
        if (row[i] < 0.0)
          for (std::size_t j = 0; j < n; ++j) row[j] = -row[j];
        break;
      }
    }
  }

  Spectrum s;
  s.eigenvalues = std::move(eig.values);
  s.eigenvectors = std::move(eig.vectors);
  s.source_dimension = n;
  return s;
}

std::vector<std::size_t> find_gap_modes(const Spectrum& spectrum,
                                        double zero_window, double j_strong) {
  if (!(zero_window > 0.0 && zero_window < 1.0))
    throw ConfigError("find_gap_modes: zero_window must lie in (0,1)");
  if (!(j_strong > 0.0))
    throw ConfigError("find_gap_modes: j_strong must be > 0");
  std::vector<std::size_t> modes;
  for (std::size_t m = 0; m < spectrum.eigenvalues.size(); ++m)
    if (std::abs(spectrum.eigenvalues[m]) < zero_window * j_strong)
      modes.push_back(m);
  return modes;
}

LdosProfile ldos(const Spectrum& spectrum, double energy, double broadening) {
  if (!(broadening > 0.0)) throw ConfigError("ldos: broadening must be > 0");
  const std::size_t n = spectrum.source_dimension;
  LdosProfile profile;
  profile.energy = energy;
  profile.broadening = broadening;
  profile.values.assign(n, 0.0);

  const double norm = 1.0 / (broadening * std::sqrt(2.0 * std::numbers::pi));
  for (std::size_t m = 0; m < spectrum.eigenvalues.size(); ++m) {
    const double d = (energy - spectrum.eigenvalues[m]) / broadening;
    const double weight = norm * std::exp(-0.5 * d * d);
    if (weight == 0.0) continue;
    const double* row = spectrum.eigenvectors.row(m);
    for (std::size_t i = 0; i < n; ++i)
      profile.values[i] += weight * row[i] * row[i];
  }
  return profile;
}

double circular_distance(double a, double b) {
  const double tau = 2.0 * std::numbers::pi;
  double d = std::fmod(std::abs(a - b), tau);
  return std::min(d, tau - d);
}

ZakResult zak_phase(double j_weak, double j_strong, std::size_t k_samples) {
  if (!(j_weak > 0.0) || !(j_strong > 0.0))
    throw ConfigError("zak_phase: couplings must be > 0");
  if (std::abs(j_weak - j_strong) <= 1e-12 * std::max(j_weak, j_strong))
    throw ConfigError("zak_phase: equal couplings close the gap");
  if (k_samples < 64)
    throw ConfigError("zak_phase: need at least 64 k samples");

  // Bloch Hamiltonian [[0, h(k)], [conj(h(k)), 0]] with
  // h(k) = j_weak + j_strong*exp(ik); lower-band eigenvector
  // (-h/|h|, 1)/sqrt(2). The Wilson loop multiplies link overlaps
  // (1 + exp(i*dphi))/2, which is gauge invariant with the periodic closure.
  const double tau = 2.0 * std::numbers::pi;
  std::vector<double> phi(k_samples);
  for (std::size_t j = 0; j < k_samples; ++j) {
    const double k = tau * static_cast<double>(j) / k_samples;
    phi[j] = std::arg(std::complex<double>(j_weak + j_strong * std::cos(k),
                                           j_strong * std::sin(k)));
  }
  std::complex<double> loop{1.0, 0.0};
  for (std::size_t j = 0; j < k_samples; ++j) {
    const double dphi = phi[(j + 1) % k_samples] - phi[j];
    loop *= 0.5 * (1.0 + std::polar(1.0, dphi));
    loop /= std::abs(loop);  // only the accumulated phase matters
  }

  ZakResult out;
  out.k_samples = k_samples;
  double phase = std::arg(loop);
  if (phase < 0.0) phase += tau;
  if (tau - phase < 1e-9) phase = 0.0;  // wrap near-zero from below
  out.phase = phase;
  out.converged = std::min(circular_distance(phase, 0.0),
                           circular_distance(phase, std::numbers::pi)) <=
                  1e-6 * tau;
  return out;
}

}  // namespace sshlight::spectral
