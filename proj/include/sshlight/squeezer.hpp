#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "sshlight/fockcheck.hpp"
#include "sshlight/lattice.hpp"
#include "sshlight/linalg.hpp"
#include "sshlight/moments.hpp"
#include "sshlight/spectral.hpp"

namespace sshlight::squeezer {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

// Three-term Sellmeier dispersion n^2 = 1 + sum b_i l^2 / (l^2 - c_i),
// wavelength l in micrometers. Defaults are the standard fused-silica fit;
// they are configuration inputs, not measured chip values.
struct SellmeierForm {
  std::array<double, 3> b{0.6961663, 0.4079426, 0.8974794};
  std::array<double, 3> c_um2{0.0684043 * 0.0684043, 0.1162414 * 0.1162414,
                              9.896161 * 9.896161};

  double index_at_wavelength_um(double lambda_um) const;
  double index_at_omega(double omega_rad_s) const;
};

struct PhaseMatchingProblem {
  double pump_omega_rad_s = 0.0;
  SellmeierForm dispersion;
  double delta_n = 0.0;                // pump birefringence
  double search_band_fraction = 0.4;   // max detuning as a fraction of omega_p

  void validate() const;
};

struct PhaseMatchingSolution {
  double omega_signal = 0.0;  // omega_p + detuning
  double omega_idler = 0.0;   // omega_p - detuning
  double detuning = 0.0;      // smallest non-negative root
  double residual = 0.0;      // |delta_k| at the root, 1/m
};

// Smallest non-negative detuning where the birefringent mismatch
// 2 (n(w_p)+dn) w_p/c - n(w_s) w_s/c - n(w_i) w_i/c vanishes, by bracketing
// plus bisection at relative tolerance 1e-12. Energy conservation
// w_s + w_i = 2 w_p holds by construction.
PhaseMatchingSolution solve_phase_matching(const PhaseMatchingProblem& problem);

// Classical pump over the chip: rows follow z_grid_mm, columns are sites,
// scaled so the injected total power is peak_power_w.
struct PumpProfile {
  std::vector<double> z_grid_mm;
  CMat amplitudes;  // sqrt(W) per site
  double peak_power_w = 0.0;
};

PumpProfile pump_profile(const spectral::Spectrum& pump_spectrum,
                         std::size_t input_port, double peak_power_w,
                         const std::vector<double>& z_grid_mm);

// Linear input-output map of the two-band system over vacuum:
//   a_s,out      = U a_s,in + V a_i,in^dag
//   a_i,out^dag  = W a_s,in + X a_i,in^dag
struct BogoliubovMap {
  CMat u, v, w, x;
  double z_final_mm = 0.0;
  double gamma = 0.0;  // 1/(mm W)

  double symplectic_residual() const;  // ||U U^dag - V V^dag - I||_F
};

// Integrates d/dz [a_s; a_i^dag] = i [[H_s, g D(z)], [-g conj(D(z)), -H_i]]
// [a_s; a_i^dag] with D = diag(A_n(z)^2), using piecewise-constant slice
// generators at the pump grid resolution (slice value: midpoint average) and
// exact slice exponentials. Throws a step-size NumericalError if the
// symplectic identity drifts beyond 1e-6.
BogoliubovMap propagate_bogoliubov(const lattice::Hamiltonian& h_signal,
                                   const lattice::Hamiltonian& h_idler,
                                   const PumpProfile& pump, double gamma,
                                   double z_final_mm);

// Same integration, snapshotting the map at each requested z (each must lie
// on the pump grid). Snapshots come back in ascending z order.
std::vector<BogoliubovMap> propagate_bogoliubov_checkpoints(
    const lattice::Hamiltonian& h_signal, const lattice::Hamiltonian& h_idler,
    const PumpProfile& pump, double gamma,
    const std::vector<double>& z_checkpoints_mm);

MomentSet moments_from_bogoliubov(const BogoliubovMap& map);

// Beamsplitter loss on Gaussian moments: N_s -> eta_s N_s, N_i -> eta_i N_i,
// M -> sqrt(eta_s eta_i) M.
MomentSet apply_loss(const MomentSet& moments, const DetectionModel& det);

// Gaussian-state cross-correlation g2 = 1 + |M[s,i]|^2 / (N_s[s,s] N_i[i,i]).
// Ports are 1-based site labels. Throws when either photon number vanishes.
double g2_cross(const MomentSet& moments, std::size_t s_port,
                std::size_t i_port);

// thresholds quoted for the reported cross-correlation
inline constexpr double kNonClassicalG2 = 2.0;
inline constexpr double kBellCapableG2 = 6.0;

// Cross-correlation as a counting experiment would estimate it: arm
// efficiencies thin the singles and a per-pulse background probability pd
// adds uncorrelated clicks, g2 = 1 + eta_s eta_i |M|^2 / ((eta_s N_s + pd_s)
// (eta_i N_i + pd_i)). Reduces to g2_cross at unit efficiency and zero
// background.
double g2_cross_measured(const MomentSet& moments, std::size_t s_port,
                         std::size_t i_port, const DetectionModel& det,
                         double pd_signal, double pd_idler);

// Heralded statistics of the reduced two-mode state at (s_port, i_port):
// the state is decomposed as a two-mode squeezed thermal state, expanded in
// the truncated Fock basis through the fockcheck machinery, and pushed
// through the same click/no-click POVM as the oracle.
fockcheck::HeraldedStats heralded_metrics(const MomentSet& moments,
                                          std::size_t s_port,
                                          std::size_t i_port,
                                          const DetectionModel& det,
                                          std::size_t cutoff = 12,
                                          double pd_signal = 0.0,
                                          double pd_idler = 0.0);

// lambda^2 = g2_H * eta_H / (2 (1 - (1 - eta_H)^2))
double squeeze_param_eq4(double g2_heralded, double eta_h);

struct EffectiveLambda {
  double lambda = 0.0;
  double mean_photon = 0.0;    // mu averaged over the two ports
  double thermal_signal = 0.0; // Williamson excess occupations; zero for TMSV
  double thermal_idler = 0.0;
  bool tmsv_like = false;
};

// lambda^2 = mu/(1+mu) with mu the reduced mean photon number. When the
// pairing-purity check fails the value is still reported, flagged through
// tmsv_like plus the thermal diagnostics.
EffectiveLambda effective_lambda(const MomentSet& moments, std::size_t s_port,
                                 std::size_t i_port);

}  // namespace sshlight::squeezer
