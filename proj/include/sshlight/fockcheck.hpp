#pragma once

#include <cstddef>
#include <vector>

#include "sshlight/linalg.hpp"
#include "sshlight/moments.hpp"

namespace sshlight::fockcheck {

// Truncated Fock space for at most 4 modes (signal sites first, then idler
// sites). Basis states are occupation tuples in lexicographic order with the
// first mode most significant.
struct FockSpace {
  std::size_t signal_modes = 1;
  std::size_t idler_modes = 1;
  std::size_t cutoff = 12;  // max photons per mode

  std::size_t mode_count() const { return signal_modes + idler_modes; }
  std::size_t dimension() const;  // throws ConfigError above the 1e5 guard
  void validate() const;

  std::size_t index_of(const std::vector<std::size_t>& occ) const;
  std::vector<std::size_t> occupation_of(std::size_t index) const;
};

struct FockStateVector {
  FockSpace space;
  std::vector<cxd> amplitudes;

  double norm() const;
  // total population in basis states where any mode sits at the cutoff
  double cutoff_leakage() const;
};

FockStateVector vacuum_state(const FockSpace& space);
FockStateVector basis_state(const FockSpace& space,
                            const std::vector<std::size_t>& occ);

// Second-quantized generator: hopping of each band plus the pump-driven
// pair term sum_n gamma*A_n^2 a_s,n^dag a_i,n^dag + h.c. Stored as explicit
// matrix elements; dense realization available for small spaces. The dense
// matrix at the full guard size would not fit in memory, so evolution applies
// the element list directly.
struct FockGenerator {
  FockSpace space;
  std::vector<std::size_t> rows, cols;
  std::vector<cxd> vals;
  double inf_norm_bound = 0.0;

  void apply(const cxd* x, cxd* y) const;  // y = G x
  CMat to_dense() const;                   // guarded to dimension <= 4096
};

// H_s / H_i are the per-band site-space Hamiltonians (dimension = mode count
// of that band); pump_site_amplitudes holds the classical A_n for this
// z-slice, one entry per paired site.
FockGenerator build_generator(const RMat& h_signal, const RMat& h_idler,
                              const std::vector<cxd>& pump_site_amplitudes,
                              double gamma, const FockSpace& space);

// state <- exp(i G dz) state. Unitary up to series tolerance; throws
// NumericalError when the cutoff leakage passes 1e-6.
FockStateVector evolve_fock(const FockStateVector& state,
                            const FockGenerator& generator, double dz);

squeezer::MomentSet moments_fock(const FockStateVector& state);

// Joint photon-number distribution over one signal and one idler mode
// (0-based mode indices within each band), other modes traced out.
RMat joint_number_distribution(const FockStateVector& state,
                               std::size_t s_mode, std::size_t i_mode);

struct HeraldedStats {
  double g2_heralded = 0.0;
  double eta_h = 0.0;
  double herald_probability = 0.0;
};

// Click/no-click heralding on the idler: E_click = I - (1-pd_i)(1-eta_i)^n,
// with pd the per-pulse probability of an uncorrelated background click
// (zero in the oracle path). The heralded g2 is evaluated on the
// click-conditioned signal state; at pd_s = 0 linear signal loss cancels in
// the normalized ratio, otherwise the thinned-plus-background factorial
// moments are used. eta_h applies the signal arm to the coincidence
// numerator. Shared by the oracle and the Gaussian pipeline so both report
// statistics through one code path.
HeraldedStats heralded_from_joint_pnd(const RMat& pnd,
                                      const squeezer::DetectionModel& det,
                                      double pd_signal = 0.0,
                                      double pd_idler = 0.0);

HeraldedStats heralded_g2_fock(const FockStateVector& state, std::size_t s_mode,
                               std::size_t i_mode,
                               const squeezer::DetectionModel& det);

}  // namespace sshlight::fockcheck
