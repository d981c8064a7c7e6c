#pragma once

#include "sshlight/errors.hpp"
#include "sshlight/linalg.hpp"

namespace sshlight::squeezer {

// Gaussian second moments of the signal/idler bands over vacuum input.
// Entry conventions:
//   n_signal(m, n) = <a_s,n^dag a_s,m>   (so n_signal = V V^dag, Hermitian PSD)
//   n_idler(m, n)  = <a_i,n^dag a_i,m>
//   m_cross(m, n)  = <a_s,m a_i,n>
// Diagonals of the number matrices are the per-site mean photon numbers.
struct MomentSet {
  CMat n_signal;
  CMat n_idler;
  CMat m_cross;
};

// Per-arm collection/detection efficiencies. Dark counts default to zero and
// stay zero in the oracle path.
struct DetectionModel {
  double eta_signal = 1.0;
  double eta_idler = 1.0;
  double dark_rate_hz = 0.0;

  // Zero is allowed as the algebraic boundary of the loss map; paths that
  // divide by an efficiency (heralding, counting) reject it on their own.
  void validate() const {
    if (!(eta_signal >= 0.0 && eta_signal <= 1.0) ||
        !(eta_idler >= 0.0 && eta_idler <= 1.0))
      throw ConfigError("detection: efficiencies must lie in [0, 1]");
    if (dark_rate_hz < 0.0)
      throw ConfigError("detection: dark rate must be >= 0");
  }
};

}  // namespace sshlight::squeezer
