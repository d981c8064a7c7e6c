#pragma once

#include <cstddef>
#include <vector>

#include "sshlight/lattice.hpp"
#include "sshlight/linalg.hpp"

namespace sshlight::spectral {

// Full eigensystem of a chain Hamiltonian. eigenvalues ascend; mode m lives
// in row m of eigenvectors, sign-fixed so the first significant component is
// positive (reproducible output across runs and platforms).
struct Spectrum {
  std::vector<double> eigenvalues;  // 1/mm
  RMat eigenvectors;                // row m <-> eigenvalues[m]
  std::size_t source_dimension = 0;
};

Spectrum eigendecompose(const lattice::Hamiltonian& h);

// Indices m with |E_m| < zero_window * j_strong, ascending. zero_window must
// lie in (0,1). A gapless chain (no dimerization) can park bulk modes near
// zero energy; callers are expected to have checked the gap before reading
// topological meaning into the result.
std::vector<std::size_t> find_gap_modes(const Spectrum& spectrum,
                                        double zero_window, double j_strong);

struct LdosProfile {
  double energy = 0.0;
  double broadening = 0.0;
  std::vector<double> values;  // per site, >= 0
};

// Local density of states with the spectral delta replaced by a unit-area
// Gaussian of width `broadening`; per-site weight |psi_n^m|^2.
LdosProfile ldos(const Spectrum& spectrum, double energy, double broadening);

struct ZakResult {
  double phase = 0.0;  // radians in [0, 2*pi)
  std::size_t k_samples = 0;
  bool converged = false;
};

// Zak phase of the lower Bloch band of the two-site unit cell with intracell
// coupling j_weak and intercell coupling j_strong, from the Wilson-loop
// product of link overlaps over a uniform Brillouin-zone grid.
ZakResult zak_phase(double j_weak, double j_strong, std::size_t k_samples);

// distance between two angles on the circle, in [0, pi]
double circular_distance(double a, double b);

}  // namespace sshlight::spectral
