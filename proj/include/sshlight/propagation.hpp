#pragma once

#include <cstddef>
#include <vector>

#include "sshlight/lattice.hpp"
#include "sshlight/linalg.hpp"
#include "sshlight/spectral.hpp"

namespace sshlight::propagation {

// Classical field over the chain at one distance. Sites are 1-based in every
// public signature of this module, matching the port labelling of the chip.
struct FieldState {
  std::vector<cxd> amplitudes;  // unit total power
  double z_mm = 0.0;
};

struct IntensityMap {
  std::vector<double> z_grid_mm;
  RMat intensities;  // row r = |psi(z_grid_mm[r])|^2 per site, rows sum to 1
  std::size_t input_site = 0;
};

struct LocalizationMetrics {
  double return_probability = 0.0;  // intensity at the injection site, final z
  double ipr = 0.0;                 // sum of squared intensities, final z
  double spread = 0.0;              // participation ratio 1/ipr
};

// psi(z) = exp(iHz) e_input evaluated in the eigenbasis; exact up to
// eigensolver precision, no step-size parameter involved.
IntensityMap evolve(const spectral::Spectrum& spectrum, std::size_t input_site,
                    const std::vector<double>& z_grid_mm);
IntensityMap evolve(const lattice::Hamiltonian& h, std::size_t input_site,
                    const std::vector<double>& z_grid_mm);

// arbitrary (unit-power) superposition inputs; single-site injection is the
// default elsewhere but not a restriction of the evolution itself
IntensityMap evolve_state(const spectral::Spectrum& spectrum,
                          const std::vector<cxd>& input_state,
                          const std::vector<double>& z_grid_mm);
FieldState field_at_state(const spectral::Spectrum& spectrum,
                          const std::vector<cxd>& input_state, double z_mm);

FieldState field_at(const spectral::Spectrum& spectrum, std::size_t input_site,
                    double z_mm);
FieldState field_at(const lattice::Hamiltonian& h, std::size_t input_site,
                    double z_mm);

LocalizationMetrics localization_metrics(const IntensityMap& map,
                                         std::size_t input_site);

std::vector<double> uniform_z_grid(double z_max_mm, double step_mm);

}  // namespace sshlight::propagation
