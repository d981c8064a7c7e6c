#pragma once

// Shared fixtures: the 20-site chip geometry under the default calibration.

#include "sshlight/lattice.hpp"

namespace fixtures {

inline double j_weak(sshlight::lattice::Band band = sshlight::lattice::Band::pump) {
  sshlight::lattice::CouplingModel model;
  return sshlight::lattice::coupling_from_spacing(9.0, model, band);
}

inline double j_strong(sshlight::lattice::Band band = sshlight::lattice::Band::pump) {
  sshlight::lattice::CouplingModel model;
  return sshlight::lattice::coupling_from_spacing(7.0, model, band);
}

inline sshlight::lattice::Hamiltonian chip_lattice(
    sshlight::lattice::Band band = sshlight::lattice::Band::pump) {
  using namespace sshlight::lattice;
  CouplingModel model;
  auto geom = dimer_geometry(20, 7.0, 9.0, 10, 35.0, 780.0);
  return assemble_hamiltonian(spec_from_geometry(geom, model, band));
}

}  // namespace fixtures
