#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sshlight/linalg.hpp"

namespace sshlight::lattice {

// Wavelength band of a propagating field. Couplings pick up a per-band
// multiplicative factor to model the wavelength dependence of the evanescent
// overlap.
enum class Band { pump, signal, idler };

Band band_from_name(const std::string& name);  // throws ConfigError
const char* band_name(Band band);

// Physical chain geometry. Sites are numbered 1..site_count; gap g sits
// between sites g and g+1.
struct WaveguideGeometry {
  std::size_t site_count = 0;
  std::vector<double> spacings_um;  // site_count - 1 entries, all > 0
  double length_mm = 0.0;
  double wavelength_nm = 0.0;

  void validate() const;  // throws ConfigError on any broken invariant
};

// Exponential evanescent-coupling model J(l) = scale(band) * J_ref *
// exp(-kappa * (l - l_ref)). The defaults are calibration seeds, not
// measured values; the acceptance suite pins their viability.
struct CouplingModel {
  double j_ref_per_mm = 0.25;
  double kappa_per_um = 0.7;
  double l_ref_um = 7.0;
  std::map<Band, double> band_scale = {
      {Band::pump, 1.0}, {Band::signal, 1.2}, {Band::idler, 0.85}};

  void validate() const;
};

double coupling_from_spacing(double spacing_um, const CouplingModel& model,
                             Band band);

// Abstract chain: bond k (0-based) couples sites k+1 and k+2 (1-based).
struct LatticeSpec {
  std::size_t site_count = 0;
  std::vector<double> bonds_per_mm;
  std::optional<std::size_t> defect_site;  // 1-based site where the pattern flips
  std::string pattern;                     // one char per bond: 'w','s' or 'u'

  void validate() const;
};

struct Hamiltonian {
  std::size_t dimension = 0;
  RMat matrix;  // real symmetric tridiagonal, zero diagonal, units 1/mm
};

// Dimerized chain with the weak bond at the left edge, so site 1 terminates a
// nontrivial dimerization. With a defect the weak bond repeats once (bonds
// defect_site-1 and defect_site, 1-based), flipping the pattern so the right
// edge ends on a strong bond. The repeated-weak construction requires an even
// defect_site; odd values cannot produce a single weak-weak pair under a
// weak-first pattern and are rejected.
LatticeSpec build_dimer_chain(std::size_t n_sites, double j_weak,
                              double j_strong,
                              std::optional<std::size_t> defect_site);

// Same bond pattern expressed as spacings: weak bonds get the long gap,
// strong bonds the short gap.
WaveguideGeometry dimer_geometry(std::size_t n_sites, double short_um,
                                 double long_um,
                                 std::optional<std::size_t> defect_site,
                                 double length_mm, double wavelength_nm);

LatticeSpec spec_from_geometry(const WaveguideGeometry& geom,
                               const CouplingModel& model, Band band);

Hamiltonian assemble_hamiltonian(const LatticeSpec& spec);

}  // namespace sshlight::lattice
