#include "sshlight/lattice.hpp"

#include <cmath>
#include <sstream>

#include "sshlight/errors.hpp"

namespace sshlight::lattice {

Band band_from_name(const std::string& name) {
  if (name == "pump") return Band::pump;
  if (name == "signal") return Band::signal;
  if (name == "idler") return Band::idler;
  throw ConfigError("unknown wavelength band '" + name +
                    "' (expected pump, signal or idler)");
}

const char* band_name(Band band) {
  switch (band) {
    case Band::pump: return "pump";
    case Band::signal: return "signal";
    case Band::idler: return "idler";
  }
  return "?";
}

void WaveguideGeometry::validate() const {
  if (site_count < 1) throw ConfigError("geometry: site_count must be >= 1");
  if (spacings_um.size() + 1 != site_count)
    throw ConfigError("geometry: need site_count-1 spacings");
  for (double l : spacings_um)
    if (!(l > 0.0)) throw ConfigError("geometry: spacings must be positive");
  if (!(length_mm > 0.0)) throw ConfigError("geometry: length_mm must be > 0");
}

void CouplingModel::validate() const {
  if (!(j_ref_per_mm > 0.0)) throw ConfigError("coupling: J_ref must be > 0");
  if (!(kappa_per_um > 0.0)) throw ConfigError("coupling: kappa must be > 0");
  if (!(l_ref_um > 0.0)) throw ConfigError("coupling: l_ref must be > 0");
  for (const auto& [band, scale] : band_scale)
    if (!(scale > 0.0))
      throw ConfigError(std::string("coupling: scale for band ") +
                        band_name(band) + " must be > 0");
}

double coupling_from_spacing(double spacing_um, const CouplingModel& model,
                             Band band) {
  if (!(spacing_um > 0.0))
    throw ConfigError("coupling_from_spacing: spacing must be > 0");
  auto it = model.band_scale.find(band);
  if (it == model.band_scale.end())
    throw ConfigError(std::string("coupling_from_spacing: no scale for band ") +
                      band_name(band));
  return it->second * model.j_ref_per_mm *
         std::exp(-model.kappa_per_um * (spacing_um - model.l_ref_um));
}

void LatticeSpec::validate() const {
  if (site_count < 2) throw ConfigError("lattice: need at least 2 sites");
  if (bonds_per_mm.size() + 1 != site_count)
    throw ConfigError("lattice: need site_count-1 bonds");
  for (double j : bonds_per_mm)
    if (!(j > 0.0)) throw ConfigError("lattice: bonds must be positive");
  if (defect_site && (*defect_site <= 1 || *defect_site >= site_count))
    throw ConfigError("lattice: defect_site must lie strictly inside the chain");
}

namespace {

// bond k (0-based) is weak under a weak-first alternation, with the weak
// value repeated once at the defect
bool bond_is_weak(std::size_t k, std::optional<std::size_t> defect_site) {
  if (!defect_site || k < *defect_site - 1) return k % 2 == 0;
  return (k - (*defect_site - 1)) % 2 == 0;
}

}  // namespace

LatticeSpec build_dimer_chain(std::size_t n_sites, double j_weak,
                              double j_strong,
                              std::optional<std::size_t> defect_site) {
  if (n_sites < 2) throw ConfigError("build_dimer_chain: n_sites must be >= 2");
  if (!(j_weak > 0.0))
    throw ConfigError("build_dimer_chain: J_weak must be > 0");
  if (!(j_weak < j_strong))
    throw ConfigError(
        "build_dimer_chain: degenerate dimerization (need J_weak < J_strong)");
  if (defect_site) {
    if (*defect_site <= 1 || *defect_site >= n_sites)
      throw ConfigError("build_dimer_chain: defect_site out of range");
    if (*defect_site % 2 != 0)
      throw ConfigError(
          "build_dimer_chain: defect_site must be even to realize a repeated "
          "weak bond under a weak-first pattern");
  }

  LatticeSpec spec;
  spec.site_count = n_sites;
  spec.defect_site = defect_site;
  spec.bonds_per_mm.resize(n_sites - 1);
  spec.pattern.resize(n_sites - 1);
  for (std::size_t k = 0; k + 1 < n_sites; ++k) {
    const bool weak = bond_is_weak(k, defect_site);
    spec.bonds_per_mm[k] = weak ? j_weak : j_strong;
    spec.pattern[k] = weak ? 'w' : 's';
  }
  return spec;
}

WaveguideGeometry dimer_geometry(std::size_t n_sites, double short_um,
                                 double long_um,
                                 std::optional<std::size_t> defect_site,
                                 double length_mm, double wavelength_nm) {
  if (!(short_um > 0.0) || !(long_um > short_um))
    throw ConfigError("dimer_geometry: need 0 < short spacing < long spacing");
  WaveguideGeometry g;
  g.site_count = n_sites;
  g.length_mm = length_mm;
  g.wavelength_nm = wavelength_nm;
  g.spacings_um.resize(n_sites - 1);
  // weak coupling across the long gap, strong across the short one
  for (std::size_t k = 0; k + 1 < n_sites; ++k)
    g.spacings_um[k] = bond_is_weak(k, defect_site) ? long_um : short_um;
  g.validate();
  return g;
}

LatticeSpec spec_from_geometry(const WaveguideGeometry& geom,
                               const CouplingModel& model, Band band) {
  geom.validate();
  model.validate();
  if (geom.site_count < 2)
    throw ConfigError("spec_from_geometry: need at least 2 sites");

  LatticeSpec spec;
  spec.site_count = geom.site_count;
  spec.bonds_per_mm.resize(geom.spacings_um.size());
  for (std::size_t k = 0; k < geom.spacings_um.size(); ++k)
    spec.bonds_per_mm[k] = coupling_from_spacing(geom.spacings_um[k], model, band);

  // classify the bonds and locate a repeated-weak defect, if any
  double lo = spec.bonds_per_mm[0], hi = spec.bonds_per_mm[0];
  for (double j : spec.bonds_per_mm) {
    lo = std::min(lo, j);
    hi = std::max(hi, j);
  }
  spec.pattern.resize(spec.bonds_per_mm.size());
  if (hi - lo <= 1e-12 * hi) {
    std::fill(spec.pattern.begin(), spec.pattern.end(), 'u');
  } else {
    const double mid = 0.5 * (lo + hi);
    for (std::size_t k = 0; k < spec.bonds_per_mm.size(); ++k)
      spec.pattern[k] = spec.bonds_per_mm[k] < mid ? 'w' : 's';
    for (std::size_t k = 0; k + 1 < spec.pattern.size(); ++k)
      if (spec.pattern[k] == 'w' && spec.pattern[k + 1] == 'w') {
        spec.defect_site = k + 2;  // second weak bond starts at site k+2
        break;
      }
  }
  spec.validate();
  return spec;
}

Hamiltonian assemble_hamiltonian(const LatticeSpec& spec) {
  spec.validate();
  Hamiltonian h;
  h.dimension = spec.site_count;
  h.matrix = RMat(spec.site_count, spec.site_count);
  for (std::size_t k = 0; k + 1 < spec.site_count; ++k) {
    h.matrix(k, k + 1) = spec.bonds_per_mm[k];
    h.matrix(k + 1, k) = spec.bonds_per_mm[k];
  }
  return h;
}

}  // namespace sshlight::lattice
