#include "sshlight/propagation.hpp"

#include <cmath>
#include <complex>

#include "sshlight/errors.hpp"

namespace sshlight::propagation {

namespace {

void check_site(const spectral::Spectrum& s, std::size_t input_site) {
  if (input_site < 1 || input_site > s.source_dimension)
    throw ConfigError("propagation: input site out of range");
}

// eigenbasis overlaps <psi^m | input>
std::vector<cxd> mode_overlaps(const spectral::Spectrum& s,
                               const std::vector<cxd>& input) {
  const std::size_t n = s.source_dimension;
  if (input.size() != n)
    throw ConfigError("propagation: input state dimension mismatch");
  if (std::abs(kern::active().sumabs2_cd(n, input.data()) - 1.0) > 1e-9)
    throw ConfigError("propagation: input state must carry unit power");
  std::vector<cxd> overlaps(n);
  for (std::size_t m = 0; m < n; ++m) {
    cxd c{0.0, 0.0};
    const double* row = s.eigenvectors.row(m);
    for (std::size_t i = 0; i < n; ++i) c += row[i] * input[i];
    overlaps[m] = c;
  }
  return overlaps;
}

// amplitudes at one z: psi_n = sum_m exp(i E_m z) <psi^m|input> V[m][n]
void field_into(const spectral::Spectrum& s, const std::vector<cxd>& overlaps,
                double z, cxd* out) {
  const std::size_t n = s.source_dimension;
  for (std::size_t i = 0; i < n; ++i) out[i] = cxd{0.0, 0.0};
  for (std::size_t m = 0; m < n; ++m) {
    if (overlaps[m] == cxd{0.0, 0.0}) continue;
    const cxd coeff = overlaps[m] * std::polar(1.0, s.eigenvalues[m] * z);
    const double* row = s.eigenvectors.row(m);
    for (std::size_t i = 0; i < n; ++i) out[i] += coeff * row[i];
  }
}

std::vector<cxd> site_excitation(std::size_t n, std::size_t site) {
  std::vector<cxd> input(n, cxd{0.0, 0.0});
  input[site - 1] = cxd{1.0, 0.0};
  return input;
}

void check_grid(const std::vector<double>& z_grid_mm) {
  if (z_grid_mm.empty()) throw ConfigError("evolve: empty z grid");
  for (std::size_t r = 0; r < z_grid_mm.size(); ++r) {
    if (!(z_grid_mm[r] >= 0.0)) throw ConfigError("evolve: negative z");
    if (r > 0 && !(z_grid_mm[r] > z_grid_mm[r - 1]))
      throw ConfigError("evolve: z grid must ascend");
  }
}

}  // namespace

IntensityMap evolve_state(const spectral::Spectrum& s,
                          const std::vector<cxd>& input_state,
                          const std::vector<double>& z_grid_mm) {
  check_grid(z_grid_mm);
  const auto overlaps = mode_overlaps(s, input_state);

  const std::size_t n = s.source_dimension;
  IntensityMap map;
  map.z_grid_mm = z_grid_mm;
  map.intensities = RMat(z_grid_mm.size(), n);
  std::vector<cxd> psi(n);
  for (std::size_t r = 0; r < z_grid_mm.size(); ++r) {
    field_into(s, overlaps, z_grid_mm[r], psi.data());
    kern::active().abs2_cd(n, psi.data(), map.intensities.row(r));
  }
  return map;
}

IntensityMap evolve(const spectral::Spectrum& s, std::size_t input_site,
                    const std::vector<double>& z_grid_mm) {
  check_site(s, input_site);
  auto map = evolve_state(s, site_excitation(s.source_dimension, input_site),
                          z_grid_mm);
  map.input_site = input_site;
  return map;
}

IntensityMap evolve(const lattice::Hamiltonian& h, std::size_t input_site,
                    const std::vector<double>& z_grid_mm) {
  return evolve(spectral::eigendecompose(h), input_site, z_grid_mm);
}

FieldState field_at_state(const spectral::Spectrum& s,
                          const std::vector<cxd>& input_state, double z_mm) {
  if (!(z_mm >= 0.0)) throw ConfigError("field_at: negative z rejected");
  const auto overlaps = mode_overlaps(s, input_state);
  FieldState f;
  f.z_mm = z_mm;
  f.amplitudes.resize(s.source_dimension);
  field_into(s, overlaps, z_mm, f.amplitudes.data());
  return f;
}

FieldState field_at(const spectral::Spectrum& s, std::size_t input_site,
                    double z_mm) {
  check_site(s, input_site);
  return field_at_state(s, site_excitation(s.source_dimension, input_site),
                        z_mm);
}

FieldState field_at(const lattice::Hamiltonian& h, std::size_t input_site,
                    double z_mm) {
  return field_at(spectral::eigendecompose(h), input_site, z_mm);
}

LocalizationMetrics localization_metrics(const IntensityMap& map,
                                         std::size_t input_site) {
  if (map.intensities.empty()) throw ConfigError("localization_metrics: empty map");
  const std::size_t n = map.intensities.cols();
  if (input_site < 1 || input_site > n)
    throw ConfigError("localization_metrics: input site out of range");
  const double* last = map.intensities.row(map.intensities.rows() - 1);
  LocalizationMetrics m;
  m.return_probability = last[input_site - 1];
  m.ipr = kern::active().dot_d(n, last, last);
  m.spread = 1.0 / m.ipr;
  return m;
}

std::vector<double> uniform_z_grid(double z_max_mm, double step_mm) {
  if (!(z_max_mm > 0.0) || !(step_mm > 0.0))
    throw ConfigError("uniform_z_grid: need positive extent and step");
  const std::size_t count =
      static_cast<std::size_t>(std::llround(z_max_mm / step_mm));
  std::vector<double> grid(count + 1);
  for (std::size_t i = 0; i <= count; ++i)
    grid[i] = z_max_mm * static_cast<double>(i) / static_cast<double>(count);
  return grid;
}

}  // namespace sshlight::propagation
