#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sshlight/lattice.hpp"
#include "sshlight/moments.hpp"
#include "sshlight/squeezer.hpp"

namespace sshlight::cli {

// Full experiment description. Field names mirror the JSON document
// one-to-one; every default here is a calibration choice, not a measured
// value. Unknown keys in a config file are errors so a typo cannot silently
// fall back to a default.
struct ExperimentConfig {
  struct Geometry {
    std::size_t site_count = 20;
    double short_spacing_um = 7.0;
    double long_spacing_um = 9.0;
    std::optional<std::size_t> defect_site = 10;
    double length_mm = 35.0;
    // explicit spacings override the dimer shorthand when non-empty
    std::vector<double> spacings_um;
  } geometry;

  lattice::CouplingModel coupling;

  struct Squeezer {
    double gamma_per_mm_w = 0.005;
    double pump_power_w = 1.0;
    std::size_t fock_cutoff = 12;
    double z_step_mm = 0.1;
  } squeezer;

  struct Detection {
    double eta_signal = 0.6;
    double eta_idler = 0.6;
    double dark_rate_hz = 8.0e5;  // uncorrelated background per arm
  } detection;

  struct PhaseMatching {
    double pump_wavelength_nm = 780.0;
    double delta_n = 5e-5;
    std::array<double, 3> sellmeier_b{0.6961663, 0.4079426, 0.8974794};
    std::array<double, 3> sellmeier_c_um2{
        0.0684043 * 0.0684043, 0.1162414 * 0.1162414, 9.896161 * 9.896161};
    double search_band_fraction = 0.4;
  } phase_matching;

  struct Sweep {
    std::vector<double> z_mm{5, 10, 15, 20, 25, 30, 35};
    std::vector<std::size_t> ports{1, 10, 20};
  } sweep;

  struct Counting {
    double integration_time_s = 1.0;
    std::size_t trials = 100;
    double repetition_rate_hz = 8.0e7;
  } counting;

  struct Output {
    std::string directory = "out";
    std::vector<std::string> formats{"csv", "json"};
  } output;

  std::uint64_t seed = 12345;

  void validate() const;  // throws ConfigError

  lattice::WaveguideGeometry waveguide_geometry() const;
  lattice::Hamiltonian hamiltonian(lattice::Band band) const;
  squeezer::DetectionModel detection_model() const;
  squeezer::PhaseMatchingProblem phase_matching_problem() const;
  // per-pulse background click probability, dark rate over rep rate
  double background_per_pulse() const;
};

ExperimentConfig default_config();
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);
std::string resolved_config_json(const ExperimentConfig& config);

}  // namespace sshlight::cli
