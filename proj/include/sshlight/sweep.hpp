#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sshlight/config.hpp"
#include "sshlight/propagation.hpp"
#include "sshlight/spectral.hpp"

namespace sshlight::cli {

// One (port, z) cell of the quantum study. The first seven fields are the
// frozen tabular schema; the rest travel in the JSON document only.
struct CorrelationReport {
  std::size_t port = 0;
  double z_mm = 0.0;
  double g2_cross = 0.0;    // measured estimator, background included
  double g2_heralded = 0.0;
  double eta_h = 0.0;
  double lambda_sq = 0.0;   // model-side squeezing parameter squared
  double mean_photon = 0.0;

  double n_signal = 0.0;
  double n_idler = 0.0;
  double pairing_abs = 0.0;  // |M| at the port pair
  bool non_classical = false;  // g2_cross > 2
  bool bell_capable = false;   // g2_cross > 6
  bool tmsv_like = false;
};

struct CountingEmulation {
  double integration_time_s = 1.0;
  std::size_t trials = 100;
  double repetition_rate_hz = 8.0e7;
};

// Poissonian counting statistics for one report cell. `undefined` marks cells
// where an arm saw no counts, per the zero-rate contract.
struct CountingStats {
  std::size_t port = 0;
  double z_mm = 0.0;
  std::size_t trials = 0;
  bool undefined = false;
  double g2_cross_mean = 0.0, g2_cross_std = 0.0;
  double g2_heralded_mean = 0.0, g2_heralded_std = 0.0;
  double lambda_sq_mean = 0.0, lambda_sq_std = 0.0;
};

CountingStats emulate_counts(const CorrelationReport& report,
                             const CountingEmulation& emulation,
                             const ExperimentConfig& config,
                             std::uint64_t cell_seed);

struct SweepResult {
  spectral::Spectrum pump_spectrum;
  std::vector<std::size_t> gap_modes;
  spectral::LdosProfile gap_ldos;  // at E = 0
  std::vector<propagation::IntensityMap> intensity_maps;  // one per port
  std::vector<CorrelationReport> reports;  // port-major, z ascending
  std::vector<CountingStats> counting;
  std::string resolved_config;
};

// Full study: spectral artifacts once, then per (port, z) pump propagation,
// Bogoliubov integration and correlation extraction. Ports run in parallel;
// results are merged in config order, deterministic under a fixed seed.
// Module errors are rethrown with the (port, z) cell attached.
SweepResult run_sweep(const ExperimentConfig& config);

}  // namespace sshlight::cli
