#include "sshlight/sweep.hpp"

#include <cmath>
#include <future>
#include <random>
#include <sstream>

#include "sshlight/errors.hpp"
#include "sshlight/squeezer.hpp"

namespace sshlight::cli {

namespace {

// Deterministic count sampler: explicit Box-Muller on top of mt19937_64 so
// sampled sequences depend only on the seed, not on library internals.
class CountSampler {
 public:
  explicit CountSampler(std::uint64_t seed) : rng_(seed) {}

  double uniform_open() {
    // (0, 1), never exactly 0
    return (static_cast<double>(rng_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform_open(), u2 = uniform_open();
    const double mag = std::sqrt(-2.0 * std::log(u1));
    const double ang = 2.0 * std::numbers::pi * u2;
    spare_ = mag * std::sin(ang);
    has_spare_ = true;
    return mag * std::cos(ang);
  }

  std::uint64_t poisson(double mean) {
    if (mean <= 0.0) return 0;
    if (mean < 64.0) {
      // Knuth product-of-uniforms
      const double limit = std::exp(-mean);
      std::uint64_t k = 0;
      double prod = uniform_open();
      while (prod > limit) {
        ++k;
        prod *= uniform_open();
      }
      return k;
    }
    const double draw = mean + std::sqrt(mean) * normal();
    return draw <= 0.0 ? 0 : static_cast<std::uint64_t>(std::llround(draw));
  }

 private:
  std::mt19937_64 rng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

struct Accumulator {
  double sum = 0.0, sum_sq = 0.0;
  std::size_t n = 0;
  void add(double x) {
    sum += x;
    sum_sq += x * x;
    ++n;
  }
  double mean() const { return n ? sum / static_cast<double>(n) : 0.0; }
  double stddev() const {
    if (n < 2) return 0.0;
    const double m = mean();
    const double var = sum_sq / static_cast<double>(n) - m * m;
    return var > 0.0 ? std::sqrt(var) : 0.0;
  }
};

}  // namespace

CountingStats emulate_counts(const CorrelationReport& report,
                             const CountingEmulation& emulation,
                             const ExperimentConfig& config,
                             std::uint64_t cell_seed) {
  if (emulation.trials < 1)
    throw ConfigError("emulate_counts: trials must be >= 1");

  CountingStats stats;
  stats.port = report.port;
  stats.z_mm = report.z_mm;
  stats.trials = emulation.trials;

  const auto det = config.detection_model();
  const double pd = config.background_per_pulse();
  const double p_s = det.eta_signal * report.n_signal + pd;
  const double p_i = det.eta_idler * report.n_idler + pd;
  // pairing coincidences plus the accidental product term
  const double p_c = det.eta_signal * det.eta_idler * report.pairing_abs *
                         report.pairing_abs +
                     p_s * p_i;
  // triples scaled so the estimator 4 N3 Ni / Nc^2 is centered on g2_heralded
  const double p_3 = report.g2_heralded * p_c * p_c / (4.0 * p_i);
  const double pulses =
      emulation.repetition_rate_hz * emulation.integration_time_s;

  if (!(p_s > 0.0) || !(p_i > 0.0)) {
    stats.undefined = true;  // zero-rate arm: g2 undefined, flagged not thrown
    return stats;
  }

  CountSampler sampler(cell_seed);
  Accumulator g2_acc, g2h_acc, lam_acc;
  for (std::size_t t = 0; t < emulation.trials; ++t) {
    const double ns = static_cast<double>(sampler.poisson(p_s * pulses));
    const double ni = static_cast<double>(sampler.poisson(p_i * pulses));
    const double nc = static_cast<double>(sampler.poisson(p_c * pulses));
    const double n3 = static_cast<double>(sampler.poisson(p_3 * pulses));
    if (ns == 0.0 || ni == 0.0 || nc == 0.0) {
      stats.undefined = true;
      continue;
    }
    const double g2_hat = nc * pulses / (ns * ni);
    const double g2h_hat = 4.0 * n3 * ni / (nc * nc);
    const double eta_hat = std::min(nc / ni, 1.0);
    g2_acc.add(g2_hat);
    g2h_acc.add(g2h_hat);
    if (eta_hat > 0.0 && g2h_hat >= 0.0)
      lam_acc.add(squeezer::squeeze_param_eq4(g2h_hat, eta_hat));
  }

  stats.g2_cross_mean = g2_acc.mean();
  stats.g2_cross_std = g2_acc.stddev();
  stats.g2_heralded_mean = g2h_acc.mean();
  stats.g2_heralded_std = g2h_acc.stddev();
  stats.lambda_sq_mean = lam_acc.mean();
  stats.lambda_sq_std = lam_acc.stddev();
  return stats;
}

namespace {

std::vector<CorrelationReport> run_port(const ExperimentConfig& config,
                                        const spectral::Spectrum& pump_spectrum,
                                        const lattice::Hamiltonian& h_signal,
                                        const lattice::Hamiltonian& h_idler,
                                        std::size_t port) {
  const auto det = config.detection_model();
  const double pd = config.background_per_pulse();
  const auto grid = propagation::uniform_z_grid(config.geometry.length_mm,
                                                config.squeezer.z_step_mm);
  auto pump = squeezer::pump_profile(pump_spectrum, port,
                                     config.squeezer.pump_power_w, grid);
  auto maps = squeezer::propagate_bogoliubov_checkpoints(
      h_signal, h_idler, pump, config.squeezer.gamma_per_mm_w,
      config.sweep.z_mm);

  std::vector<CorrelationReport> reports;
  reports.reserve(maps.size());
  for (const auto& map : maps) {
    try {
    auto moments = squeezer::moments_from_bogoliubov(map);

    CorrelationReport r;
    r.port = port;
    r.z_mm = map.z_final_mm;
    r.n_signal = moments.n_signal(port - 1, port - 1).real();
    r.n_idler = moments.n_idler(port - 1, port - 1).real();
    r.pairing_abs = std::abs(moments.m_cross(port - 1, port - 1));
    r.mean_photon = 0.5 * (r.n_signal + r.n_idler);

    r.g2_cross = squeezer::g2_cross_measured(moments, port, port, det, pd, pd);
    r.non_classical = r.g2_cross > squeezer::kNonClassicalG2;
    r.bell_capable = r.g2_cross > squeezer::kBellCapableG2;

    auto heralded = squeezer::heralded_metrics(moments, port, port, det,
                                               config.squeezer.fock_cutoff,
                                               pd, pd);
    r.g2_heralded = heralded.g2_heralded;
    r.eta_h = heralded.eta_h;

    auto eff = squeezer::effective_lambda(moments, port, port);
    r.lambda_sq = eff.lambda * eff.lambda;
    r.tmsv_like = eff.tmsv_like;

    reports.push_back(r);
    } catch (const std::exception& e) {
      std::ostringstream msg;
      msg << "cell (port " << port << ", z " << map.z_final_mm
          << " mm): " << e.what();
      throw NumericalError(msg.str());
    }
  }
  return reports;
}

}  // namespace

SweepResult run_sweep(const ExperimentConfig& config) {
  config.validate();

  SweepResult result;
  result.resolved_config = resolved_config_json(config);

  const auto h_pump = config.hamiltonian(lattice::Band::pump);
  const auto h_signal = config.hamiltonian(lattice::Band::signal);
  const auto h_idler = config.hamiltonian(lattice::Band::idler);
  const double j_strong = lattice::coupling_from_spacing(
      config.geometry.short_spacing_um, config.coupling, lattice::Band::pump);

  result.pump_spectrum = spectral::eigendecompose(h_pump);
  result.gap_modes = spectral::find_gap_modes(result.pump_spectrum, 0.05,
                                              j_strong);
  result.gap_ldos = spectral::ldos(result.pump_spectrum, 0.0,
                                   0.02 * j_strong);

  const auto grid = propagation::uniform_z_grid(config.geometry.length_mm,
                                                config.squeezer.z_step_mm);

  // per-port cells are independent; run them concurrently and merge in
  // config order so outputs stay deterministic
  std::vector<std::future<std::vector<CorrelationReport>>> futures;
  for (std::size_t port : config.sweep.ports) {
    futures.push_back(std::async(std::launch::async, [&, port] {
      try {
        return run_port(config, result.pump_spectrum, h_signal, h_idler, port);
      } catch (const std::exception& e) {
        std::ostringstream msg;
        msg << "sweep cell (port " << port << "): " << e.what();
        throw NumericalError(msg.str());
      }
    }));
  }

  for (std::size_t i = 0; i < config.sweep.ports.size(); ++i) {
    result.intensity_maps.push_back(
        propagation::evolve(result.pump_spectrum, config.sweep.ports[i], grid));
    auto port_reports = futures[i].get();
    result.reports.insert(result.reports.end(), port_reports.begin(),
                          port_reports.end());
  }

  CountingEmulation emulation{config.counting.integration_time_s,
                              config.counting.trials,
                              config.counting.repetition_rate_hz};
  for (std::size_t i = 0; i < result.reports.size(); ++i) {
    const std::uint64_t cell_seed =
        config.seed ^ (0x9e3779b97f4a7c15ULL * (i + 1));
    result.counting.push_back(
        emulate_counts(result.reports[i], emulation, config, cell_seed));
  }
  return result;
}

}  // namespace sshlight::cli
