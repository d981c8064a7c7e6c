// sshlight: dimerized waveguide lattices, pump transport, SFWM squeezing
// metrics and the small-scale Fock oracle, driven by one JSON config.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sshlight/errors.hpp"
#include "sshlight/export.hpp"
#include "sshlight/fockcheck.hpp"
#include "sshlight/squeezer.hpp"
#include "sshlight/sweep.hpp"

namespace fs = std::filesystem;
using namespace sshlight;
using cli::ExperimentConfig;

namespace {

struct GlobalArgs {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::string formats;
  std::vector<std::size_t> ports;
  std::vector<double> z_mm;
};

ExperimentConfig resolve_config(const GlobalArgs& args) {
  ExperimentConfig config =
      args.config_path.empty() ? cli::default_config()
                               : cli::load_config(args.config_path);
  if (!args.out_dir.empty()) config.output.directory = args.out_dir;
  if (args.seed) config.seed = *args.seed;
  if (!args.formats.empty()) {
    config.output.formats.clear();
    std::string token;
    for (char ch : args.formats + ",") {
      if (ch == ',') {
        if (!token.empty()) config.output.formats.push_back(token);
        token.clear();
      } else {
        token += ch;
      }
    }
  }
  if (!args.ports.empty()) config.sweep.ports = args.ports;
  if (!args.z_mm.empty()) config.sweep.z_mm = args.z_mm;
  config.validate();
  return config;
}

bool wants(const ExperimentConfig& config, const std::string& fmt) {
  return std::find(config.output.formats.begin(), config.output.formats.end(),
                   fmt) != config.output.formats.end();
}

fs::path prepare_out_dir(const ExperimentConfig& config) {
  fs::path dir(config.output.directory);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory: " + dir.string());
  cli::write_text_file((dir / "manifest.json").string(),
                       cli::resolved_config_json(config) + "\n");
  return dir;
}

int run_spectrum(const ExperimentConfig& config) {
  const auto dir = prepare_out_dir(config);
  const double j_strong = lattice::coupling_from_spacing(
      config.geometry.short_spacing_um, config.coupling, lattice::Band::pump);

  for (auto band : {lattice::Band::pump, lattice::Band::signal,
                    lattice::Band::idler}) {
    auto spectrum = spectral::eigendecompose(config.hamiltonian(band));
    auto gap = spectral::find_gap_modes(spectrum, 0.05, j_strong);
    auto profile = spectral::ldos(spectrum, 0.0, 0.02 * j_strong);
    const std::string tag = lattice::band_name(band);
    if (wants(config, "csv")) {
      cli::export_spectrum_csv((dir / ("spectrum_" + tag + ".csv")).string(),
                               spectrum);
      cli::export_ldos_csv((dir / ("ldos_" + tag + ".csv")).string(), profile);
    }
    if (wants(config, "svg")) {
      cli::svg_band_diagram((dir / ("band_diagram_" + tag + ".svg")).string(),
                            spectrum, gap);
      cli::svg_ldos((dir / ("ldos_" + tag + ".svg")).string(), profile);
    }
    if (band == lattice::Band::pump)
      std::printf("pump band: %zu modes, %zu in-gap\n",
                  spectrum.eigenvalues.size(), gap.size());
  }
  std::printf("spectrum artifacts written to %s\n", dir.string().c_str());
  return 0;
}

int run_propagate(const ExperimentConfig& config) {
  const auto dir = prepare_out_dir(config);
  auto spectrum = spectral::eigendecompose(config.hamiltonian(lattice::Band::pump));
  auto grid = propagation::uniform_z_grid(config.geometry.length_mm,
                                          config.squeezer.z_step_mm);
  for (std::size_t port : config.sweep.ports) {
    auto map = propagation::evolve(spectrum, port, grid);
    auto metrics = propagation::localization_metrics(map, port);
    if (wants(config, "csv"))
      cli::export_intensity_csv(
          (dir / ("intensity_port" + std::to_string(port) + ".csv")).string(),
          map);
    if (wants(config, "svg"))
      cli::svg_heatmap(
          (dir / ("intensity_port" + std::to_string(port) + ".svg")).string(),
          map);
    std::printf(
        "port %2zu: return probability %.4f, spread %.3f sites at z=%g mm\n",
        port, metrics.return_probability, metrics.spread,
        config.geometry.length_mm);
  }
  return 0;
}

int run_phase_match(const ExperimentConfig& config) {
  const auto dir = prepare_out_dir(config);
  auto sol = squeezer::solve_phase_matching(config.phase_matching_problem());
  const double twopi_c = 2.0 * std::numbers::pi * squeezer::kSpeedOfLight;
  const double ls_nm = twopi_c / sol.omega_signal * 1e9;
  const double li_nm = twopi_c / sol.omega_idler * 1e9;
  std::printf("signal %.3f nm, idler %.3f nm (detuning %.6g rad/s, |dk| %.3g 1/m)\n",
              ls_nm, li_nm, sol.detuning, sol.residual);

  nlohmann::json j;
  j["omega_signal_rad_s"] = sol.omega_signal;
  j["omega_idler_rad_s"] = sol.omega_idler;
  j["wavelength_signal_nm"] = ls_nm;
  j["wavelength_idler_nm"] = li_nm;
  j["detuning_rad_s"] = sol.detuning;
  j["residual_per_m"] = sol.residual;
  if (wants(config, "json"))
    cli::write_text_file((dir / "phase_matching.json").string(),
                         j.dump(2) + "\n");
  if (wants(config, "csv"))
    cli::write_text_file((dir / "phase_matching.csv").string(),
                         "wavelength_signal_nm,wavelength_idler_nm\n" +
                             cli::format_number(ls_nm) + "," +
                             cli::format_number(li_nm) + "\n");
  return 0;
}

void write_sweep_outputs(const ExperimentConfig& config,
                         const cli::SweepResult& result) {
  const auto dir = prepare_out_dir(config);
  if (wants(config, "csv")) {
    cli::export_spectrum_csv((dir / "spectrum.csv").string(),
                             result.pump_spectrum);
    cli::export_ldos_csv((dir / "ldos.csv").string(), result.gap_ldos);
    for (const auto& map : result.intensity_maps)
      cli::export_intensity_csv(
          (dir / ("intensity_port" + std::to_string(map.input_site) + ".csv"))
              .string(),
          map);
    cli::export_reports_csv((dir / "reports.csv").string(), result.reports);
    cli::export_counting_csv((dir / "counting.csv").string(), result.counting);
  }
  if (wants(config, "json"))
    cli::export_run_json((dir / "run.json").string(), result);
  if (wants(config, "svg")) {
    cli::svg_band_diagram((dir / "band_diagram.svg").string(),
                          result.pump_spectrum, result.gap_modes);
    cli::svg_ldos((dir / "ldos.svg").string(), result.gap_ldos);
    for (const auto& map : result.intensity_maps)
      cli::svg_heatmap(
          (dir / ("intensity_port" + std::to_string(map.input_site) + ".svg"))
              .string(),
          map);
    cli::svg_metric_vs_z((dir / "g2_vs_z.svg").string(), "g2_cross",
                         result.reports, &cli::CorrelationReport::g2_cross,
                         true);
    cli::svg_metric_vs_z((dir / "lambda_sq_vs_z.svg").string(), "lambda_sq",
                         result.reports, &cli::CorrelationReport::lambda_sq,
                         false);
  }
}

int run_sweep_cmd(const ExperimentConfig& config) {
  auto result = cli::run_sweep(config);
  write_sweep_outputs(config, result);
  std::printf("%zu reports (%zu ports x %zu distances) -> %s\n",
              result.reports.size(), config.sweep.ports.size(),
              config.sweep.z_mm.size(), config.output.directory.c_str());
  for (const auto& r : result.reports)
    std::printf("port %2zu z=%5.1f  g2=%8.3f  g2_H=%6.4f  eta_H=%6.4f  "
                "lambda^2=%8.6f  n=%9.3g%s\n",
                r.port, r.z_mm, r.g2_cross, r.g2_heralded, r.eta_h, r.lambda_sq,
                r.mean_photon, r.bell_capable ? "  [bell]" : (r.non_classical ? "  [nc]" : ""));
  return 0;
}

int run_squeeze(const ExperimentConfig& base, std::size_t port, double z) {
  ExperimentConfig config = base;
  if (port != 0) config.sweep.ports = {port};
  if (z > 0.0) config.sweep.z_mm = {z};
  if (config.sweep.ports.size() != 1 || config.sweep.z_mm.size() != 1)
    throw ConfigError("squeeze: needs exactly one port and one distance");
  config.validate();
  auto result = cli::run_sweep(config);
  write_sweep_outputs(config, result);
  const auto& r = result.reports.front();
  std::printf("port %zu z=%g mm: g2=%.4f g2_H=%.5f eta_H=%.5f lambda^2=%.6f "
              "mean_n=%.6g\n",
              r.port, r.z_mm, r.g2_cross, r.g2_heralded, r.eta_h, r.lambda_sq,
              r.mean_photon);
  return 0;
}

// Gaussian-vs-Fock agreement and the Eq.-4 round trip, printed as a
// PASS/FAIL table. Exit 3 when any line fails.
int run_oracle_check(const ExperimentConfig& config) {
  int failures = 0;
  auto line = [&](const char* name, bool ok, double value, double bound) {
    std::printf("%-52s %s (err %.3g, tol %.3g)\n", name, ok ? "PASS" : "FAIL",
                value, bound);
    if (!ok) ++failures;
  };

  lattice::Hamiltonian h1;
  h1.dimension = 1;
  h1.matrix = RMat(1, 1);
  auto h2 = lattice::assemble_hamiltonian(
      lattice::build_dimer_chain(2, 0.15, 0.3, std::nullopt));

  for (double gain : {0.05, 0.1, 0.2}) {
    // one site
    {
      const double z = 0.5, gamma = gain / z;
      squeezer::PumpProfile pump;
      pump.peak_power_w = 1.0;
      pump.z_grid_mm = {0.0, z};
      pump.amplitudes = CMat(2, 1, cxd{1.0, 0.0});
      auto map = squeezer::propagate_bogoliubov(h1, h1, pump, gamma, z);
      auto gauss = squeezer::moments_from_bogoliubov(map);

      fockcheck::FockSpace space{1, 1, 8};
      auto gen = fockcheck::build_generator(RMat(1, 1), RMat(1, 1),
                                            {cxd{1.0, 0.0}}, gamma, space);
      auto state = fockcheck::evolve_fock(fockcheck::vacuum_state(space), gen, z);
      auto exact = fockcheck::moments_fock(state);

      const double n_err =
          std::abs(gauss.n_signal(0, 0).real() - exact.n_signal(0, 0).real()) /
          exact.n_signal(0, 0).real();
      const double g2_err =
          std::abs(squeezer::g2_cross(gauss, 1, 1) -
                   (1.0 + std::norm(exact.m_cross(0, 0)) /
                              (exact.n_signal(0, 0).real() *
                               exact.n_idler(0, 0).real()))) /
          squeezer::g2_cross(gauss, 1, 1);
      char name[64];
      std::snprintf(name, sizeof(name), "1-site gain %.2f: photon number", gain);
      line(name, n_err < 0.01, n_err, 0.01);
      std::snprintf(name, sizeof(name), "1-site gain %.2f: g2_cross", gain);
      line(name, g2_err < 0.01, g2_err, 0.01);
    }
    // two sites
    {
      const double z = 0.5, gamma = gain / z;
      const std::vector<cxd> amps{cxd{1.0, 0.0}, std::polar(0.8, 0.7)};
      squeezer::PumpProfile pump;
      pump.peak_power_w = 1.0;
      pump.z_grid_mm = {0.0, z};
      pump.amplitudes = CMat(2, 2);
      for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t i = 0; i < 2; ++i) pump.amplitudes(r, i) = amps[i];
      auto map = squeezer::propagate_bogoliubov(h2, h2, pump, gamma, z);
      auto gauss = squeezer::moments_from_bogoliubov(map);

      fockcheck::FockSpace space{2, 2, 8};
      auto gen = fockcheck::build_generator(h2.matrix, h2.matrix, amps, gamma,
                                            space);
      auto state = fockcheck::evolve_fock(fockcheck::vacuum_state(space), gen, z);
      auto exact = fockcheck::moments_fock(state);

      double n_err = 0.0;
      for (std::size_t i = 0; i < 2; ++i)
        n_err = std::max(n_err, std::abs(gauss.n_signal(i, i).real() -
                                         exact.n_signal(i, i).real()) /
                                    exact.n_signal(i, i).real());
      const double g2_g = squeezer::g2_cross(gauss, 1, 1);
      const double g2_f = 1.0 + std::norm(exact.m_cross(0, 0)) /
                                    (exact.n_signal(0, 0).real() *
                                     exact.n_idler(0, 0).real());
      const double g2_err = std::abs(g2_g - g2_f) / g2_g;
      char name[64];
      std::snprintf(name, sizeof(name), "2-site gain %.2f: photon numbers", gain);
      line(name, n_err < 0.01, n_err, 0.01);
      std::snprintf(name, sizeof(name), "2-site gain %.2f: g2_cross", gain);
      line(name, g2_err < 0.01, g2_err, 0.01);
    }
  }

  // Eq. 4 round trip on TMSV with loss
  for (double lam : {0.1, 0.2, 0.3}) {
    for (double eta : {0.3, 0.6, 1.0}) {
      fockcheck::FockSpace space{1, 1, 12};
      auto gen = fockcheck::build_generator(RMat(1, 1), RMat(1, 1),
                                            {cxd{1.0, 0.0}}, 1.0, space);
      auto state = fockcheck::evolve_fock(fockcheck::vacuum_state(space), gen,
                                          std::atanh(lam));
      auto stats = fockcheck::heralded_g2_fock(state, 0, 0,
                                               {eta, eta, 0.0});
      const double lam2 =
          squeezer::squeeze_param_eq4(stats.g2_heralded, stats.eta_h);
      const double err = std::abs(lam2 - lam * lam) / (lam * lam);
      char name[64];
      std::snprintf(name, sizeof(name),
                    "eq4 round trip lambda=%.1f eta=%.1f", lam, eta);
      line(name, err < 0.05, err, 0.05);
    }
  }

  (void)config;
  std::printf("%s\n", failures == 0 ? "oracle check: all PASS"
                                    : "oracle check: FAILURES present");
  return failures == 0 ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"topological squeezed-light lattice simulator"};
  app.require_subcommand(1);

  GlobalArgs args;
  app.add_option("--config", args.config_path, "JSON config file");
  app.add_option("--out", args.out_dir, "output directory override");
  app.add_option("--seed", args.seed, "RNG seed override");
  app.add_option("--formats", args.formats,
                 "comma-separated output formats: csv,json,svg");

  auto* sc_spectrum = app.add_subcommand(
      "spectrum", "eigenvalues, gap modes and LDOS per band");
  auto* sc_prop = app.add_subcommand(
      "propagate", "classical pump transport and localization metrics");
  sc_prop->add_option("--ports", args.ports, "injection ports")
      ->delimiter(',');
  auto* sc_squeeze =
      app.add_subcommand("squeeze", "single-cell quantum run (one port, one z)");
  std::size_t squeeze_port = 0;
  double squeeze_z = 0.0;
  sc_squeeze->add_option("--port", squeeze_port, "injection port");
  sc_squeeze->add_option("--z", squeeze_z, "evolution distance in mm");
  auto* sc_sweep =
      app.add_subcommand("sweep", "full multi-port, multi-distance study");
  sc_sweep->add_option("--ports", args.ports, "injection ports")
      ->delimiter(',');
  sc_sweep->add_option("--z", args.z_mm, "distances in mm")->delimiter(',');
  auto* sc_oracle = app.add_subcommand(
      "oracle-check", "Gaussian-vs-Fock agreement and Eq.-4 round trip");
  auto* sc_pm = app.add_subcommand("phase-match",
                                   "birefringent phase-matching solver");

  try {
    app.parse(argc, argv);
    const ExperimentConfig config = resolve_config(args);
    if (sc_spectrum->parsed()) return run_spectrum(config);
    if (sc_prop->parsed()) return run_propagate(config);
    if (sc_squeeze->parsed()) return run_squeeze(config, squeeze_port, squeeze_z);
    if (sc_sweep->parsed()) return run_sweep_cmd(config);
    if (sc_oracle->parsed()) return run_oracle_check(config);
    if (sc_pm->parsed()) return run_phase_match(config);
    return 2;
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return 3;
  } catch (const IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
