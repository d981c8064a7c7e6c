#include "sshlight/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "sshlight/errors.hpp"

namespace sshlight::cli {

using nlohmann::json;

namespace {

// strict object reader: every key must be consumed exactly once
class StrictObject {
 public:
  StrictObject(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object())
      throw ConfigError("config: " + path_ + " must be an object");
  }

  ~StrictObject() = default;

  bool has(const char* key) {
    seen_.insert(key);
    return j_.contains(key);
  }

  template <typename T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception& e) {
      throw ConfigError("config: bad value for " + path_ + "." + key + ": " +
                        e.what());
    }
  }

  const json* child(const char* key) {
    seen_.insert(key);
    return j_.contains(key) ? &j_.at(key) : nullptr;
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key()))
        throw ConfigError("config: unknown key " + path_ + "." + it.key());
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void parse_coupling(const json& j, lattice::CouplingModel& model) {
  StrictObject o(j, "coupling");
  o.get("j_ref_per_mm", model.j_ref_per_mm);
  o.get("kappa_per_um", model.kappa_per_um);
  o.get("l_ref_um", model.l_ref_um);
  if (const json* ws = o.child("wavelength_scale")) {
    StrictObject scales(*ws, "coupling.wavelength_scale");
    for (const char* name : {"pump", "signal", "idler"}) {
      double v = model.band_scale.at(lattice::band_from_name(name));
      scales.get(name, v);
      model.band_scale[lattice::band_from_name(name)] = v;
    }
    scales.finish();
  }
  o.finish();
}

}  // namespace

void ExperimentConfig::validate() const {
  waveguide_geometry();  // validates geometry and spacing consistency
  coupling.validate();

  if (!(squeezer.gamma_per_mm_w >= 0.0))
    throw ConfigError("config: squeezer.gamma_per_mm_w must be >= 0");
  if (!(squeezer.pump_power_w > 0.0))
    throw ConfigError("config: squeezer.pump_power_w must be > 0");
  if (squeezer.fock_cutoff < 2 || squeezer.fock_cutoff > 40)
    throw ConfigError("config: squeezer.fock_cutoff out of range");
  if (!(squeezer.z_step_mm > 0.0))
    throw ConfigError("config: squeezer.z_step_mm must be > 0");

  if (!(detection.eta_signal > 0.0 && detection.eta_signal <= 1.0) ||
      !(detection.eta_idler > 0.0 && detection.eta_idler <= 1.0))
    throw ConfigError("config: detection efficiencies must lie in (0, 1]");
  if (detection.dark_rate_hz < 0.0)
    throw ConfigError("config: detection.dark_rate_hz must be >= 0");

  phase_matching_problem().validate();

  if (sweep.z_mm.empty()) throw ConfigError("config: sweep.z_mm is empty");
  for (std::size_t i = 0; i < sweep.z_mm.size(); ++i) {
    if (!(sweep.z_mm[i] > 0.0) || sweep.z_mm[i] > geometry.length_mm + 1e-12)
      throw ConfigError("config: sweep.z_mm entries must lie in (0, length]");
    if (i > 0 && !(sweep.z_mm[i] > sweep.z_mm[i - 1]))
      throw ConfigError("config: sweep.z_mm must ascend");
  }
  if (sweep.ports.empty()) throw ConfigError("config: sweep.ports is empty");
  for (std::size_t p : sweep.ports)
    if (p < 1 || p > geometry.site_count)
      throw ConfigError("config: sweep port out of range");

  if (!(counting.integration_time_s > 0.0))
    throw ConfigError("config: counting.integration_time_s must be > 0");
  if (counting.trials < 1)
    throw ConfigError("config: counting.trials must be >= 1");
  if (!(counting.repetition_rate_hz > 0.0))
    throw ConfigError("config: counting.repetition_rate_hz must be > 0");
  if (background_per_pulse() >= 1.0)
    throw ConfigError("config: dark rate exceeds the repetition rate");

  const std::set<std::string> known_formats{"csv", "json", "svg"};
  if (output.formats.empty())
    throw ConfigError("config: output.formats is empty");
  for (const auto& f : output.formats)
    if (!known_formats.count(f))
      throw ConfigError("config: unknown output format '" + f + "'");
}

lattice::WaveguideGeometry ExperimentConfig::waveguide_geometry() const {
  lattice::WaveguideGeometry g;
  if (!geometry.spacings_um.empty()) {
    if (geometry.spacings_um.size() + 1 != geometry.site_count)
      throw ConfigError("config: geometry.spacings_um needs site_count-1 gaps");
    g.site_count = geometry.site_count;
    g.spacings_um = geometry.spacings_um;
    g.length_mm = geometry.length_mm;
    g.wavelength_nm = phase_matching.pump_wavelength_nm;
    g.validate();
    return g;
  }
  return lattice::dimer_geometry(geometry.site_count, geometry.short_spacing_um,
                                 geometry.long_spacing_um, geometry.defect_site,
                                 geometry.length_mm,
                                 phase_matching.pump_wavelength_nm);
}

lattice::Hamiltonian ExperimentConfig::hamiltonian(lattice::Band band) const {
  return lattice::assemble_hamiltonian(
      lattice::spec_from_geometry(waveguide_geometry(), coupling, band));
}

squeezer::DetectionModel ExperimentConfig::detection_model() const {
  return {detection.eta_signal, detection.eta_idler, detection.dark_rate_hz};
}

squeezer::PhaseMatchingProblem ExperimentConfig::phase_matching_problem()
    const {
  squeezer::PhaseMatchingProblem p;
  p.pump_omega_rad_s = 2.0 * std::numbers::pi * squeezer::kSpeedOfLight /
                       (phase_matching.pump_wavelength_nm * 1e-9);
  p.dispersion.b = phase_matching.sellmeier_b;
  p.dispersion.c_um2 = phase_matching.sellmeier_c_um2;
  p.delta_n = phase_matching.delta_n;
  p.search_band_fraction = phase_matching.search_band_fraction;
  return p;
}

double ExperimentConfig::background_per_pulse() const {
  return detection.dark_rate_hz / counting.repetition_rate_hz;
}

ExperimentConfig default_config() { return {}; }

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: malformed JSON: ") + e.what());
  }

  ExperimentConfig c;
  StrictObject root(j, "<root>");

  if (const json* g = root.child("geometry")) {
    StrictObject o(*g, "geometry");
    o.get("site_count", c.geometry.site_count);
    o.get("short_spacing_um", c.geometry.short_spacing_um);
    o.get("long_spacing_um", c.geometry.long_spacing_um);
    if (o.has("defect_site")) {
      if (g->at("defect_site").is_null()) {
        c.geometry.defect_site.reset();
      } else {
        std::size_t d = 0;
        o.get("defect_site", d);
        c.geometry.defect_site = d;
      }
    }
    o.get("length_mm", c.geometry.length_mm);
    o.get("spacings_um", c.geometry.spacings_um);
    o.finish();
  }
  if (const json* cj = root.child("coupling")) parse_coupling(*cj, c.coupling);
  if (const json* sj = root.child("squeezer")) {
    StrictObject o(*sj, "squeezer");
    o.get("gamma_per_mm_w", c.squeezer.gamma_per_mm_w);
    o.get("pump_power_w", c.squeezer.pump_power_w);
    o.get("fock_cutoff", c.squeezer.fock_cutoff);
    o.get("z_step_mm", c.squeezer.z_step_mm);
    o.finish();
  }
  if (const json* dj = root.child("detection")) {
    StrictObject o(*dj, "detection");
    o.get("eta_signal", c.detection.eta_signal);
    o.get("eta_idler", c.detection.eta_idler);
    o.get("dark_rate_hz", c.detection.dark_rate_hz);
    o.finish();
  }
  if (const json* pj = root.child("phase_matching")) {
    StrictObject o(*pj, "phase_matching");
    o.get("pump_wavelength_nm", c.phase_matching.pump_wavelength_nm);
    o.get("delta_n", c.phase_matching.delta_n);
    o.get("sellmeier_b", c.phase_matching.sellmeier_b);
    o.get("sellmeier_c_um2", c.phase_matching.sellmeier_c_um2);
    o.get("search_band_fraction", c.phase_matching.search_band_fraction);
    o.finish();
  }
  if (const json* wj = root.child("sweep")) {
    StrictObject o(*wj, "sweep");
    o.get("z_mm", c.sweep.z_mm);
    o.get("ports", c.sweep.ports);
    o.finish();
  }
  if (const json* nj = root.child("counting")) {
    StrictObject o(*nj, "counting");
    o.get("integration_time_s", c.counting.integration_time_s);
    o.get("trials", c.counting.trials);
    o.get("repetition_rate_hz", c.counting.repetition_rate_hz);
    o.finish();
  }
  if (const json* oj = root.child("output")) {
    StrictObject o(*oj, "output");
    o.get("directory", c.output.directory);
    o.get("formats", c.output.formats);
    o.finish();
  }
  root.get("seed", c.seed);
  root.finish();

  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string resolved_config_json(const ExperimentConfig& c) {
  json j;
  j["geometry"]["site_count"] = c.geometry.site_count;
  j["geometry"]["short_spacing_um"] = c.geometry.short_spacing_um;
  j["geometry"]["long_spacing_um"] = c.geometry.long_spacing_um;
  if (c.geometry.defect_site)
    j["geometry"]["defect_site"] = *c.geometry.defect_site;
  else
    j["geometry"]["defect_site"] = nullptr;
  j["geometry"]["length_mm"] = c.geometry.length_mm;
  j["geometry"]["spacings_um"] = c.waveguide_geometry().spacings_um;

  j["coupling"]["j_ref_per_mm"] = c.coupling.j_ref_per_mm;
  j["coupling"]["kappa_per_um"] = c.coupling.kappa_per_um;
  j["coupling"]["l_ref_um"] = c.coupling.l_ref_um;
  for (const auto& [band, scale] : c.coupling.band_scale)
    j["coupling"]["wavelength_scale"][lattice::band_name(band)] = scale;
  // derived bond couplings consumed by every lattice build
  j["coupling"]["derived"]["j_weak_per_mm"] = lattice::coupling_from_spacing(
      c.geometry.long_spacing_um, c.coupling, lattice::Band::pump);
  j["coupling"]["derived"]["j_strong_per_mm"] = lattice::coupling_from_spacing(
      c.geometry.short_spacing_um, c.coupling, lattice::Band::pump);

  j["squeezer"]["gamma_per_mm_w"] = c.squeezer.gamma_per_mm_w;
  j["squeezer"]["pump_power_w"] = c.squeezer.pump_power_w;
  j["squeezer"]["fock_cutoff"] = c.squeezer.fock_cutoff;
  j["squeezer"]["z_step_mm"] = c.squeezer.z_step_mm;

  j["detection"]["eta_signal"] = c.detection.eta_signal;
  j["detection"]["eta_idler"] = c.detection.eta_idler;
  j["detection"]["dark_rate_hz"] = c.detection.dark_rate_hz;
  j["detection"]["derived"]["background_per_pulse"] = c.background_per_pulse();

  j["phase_matching"]["pump_wavelength_nm"] = c.phase_matching.pump_wavelength_nm;
  j["phase_matching"]["delta_n"] = c.phase_matching.delta_n;
  j["phase_matching"]["sellmeier_b"] = c.phase_matching.sellmeier_b;
  j["phase_matching"]["sellmeier_c_um2"] = c.phase_matching.sellmeier_c_um2;
  j["phase_matching"]["search_band_fraction"] =
      c.phase_matching.search_band_fraction;

  j["sweep"]["z_mm"] = c.sweep.z_mm;
  j["sweep"]["ports"] = c.sweep.ports;

  j["counting"]["integration_time_s"] = c.counting.integration_time_s;
  j["counting"]["trials"] = c.counting.trials;
  j["counting"]["repetition_rate_hz"] = c.counting.repetition_rate_hz;

  j["output"]["directory"] = c.output.directory;
  j["output"]["formats"] = c.output.formats;

  j["seed"] = c.seed;
  return j.dump(2);
}

}  // namespace sshlight::cli
