#include "sshlight/squeezer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "sshlight/errors.hpp"
#include "sshlight/propagation.hpp"

namespace sshlight::squeezer {

double SellmeierForm::index_at_wavelength_um(double lambda_um) const {
  const double l2 = lambda_um * lambda_um;
  double n2 = 1.0;
  for (std::size_t i = 0; i < b.size(); ++i) n2 += b[i] * l2 / (l2 - c_um2[i]);
  if (!(n2 > 1.0))
    throw NumericalError("sellmeier: index fell outside validity range");
  return std::sqrt(n2);
}

double SellmeierForm::index_at_omega(double omega_rad_s) const {
  if (!(omega_rad_s > 0.0))
    throw ConfigError("sellmeier: frequency must be > 0");
  const double lambda_um =
      2.0 * std::numbers::pi * kSpeedOfLight / omega_rad_s * 1e6;
  return index_at_wavelength_um(lambda_um);
}

void PhaseMatchingProblem::validate() const {
  if (!(pump_omega_rad_s > 0.0))
    throw ConfigError("phase matching: pump frequency must be > 0");
  if (delta_n < 0.0)
    throw ConfigError("phase matching: birefringence must be >= 0");
  if (!(search_band_fraction > 0.0 && search_band_fraction < 1.0))
    throw ConfigError("phase matching: search band fraction must lie in (0,1)");
}

namespace {

// k(w) = n(w) w / c
double wavevector(const SellmeierForm& disp, double omega) {
  return disp.index_at_omega(omega) * omega / kSpeedOfLight;
}

double mismatch(const PhaseMatchingProblem& p, double detuning) {
  const double wp = p.pump_omega_rad_s;
  const double kp =
      (p.dispersion.index_at_omega(wp) + p.delta_n) * wp / kSpeedOfLight;
  return 2.0 * kp - wavevector(p.dispersion, wp + detuning) -
         wavevector(p.dispersion, wp - detuning);
}

}  // namespace

PhaseMatchingSolution solve_phase_matching(const PhaseMatchingProblem& p) {
  p.validate();
  const double wp = p.pump_omega_rad_s;

  PhaseMatchingSolution sol;
  if (p.delta_n == 0.0) {
    // degenerate operation: the mismatch already vanishes at zero detuning
    sol.detuning = 0.0;
    sol.omega_signal = sol.omega_idler = wp;
    sol.residual = std::abs(mismatch(p, 0.0));
    return sol;
  }

  const double band = p.search_band_fraction * wp;
  const std::size_t scan = 4096;
  double lo = 0.0, f_lo = mismatch(p, 0.0);
  double hi = 0.0, f_hi = f_lo;
  bool bracketed = false;
  for (std::size_t i = 1; i <= scan; ++i) {
    hi = band * static_cast<double>(i) / static_cast<double>(scan);
    f_hi = mismatch(p, hi);
    if ((f_lo > 0.0) != (f_hi > 0.0) || f_hi == 0.0) {
      bracketed = true;
      break;
    }
    lo = hi;
    f_lo = f_hi;
  }
  if (!bracketed) {
    std::ostringstream msg;
    msg << "solve_phase_matching: no sign change in [0, " << band
        << "] rad/s; delta_k spans [" << mismatch(p, 0.0) << ", " << f_hi
        << "] 1/m";
    throw NumericalError(msg.str());
  }

  for (int it = 0; it < 200 && (hi - lo) > 1e-12 * wp; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = mismatch(p, mid);
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }

  sol.detuning = 0.5 * (lo + hi);
  sol.omega_signal = wp + sol.detuning;
  sol.omega_idler = wp - sol.detuning;
  sol.residual = std::abs(mismatch(p, sol.detuning));
  return sol;
}

PumpProfile pump_profile(const spectral::Spectrum& pump_spectrum,
                         std::size_t input_port, double peak_power_w,
                         const std::vector<double>& z_grid_mm) {
  if (!(peak_power_w > 0.0))
    throw ConfigError("pump_profile: peak power must be > 0");
  if (z_grid_mm.empty() || z_grid_mm.front() != 0.0)
    throw ConfigError("pump_profile: grid must start at z = 0");
  for (std::size_t r = 1; r < z_grid_mm.size(); ++r)
    if (!(z_grid_mm[r] > z_grid_mm[r - 1]))
      throw ConfigError("pump_profile: grid must ascend");

  PumpProfile pump;
  pump.z_grid_mm = z_grid_mm;
  pump.peak_power_w = peak_power_w;
  const std::size_t n = pump_spectrum.source_dimension;
  pump.amplitudes = CMat(z_grid_mm.size(), n);
  const double scale = std::sqrt(peak_power_w);
  for (std::size_t r = 0; r < z_grid_mm.size(); ++r) {
    auto field = propagation::field_at(pump_spectrum, input_port, z_grid_mm[r]);
    for (std::size_t i = 0; i < n; ++i)
      pump.amplitudes(r, i) = scale * field.amplitudes[i];
  }
  return pump;
}

double BogoliubovMap::symplectic_residual() const {
  CMat lhs = sub(matmul(u, adjoint(u)), matmul(v, adjoint(v)));
  for (std::size_t i = 0; i < lhs.rows(); ++i) lhs(i, i) -= 1.0;
  return fro_norm(lhs);
}

namespace {

struct SliceIntegrator {
  std::size_t n;
  CMat s;  // accumulated 2N x 2N map, starts at identity

  explicit SliceIntegrator(std::size_t sites)
      : n(sites), s(CMat::identity(2 * sites)) {}

  void step(const lattice::Hamiltonian& hs, const lattice::Hamiltonian& hi,
            const CMat& pump_amps, std::size_t row_a, std::size_t row_b,
            double gamma, double dz) {
    CMat gen(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        gen(i, j) = cxd{0.0, hs.matrix(i, j)};
        gen(n + i, n + j) = cxd{0.0, -hi.matrix(i, j)};
      }
      const cxd a2 = 0.5 * (pump_amps(row_a, i) * pump_amps(row_a, i) +
                            pump_amps(row_b, i) * pump_amps(row_b, i));
      gen(i, n + i) = cxd{0.0, 1.0} * gamma * a2;
      gen(n + i, i) = cxd{0.0, -1.0} * gamma * std::conj(a2);
    }
    kern::active().scal_cd(gen.rows() * gen.cols(), cxd{dz, 0.0}, gen.data());
    s = matmul(matexp(gen), s);
  }

  BogoliubovMap extract(double z, double gamma) const {
    BogoliubovMap map;
    map.z_final_mm = z;
    map.gamma = gamma;
    map.u = CMat(n, n);
    map.v = CMat(n, n);
    map.w = CMat(n, n);
    map.x = CMat(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        map.u(i, j) = s(i, j);
        map.v(i, j) = s(i, n + j);
        map.w(i, j) = s(n + i, j);
        map.x(i, j) = s(n + i, n + j);
      }
    return map;
  }
};

void check_symplectic(const BogoliubovMap& map) {
  const double residual = map.symplectic_residual();
  if (residual > 1e-6) {
    std::ostringstream msg;
    msg << "propagate_bogoliubov: symplectic identity violated (residual "
        << residual << "); refine the z step";
    throw NumericalError(msg.str());
  }
}

}  // namespace

std::vector<BogoliubovMap> propagate_bogoliubov_checkpoints(
    const lattice::Hamiltonian& h_signal, const lattice::Hamiltonian& h_idler,
    const PumpProfile& pump, double gamma,
    const std::vector<double>& z_checkpoints_mm) {
  const std::size_t n = h_signal.dimension;
  if (h_idler.dimension != n)
    throw ConfigError("propagate_bogoliubov: band dimensions differ");
  if (pump.amplitudes.cols() != n)
    throw ConfigError("propagate_bogoliubov: pump site count mismatch");
  if (gamma < 0.0) throw ConfigError("propagate_bogoliubov: gamma must be >= 0");
  if (pump.z_grid_mm.empty() || pump.z_grid_mm.front() != 0.0)
    throw ConfigError("propagate_bogoliubov: pump grid must start at z=0");
  if (z_checkpoints_mm.empty())
    throw ConfigError("propagate_bogoliubov: no checkpoints requested");
  for (double z : z_checkpoints_mm)
    if (!(z >= 0.0) || z > pump.z_grid_mm.back() + 1e-9)
      throw ConfigError("propagate_bogoliubov: checkpoint outside pump grid");

  std::vector<double> targets = z_checkpoints_mm;
  std::sort(targets.begin(), targets.end());

  SliceIntegrator integ(n);
  std::vector<BogoliubovMap> out;
  std::size_t next = 0;
  auto snapshot_if_due = [&](double z) {
    while (next < targets.size() && std::abs(targets[next] - z) <= 1e-9) {
      out.push_back(integ.extract(z, gamma));
      ++next;
    }
  };

  snapshot_if_due(0.0);
  for (std::size_t r = 0; r + 1 < pump.z_grid_mm.size(); ++r) {
    const double z0 = pump.z_grid_mm[r], z1 = pump.z_grid_mm[r + 1];
    if (next >= targets.size()) break;
    integ.step(h_signal, h_idler, pump.amplitudes, r, r + 1, gamma, z1 - z0);
    snapshot_if_due(z1);
  }
  if (next < targets.size())
    throw ConfigError(
        "propagate_bogoliubov: checkpoint does not lie on the pump grid");

  for (const auto& map : out) check_symplectic(map);
  return out;
}

BogoliubovMap propagate_bogoliubov(const lattice::Hamiltonian& h_signal,
                                   const lattice::Hamiltonian& h_idler,
                                   const PumpProfile& pump, double gamma,
                                   double z_final_mm) {
  auto maps = propagate_bogoliubov_checkpoints(h_signal, h_idler, pump, gamma,
                                               {z_final_mm});
  return std::move(maps.front());
}

MomentSet moments_from_bogoliubov(const BogoliubovMap& map) {
  MomentSet ms;
  ms.n_signal = matmul(map.v, adjoint(map.v));
  ms.n_idler = transpose(matmul(map.w, adjoint(map.w)));
  ms.m_cross = matmul(map.u, adjoint(map.w));
  return ms;
}

MomentSet apply_loss(const MomentSet& moments, const DetectionModel& det) {
  det.validate();
  MomentSet out = moments;
  const auto& k = kern::active();
  k.scal_cd(out.n_signal.rows() * out.n_signal.cols(),
            cxd{det.eta_signal, 0.0}, out.n_signal.data());
  k.scal_cd(out.n_idler.rows() * out.n_idler.cols(), cxd{det.eta_idler, 0.0},
            out.n_idler.data());
  k.scal_cd(out.m_cross.rows() * out.m_cross.cols(),
            cxd{std::sqrt(det.eta_signal * det.eta_idler), 0.0},
            out.m_cross.data());
  return out;
}

namespace {

struct ReducedPair {
  double n_s, n_i;
  cxd m;
};

ReducedPair reduce(const MomentSet& moments, std::size_t s_port,
                   std::size_t i_port) {
  if (s_port < 1 || s_port > moments.n_signal.rows() || i_port < 1 ||
      i_port > moments.n_idler.rows())
    throw ConfigError("squeezer: port out of range");
  ReducedPair r;
  r.n_s = moments.n_signal(s_port - 1, s_port - 1).real();
  r.n_i = moments.n_idler(i_port - 1, i_port - 1).real();
  r.m = moments.m_cross(s_port - 1, i_port - 1);
  return r;
}

// Williamson split of the reduced pair: an inverse two-mode squeeze with
// tanh(2r) = 2|m| / (n_s + n_i + 1) removes the pairing, leaving thermal
// occupations nu_s, nu_i (zero for a pure TMSV).
struct PairDecomposition {
  double r, theta;
  double nu_s, nu_i;
};

PairDecomposition decompose_pair(const ReducedPair& p) {
  PairDecomposition d;
  d.theta = std::arg(p.m);
  double t2r = 2.0 * std::abs(p.m) / (p.n_s + p.n_i + 1.0);
  if (t2r >= 1.0) {
    if (t2r > 1.0 + 1e-9)
      throw NumericalError("squeezer: unphysical pairing moment");
    t2r = 1.0 - 1e-15;
  }
  d.r = 0.5 * std::atanh(t2r);
  const double c = std::cosh(d.r), s = std::sinh(d.r);
  const double cross = 2.0 * c * s * std::abs(p.m);
  d.nu_s = c * c * p.n_s + s * s * (p.n_i + 1.0) - cross;
  d.nu_i = c * c * p.n_i + s * s * (p.n_s + 1.0) - cross;
  if (d.nu_s < 0.0) {
    if (d.nu_s < -1e-9)
      throw NumericalError("squeezer: negative thermal occupation");
    d.nu_s = 0.0;
  }
  if (d.nu_i < 0.0) {
    if (d.nu_i < -1e-9)
      throw NumericalError("squeezer: negative thermal occupation");
    d.nu_i = 0.0;
  }
  return d;
}

}  // namespace

double g2_cross(const MomentSet& moments, std::size_t s_port,
                std::size_t i_port) {
  const auto p = reduce(moments, s_port, i_port);
  if (!(p.n_s > 0.0) || !(p.n_i > 0.0))
    throw NumericalError(
        "g2_cross: undefined correlation, zero photon number at the ports");
  return 1.0 + std::norm(p.m) / (p.n_s * p.n_i);
}

double g2_cross_measured(const MomentSet& moments, std::size_t s_port,
                         std::size_t i_port, const DetectionModel& det,
                         double pd_signal, double pd_idler) {
  det.validate();
  const auto p = reduce(moments, s_port, i_port);
  const double ps = det.eta_signal * p.n_s + pd_signal;
  const double pi = det.eta_idler * p.n_i + pd_idler;
  if (!(ps > 0.0) || !(pi > 0.0))
    throw NumericalError(
        "g2_cross_measured: undefined correlation, no clicks on an arm");
  return 1.0 +
         det.eta_signal * det.eta_idler * std::norm(p.m) / (ps * pi);
}

fockcheck::HeraldedStats heralded_metrics(const MomentSet& moments,
                                          std::size_t s_port,
                                          std::size_t i_port,
                                          const DetectionModel& det,
                                          std::size_t cutoff,
                                          double pd_signal, double pd_idler) {
  det.validate();
  const auto pair = reduce(moments, s_port, i_port);
  const auto dec = decompose_pair(pair);

  // two-mode squeeze as a constant-pump generator step: gamma*A^2 carries the
  // pairing phase, dz carries the squeeze magnitude
  fockcheck::FockSpace space{1, 1, cutoff};
  RMat h0(1, 1);
  const cxd pump_amp = std::polar(1.0, 0.5 * (dec.theta - std::numbers::pi / 2));
  const auto gen = fockcheck::build_generator(h0, h0, {pump_amp}, 1.0, space);

  auto thermal_weights = [&](double nu) {
    std::vector<double> w(cutoff + 1);
    for (std::size_t k = 0; k <= cutoff; ++k)
      w[k] = std::pow(nu, static_cast<double>(k)) /
             std::pow(1.0 + nu, static_cast<double>(k) + 1.0);
    return w;
  };
  const auto ws = thermal_weights(dec.nu_s);
  const auto wi = thermal_weights(dec.nu_i);

  auto squeeze_op = [&gen](const cxd* in, cxd* out) { gen.apply(in, out); };

  RMat pnd(cutoff + 1, cutoff + 1);
  double captured = 0.0, weighted_leak = 0.0;
  for (std::size_t n1 = 0; n1 <= cutoff; ++n1) {
    for (std::size_t n2 = 0; n2 <= cutoff; ++n2) {
      const double weight = ws[n1] * wi[n2];
      if (weight < 1e-14) continue;
      auto component = fockcheck::basis_state(space, {n1, n2});
      component.amplitudes =
          expmv(squeeze_op, component.amplitudes.size(), gen.inf_norm_bound,
                cxd{0.0, dec.r}, component.amplitudes, 1e-15);
      weighted_leak += weight * component.cutoff_leakage();
      const auto joint = fockcheck::joint_number_distribution(component, 0, 0);
      for (std::size_t j = 0; j <= cutoff; ++j)
        for (std::size_t k = 0; k <= cutoff; ++k)
          pnd(j, k) += weight * joint(j, k);
      captured += weight;
    }
  }
  // untracked probability: thermal tail beyond the cutoff plus population
  // squeezed into the top levels
  const double untracked = (1.0 - captured) + weighted_leak;
  if (untracked > 1e-6) {
    std::ostringstream msg;
    msg << "heralded_metrics: untracked weight " << untracked
        << " exceeds 1e-6; increase the cutoff";
    throw NumericalError(msg.str());
  }

  return fockcheck::heralded_from_joint_pnd(pnd, det, pd_signal, pd_idler);
}

double squeeze_param_eq4(double g2_heralded, double eta_h) {
  if (!(g2_heralded >= 0.0))
    throw NumericalError("squeeze_param_eq4: g2 must be >= 0");
  if (!(eta_h > 0.0) || eta_h > 1.0)
    throw NumericalError(
        "squeeze_param_eq4: eta_H outside (0,1], formula domain error");
  const double one_minus = 1.0 - eta_h;
  return g2_heralded * eta_h / (2.0 * (1.0 - one_minus * one_minus));
}

EffectiveLambda effective_lambda(const MomentSet& moments, std::size_t s_port,
                                 std::size_t i_port) {
  const auto pair = reduce(moments, s_port, i_port);
  const auto dec = decompose_pair(pair);

  EffectiveLambda out;
  out.mean_photon = 0.5 * (pair.n_s + pair.n_i);
  out.lambda = std::sqrt(out.mean_photon / (1.0 + out.mean_photon));
  out.thermal_signal = dec.nu_s;
  out.thermal_idler = dec.nu_i;
  // pairing-dominated when the unpaired (Williamson) excess stays a minor
  // fraction of the occupation; background-dominated ports fail this
  out.tmsv_like =
      dec.nu_s + dec.nu_i <= 0.3 * out.mean_photon + 1e-12;
  return out;
}

}  // namespace sshlight::squeezer
