#include "sshlight/fockcheck.hpp"

#include <cassert>
#include <cmath>
#include <sstream>

#include "sshlight/errors.hpp"

namespace sshlight::fockcheck {

void FockSpace::validate() const {
  if (signal_modes == 0 || idler_modes == 0)
    throw ConfigError("fock space: need at least one mode per band");
  if (mode_count() > 4)
    throw ConfigError("fock space: at most 4 modes total");
  if (cutoff == 0) throw ConfigError("fock space: cutoff must be >= 1");
  dimension();
}

std::size_t FockSpace::dimension() const {
  const std::size_t base = cutoff + 1;
  std::size_t dim = 1;
  for (std::size_t m = 0; m < mode_count(); ++m) {
    dim *= base;
    if (dim > 100000)
      throw ConfigError("fock space: dimension exceeds the 1e5 guard");
  }
  return dim;
}

std::size_t FockSpace::index_of(const std::vector<std::size_t>& occ) const {
  assert(occ.size() == mode_count());
  const std::size_t base = cutoff + 1;
  std::size_t idx = 0;
  for (std::size_t m = 0; m < occ.size(); ++m) {
    assert(occ[m] <= cutoff);
    idx = idx * base + occ[m];
  }
  return idx;
}

std::vector<std::size_t> FockSpace::occupation_of(std::size_t index) const {
  const std::size_t base = cutoff + 1;
  std::vector<std::size_t> occ(mode_count());
  for (std::size_t m = mode_count(); m-- > 0;) {
    occ[m] = index % base;
    index /= base;
  }
  return occ;
}

double FockStateVector::norm() const {
  return std::sqrt(
      kern::active().sumabs2_cd(amplitudes.size(), amplitudes.data()));
}

double FockStateVector::cutoff_leakage() const {
  const std::size_t base = space.cutoff + 1;
  double leak = 0.0;
  for (std::size_t idx = 0; idx < amplitudes.size(); ++idx) {
    std::size_t rest = idx;
    bool at_top = false;
    for (std::size_t m = 0; m < space.mode_count() && !at_top; ++m) {
      if (rest % base == space.cutoff) at_top = true;
      rest /= base;
    }
    if (at_top) leak += std::norm(amplitudes[idx]);
  }
  return leak;
}

FockStateVector vacuum_state(const FockSpace& space) {
  space.validate();
  FockStateVector s;
  s.space = space;
  s.amplitudes.assign(space.dimension(), cxd{0.0, 0.0});
  s.amplitudes[0] = cxd{1.0, 0.0};
  return s;
}

FockStateVector basis_state(const FockSpace& space,
                            const std::vector<std::size_t>& occ) {
  space.validate();
  if (occ.size() != space.mode_count())
    throw ConfigError("basis_state: occupation arity mismatch");
  for (auto n : occ)
    if (n > space.cutoff) throw ConfigError("basis_state: above cutoff");
  FockStateVector s;
  s.space = space;
  s.amplitudes.assign(space.dimension(), cxd{0.0, 0.0});
  s.amplitudes[space.index_of(occ)] = cxd{1.0, 0.0};
  return s;
}

void FockGenerator::apply(const cxd* x, cxd* y) const {
  const std::size_t dim = space.dimension();
  for (std::size_t i = 0; i < dim; ++i) y[i] = cxd{0.0, 0.0};
  for (std::size_t t = 0; t < vals.size(); ++t) y[rows[t]] += vals[t] * x[cols[t]];
}

CMat FockGenerator::to_dense() const {
  const std::size_t dim = space.dimension();
  if (dim > 4096)
    throw ConfigError("FockGenerator::to_dense: space too large for a dense "
                      "realization");
  CMat g(dim, dim);
  for (std::size_t t = 0; t < vals.size(); ++t) g(rows[t], cols[t]) += vals[t];
  return g;
}

FockGenerator build_generator(const RMat& h_signal, const RMat& h_idler,
                              const std::vector<cxd>& pump_site_amplitudes,
                              double gamma, const FockSpace& space) {
  space.validate();
  if (h_signal.rows() != space.signal_modes ||
      h_signal.cols() != space.signal_modes)
    throw ConfigError("build_generator: H_s dimension mismatch");
  if (h_idler.rows() != space.idler_modes ||
      h_idler.cols() != space.idler_modes)
    throw ConfigError("build_generator: H_i dimension mismatch");
  const std::size_t paired =
      std::min(space.signal_modes, space.idler_modes);
  if (pump_site_amplitudes.size() < paired)
    throw ConfigError("build_generator: need a pump amplitude per paired site");
  if (gamma < 0.0) throw ConfigError("build_generator: gamma must be >= 0");

  const std::size_t dim = space.dimension();
  FockGenerator g;
  g.space = space;

  auto push = [&](std::size_t row, std::size_t col, cxd val) {
    if (val == cxd{0.0, 0.0}) return;
    g.rows.push_back(row);
    g.cols.push_back(col);
    g.vals.push_back(val);
  };

  // mode index helpers: global mode = band offset + site
  auto hop_band = [&](const RMat& h, std::size_t offset,
                      const std::vector<std::size_t>& occ, std::size_t idx) {
    const std::size_t nm = h.rows();
    for (std::size_t m = 0; m < nm; ++m) {
      for (std::size_t n = 0; n < nm; ++n) {
        const double hmn = h(m, n);
        if (hmn == 0.0) continue;
        if (m == n) {
          push(idx, idx, cxd{hmn * static_cast<double>(occ[offset + n]), 0.0});
          continue;
        }
        // a_m^dag a_n
        if (occ[offset + n] == 0 || occ[offset + m] == g.space.cutoff) continue;
        auto occ2 = occ;
        occ2[offset + n] -= 1;
        occ2[offset + m] += 1;
        const double amp =
            hmn * std::sqrt(static_cast<double>(occ[offset + n]) *
                            static_cast<double>(occ2[offset + m]));
        push(g.space.index_of(occ2), idx, cxd{amp, 0.0});
      }
    }
  };

  for (std::size_t idx = 0; idx < dim; ++idx) {
    const auto occ = space.occupation_of(idx);
    hop_band(h_signal, 0, occ, idx);
    hop_band(h_idler, space.signal_modes, occ, idx);

    for (std::size_t n = 0; n < paired; ++n) {
      const cxd drive = gamma * pump_site_amplitudes[n] * pump_site_amplitudes[n];
      if (drive == cxd{0.0, 0.0}) continue;
      const std::size_t sm = n, im = space.signal_modes + n;
      // pair creation a_s^dag a_i^dag
      if (occ[sm] < space.cutoff && occ[im] < space.cutoff) {
        auto occ2 = occ;
        occ2[sm] += 1;
        occ2[im] += 1;
        const double amp = std::sqrt(static_cast<double>(occ2[sm]) *
                                     static_cast<double>(occ2[im]));
        push(space.index_of(occ2), idx, drive * amp);
      }
      // pair annihilation a_s a_i
      if (occ[sm] >= 1 && occ[im] >= 1) {
        auto occ2 = occ;
        occ2[sm] -= 1;
        occ2[im] -= 1;
        const double amp = std::sqrt(static_cast<double>(occ[sm]) *
                                     static_cast<double>(occ[im]));
        push(space.index_of(occ2), idx, std::conj(drive) * amp);
      }
    }
  }

  // induced inf-norm bound from per-row absolute sums
  std::vector<double> row_sum(dim, 0.0);
  for (std::size_t t = 0; t < g.vals.size(); ++t)
    row_sum[g.rows[t]] += std::abs(g.vals[t]);
  for (double s : row_sum) g.inf_norm_bound = std::max(g.inf_norm_bound, s);
  return g;
}

FockStateVector evolve_fock(const FockStateVector& state,
                            const FockGenerator& generator, double dz) {
  if (state.space.dimension() != generator.space.dimension() ||
      state.space.mode_count() != generator.space.mode_count())
    throw ConfigError("evolve_fock: state/generator space mismatch");
  if (!(dz >= 0.0)) throw ConfigError("evolve_fock: negative step");

  FockStateVector out = state;
  if (dz == 0.0) return out;

  auto apply = [&generator](const cxd* x, cxd* y) { generator.apply(x, y); };
  out.amplitudes = expmv(apply, state.amplitudes.size(),
                         generator.inf_norm_bound, cxd{0.0, dz},
                         state.amplitudes, 1e-15);

  const double leak = out.cutoff_leakage();
  if (leak > 1e-6) {
    std::ostringstream msg;
    msg << "evolve_fock: cutoff leakage " << leak
        << " exceeds 1e-6; increase the cutoff";
    throw NumericalError(msg.str());
  }
  return out;
}

squeezer::MomentSet moments_fock(const FockStateVector& state) {
  const FockSpace& sp = state.space;
  const std::size_t dim = sp.dimension();
  const std::size_t modes = sp.mode_count();

  // lowered[m] = a_m |psi>
  std::vector<std::vector<cxd>> lowered(modes,
                                        std::vector<cxd>(dim, cxd{0.0, 0.0}));
  for (std::size_t idx = 0; idx < dim; ++idx) {
    const cxd amp = state.amplitudes[idx];
    if (amp == cxd{0.0, 0.0}) continue;
    const auto occ = sp.occupation_of(idx);
    for (std::size_t m = 0; m < modes; ++m) {
      if (occ[m] == 0) continue;
      auto occ2 = occ;
      occ2[m] -= 1;
      lowered[m][sp.index_of(occ2)] +=
          std::sqrt(static_cast<double>(occ[m])) * amp;
    }
  }

  const auto& k = kern::active();
  squeezer::MomentSet ms;
  ms.n_signal = CMat(sp.signal_modes, sp.signal_modes);
  ms.n_idler = CMat(sp.idler_modes, sp.idler_modes);
  ms.m_cross = CMat(sp.signal_modes, sp.idler_modes);

  // <a_n^dag a_m> = <a_n psi | a_m psi>, stored at (m, n)
  for (std::size_t m = 0; m < sp.signal_modes; ++m)
    for (std::size_t n = 0; n < sp.signal_modes; ++n)
      ms.n_signal(m, n) = k.dotc_cd(dim, lowered[n].data(), lowered[m].data());
  for (std::size_t m = 0; m < sp.idler_modes; ++m)
    for (std::size_t n = 0; n < sp.idler_modes; ++n)
      ms.n_idler(m, n) =
          k.dotc_cd(dim, lowered[sp.signal_modes + n].data(),
                    lowered[sp.signal_modes + m].data());

  // <a_s,m a_i,n> = <psi | a_s,m a_i,n | psi>: lower twice on the ket
  for (std::size_t m = 0; m < sp.signal_modes; ++m) {
    for (std::size_t n = 0; n < sp.idler_modes; ++n) {
      // apply a_i,n then a_s,m via the precomputed single-lowered vectors:
      // a_s,m (a_i,n |psi>) pairs <psi| against both lowerings
      // sum_c conj(psi[c]) psi[c - e] sqrt(c_m c_in), walked from below
      cxd total{0.0, 0.0};
      const std::size_t in = sp.signal_modes + n;
      for (std::size_t idx = 0; idx < dim; ++idx) {
        const cxd amp = state.amplitudes[idx];
        if (amp == cxd{0.0, 0.0}) continue;
        const auto occ = sp.occupation_of(idx);
        if (occ[m] == sp.cutoff || occ[in] == sp.cutoff) continue;
        auto occ2 = occ;
        occ2[m] += 1;
        occ2[in] += 1;
        const double w = std::sqrt(static_cast<double>(occ2[m]) *
                                   static_cast<double>(occ2[in]));
        total += std::conj(state.amplitudes[sp.index_of(occ2)]) * amp * w;
      }
      ms.m_cross(m, n) = std::conj(total);
    }
  }
  return ms;
}

RMat joint_number_distribution(const FockStateVector& state, std::size_t s_mode,
                               std::size_t i_mode) {
  const FockSpace& sp = state.space;
  if (s_mode >= sp.signal_modes || i_mode >= sp.idler_modes)
    throw ConfigError("joint_number_distribution: mode out of range");
  RMat pnd(sp.cutoff + 1, sp.cutoff + 1);
  for (std::size_t idx = 0; idx < sp.dimension(); ++idx) {
    const double w = std::norm(state.amplitudes[idx]);
    if (w == 0.0) continue;
    const auto occ = sp.occupation_of(idx);
    pnd(occ[s_mode], occ[sp.signal_modes + i_mode]) += w;
  }
  return pnd;
}

HeraldedStats heralded_from_joint_pnd(const RMat& pnd,
                                      const squeezer::DetectionModel& det,
                                      double pd_signal, double pd_idler) {
  det.validate();
  if (pd_signal < 0.0 || pd_signal >= 1.0 || pd_idler < 0.0 || pd_idler >= 1.0)
    throw ConfigError("heralded statistics: background probability in [0,1)");
  const std::size_t nj = pnd.rows(), nk = pnd.cols();

  double p_herald = 0.0, p_coinc = 0.0;
  std::vector<double> cond_signal(nj, 0.0);  // diagonal of the heralded state
  for (std::size_t j = 0; j < nj; ++j) {
    for (std::size_t k = 0; k < nk; ++k) {
      const double p = pnd(j, k);
      if (p == 0.0) continue;
      const double click_i =
          1.0 - (1.0 - pd_idler) *
                    std::pow(1.0 - det.eta_idler, static_cast<double>(k));
      const double click_s =
          1.0 - (1.0 - pd_signal) *
                    std::pow(1.0 - det.eta_signal, static_cast<double>(j));
      p_herald += p * click_i;
      p_coinc += p * click_s * click_i;
      cond_signal[j] += p * click_i;
    }
  }
  if (p_herald < 1e-12)
    throw NumericalError("heralded statistics: herald probability below 1e-12");

  double mean = 0.0, fac2 = 0.0;
  for (std::size_t j = 1; j < nj; ++j) {
    const double pj = cond_signal[j] / p_herald;
    const double jd = static_cast<double>(j);
    mean += jd * pj;
    fac2 += jd * (jd - 1.0) * pj;
  }

  HeraldedStats stats;
  stats.herald_probability = p_herald;
  stats.eta_h = p_coinc / p_herald;
  if (pd_signal == 0.0) {
    stats.g2_heralded = mean > 0.0 ? fac2 / (mean * mean) : 0.0;
  } else {
    // binomial thinning by eta_s plus an independent background click stream:
    // <m> = eta mu + pd, <m(m-1)> = eta^2 F2 + 2 eta pd mu + pd^2
    const double es = det.eta_signal;
    const double m1 = es * mean + pd_signal;
    const double m2 =
        es * es * fac2 + 2.0 * es * pd_signal * mean + pd_signal * pd_signal;
    stats.g2_heralded = m1 > 0.0 ? m2 / (m1 * m1) : 0.0;
  }
  return stats;
}

HeraldedStats heralded_g2_fock(const FockStateVector& state, std::size_t s_mode,
                               std::size_t i_mode,
                               const squeezer::DetectionModel& det) {
  return heralded_from_joint_pnd(joint_number_distribution(state, s_mode, i_mode),
                                 det);
}

}  // namespace sshlight::fockcheck
