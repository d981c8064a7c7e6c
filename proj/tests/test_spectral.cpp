#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fixtures.hpp"
#include "sshlight/errors.hpp"
#include "sshlight/lattice.hpp"
#include "sshlight/spectral.hpp"

using namespace sshlight;
using namespace sshlight::lattice;
using namespace sshlight::spectral;

namespace {

const double kJw = fixtures::j_weak();
const double kJs = fixtures::j_strong();

Hamiltonian random_chain(std::mt19937& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  LatticeSpec spec;
  spec.site_count = n;
  spec.bonds_per_mm.resize(n - 1);
  spec.pattern.assign(n - 1, 'u');
  for (auto& b : spec.bonds_per_mm) b = u(rng);
  return assemble_hamiltonian(spec);
}

}  // namespace

TEST_CASE("eigendecompose: 2-site bond gives +/-J") {
  auto h = assemble_hamiltonian(build_dimer_chain(2, 0.2, 0.3, std::nullopt));
  auto s = eigendecompose(h);
  CHECK(s.eigenvalues[0] == doctest::Approx(-0.2).epsilon(1e-12));
  CHECK(s.eigenvalues[1] == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("eigendecompose: residual and Gram oracle on random chains") {
  std::mt19937 rng(1234);
  for (int rep = 0; rep < 5; ++rep) {
    auto h = random_chain(rng, 8);
    auto s = eigendecompose(h);
    const double norm = fro_norm(h.matrix);
    const std::size_t n = h.dimension;
    for (std::size_t m = 0; m < n; ++m) {
      double r2 = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double hv = 0.0;
        for (std::size_t j = 0; j < n; ++j)
          hv += h.matrix(i, j) * s.eigenvectors(m, j);
        const double d = hv - s.eigenvalues[m] * s.eigenvectors(m, i);
        r2 += d * d;
      }
      CHECK(std::sqrt(r2) < 1e-10 * norm);
    }
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = 0; q < n; ++q) {
        const double g = kern::active().dot_d(n, s.eigenvectors.row(p),
                                              s.eigenvectors.row(q));
        CHECK(std::abs(g - (p == q ? 1.0 : 0.0)) < 1e-10);
      }
  }
}

TEST_CASE("eigendecompose: sign convention is deterministic") {
  auto h = fixtures::chip_lattice();
  auto a = eigendecompose(h);
  auto b = eigendecompose(h);
  for (std::size_t m = 0; m < 20; ++m) {
    double peak = 0.0;
    for (std::size_t i = 0; i < 20; ++i)
      peak = std::max(peak, std::abs(a.eigenvectors(m, i)));
    for (std::size_t i = 0; i < 20; ++i) {
      CHECK(a.eigenvectors(m, i) == b.eigenvectors(m, i));
      if (std::abs(a.eigenvectors(m, i)) > 1e-10 * peak) {
        CHECK(a.eigenvectors(m, i) > 0.0);
        break;
      }
    }
  }
}

TEST_CASE("chiral pairing: spectrum symmetric, partners related by Gamma") {
  std::mt19937 rng(77);
  auto h = random_chain(rng, 12);
  auto s = eigendecompose(h);
  const std::size_t n = h.dimension;
  const double norm = fro_norm(h.matrix);
  for (std::size_t m = 0; m < n; ++m) {
    CHECK(std::abs(s.eigenvalues[m] + s.eigenvalues[n - 1 - m]) < 1e-9 * norm);
    // Gamma psi_m should reproduce the partner eigenvector up to sign
    double overlap = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double gamma = (i % 2 == 0) ? 1.0 : -1.0;
      overlap += gamma * s.eigenvectors(m, i) * s.eigenvectors(n - 1 - m, i);
    }
    CHECK(std::abs(std::abs(overlap) - 1.0) < 1e-9);
  }
}

TEST_CASE("chip lattice: two gap modes between 9+9 band states") {
  auto s = eigendecompose(fixtures::chip_lattice());
  auto gap = find_gap_modes(s, 0.05, kJs);
  REQUIRE(gap.size() == 2);
  CHECK(gap[0] == 9);
  CHECK(gap[1] == 10);
  // the remaining modes split evenly into the two bands
  int below = 0, above = 0;
  for (std::size_t m = 0; m < 20; ++m) {
    if (m == gap[0] || m == gap[1]) continue;
    (s.eigenvalues[m] < 0 ? below : above)++;
    CHECK(std::abs(s.eigenvalues[m]) > 0.05 * kJs);
  }
  CHECK(below == 9);
  CHECK(above == 9);
}

TEST_CASE("dimerized chain without defect: gap-mode count follows the edges") {
  // 20 sites, weak bond first: the alternation ends weak as well, so both
  // edges are nontrivial and two hybridized near-zero modes appear.
  auto s20 = eigendecompose(
      assemble_hamiltonian(build_dimer_chain(20, kJw, kJs, std::nullopt)));
  CHECK(find_gap_modes(s20, 0.05, kJs).size() == 2);
  // 21 sites leaves a single weak-terminated edge and exactly one gap mode.
  auto s21 = eigendecompose(
      assemble_hamiltonian(build_dimer_chain(21, kJw, kJs, std::nullopt)));
  CHECK(find_gap_modes(s21, 0.05, kJs).size() == 1);
}

TEST_CASE("gap modes survive chiral-preserving bond disorder") {
  // off-diagonal (bond) disorder keeps the sublattice symmetry, so the
  // paired spectrum and the near-zero modes must persist
  std::mt19937 rng(2026);
  std::uniform_real_distribution<double> u(-0.05, 0.05);
  for (int rep = 0; rep < 10; ++rep) {
    auto spec = build_dimer_chain(20, kJw, kJs, 10);
    for (auto& b : spec.bonds_per_mm) b *= 1.0 + u(rng);
    auto s = eigendecompose(assemble_hamiltonian(spec));
    CHECK(find_gap_modes(s, 0.05, kJs).size() == 2);
    const std::size_t n = 20;
    for (std::size_t m = 0; m < n; ++m)
      CHECK(std::abs(s.eigenvalues[m] + s.eigenvalues[n - 1 - m]) < 1e-10);
    auto profile = ldos(s, 0.0, 0.02 * kJs);
    double peak = 0.0;
    for (double v : profile.values) peak = std::max(peak, v);
    CHECK(profile.values[0] + profile.values[9] > 1.2 * peak);
    CHECK(profile.values[19] < 0.10 * peak);
  }
}

TEST_CASE("find_gap_modes: argument validation") {
  auto s = eigendecompose(fixtures::chip_lattice());
  CHECK_THROWS_AS(find_gap_modes(s, 0.0, kJs), ConfigError);
  CHECK_THROWS_AS(find_gap_modes(s, 1.0, kJs), ConfigError);
  CHECK_THROWS_AS(find_gap_modes(s, 0.05, 0.0), ConfigError);
}

TEST_CASE("ldos: single isolated mode reduces to |psi|^2") {
  auto h = assemble_hamiltonian(build_dimer_chain(2, 0.2, 0.3, std::nullopt));
  auto s = eigendecompose(h);
  // narrow Gaussian centered on E_1; the E_0 term is then negligible
  auto profile = ldos(s, s.eigenvalues[1], 1e-3);
  const double peak = 1.0 / (1e-3 * std::sqrt(2.0 * std::numbers::pi));
  for (std::size_t i = 0; i < 2; ++i) {
    const double psi2 = s.eigenvectors(1, i) * s.eigenvectors(1, i);
    CHECK(profile.values[i] == doctest::Approx(peak * psi2).epsilon(1e-9));
  }
}

TEST_CASE("ldos: completeness against the broadened density of states") {
  auto s = eigendecompose(fixtures::chip_lattice());
  const double sigma = 0.02 * kJs;
  for (double energy : {0.0, 0.1, 0.25, -0.3}) {
    auto profile = ldos(s, energy, sigma);
    double total = 0.0;
    for (double v : profile.values) {
      CHECK(v >= 0.0);
      total += v;
    }
    double dos = 0.0;
    const double norm = 1.0 / (sigma * std::sqrt(2.0 * std::numbers::pi));
    for (double e : s.eigenvalues) {
      const double d = (energy - e) / sigma;
      dos += norm * std::exp(-0.5 * d * d);
    }
    CHECK(std::abs(total - dos) < 1e-8 * std::max(1.0, dos));
  }
}

TEST_CASE("ldos: gap-mode weight sits on sites 1 and 10") {
  auto s = eigendecompose(fixtures::chip_lattice());
  auto profile = ldos(s, 0.0, 0.02 * kJs);
  // the two largest entries are the edge and interface sites
  std::size_t best = 0, second = 1;
  if (profile.values[1] > profile.values[0]) std::swap(best, second);
  for (std::size_t i = 2; i < 20; ++i) {
    if (profile.values[i] > profile.values[best]) {
      second = best;
      best = i;
    } else if (profile.values[i] > profile.values[second]) {
      second = i;
    }
  }
  CHECK(((best == 0 && second == 9) || (best == 9 && second == 0)));
  const double peak = profile.values[best];
  CHECK(profile.values[19] < 0.10 * peak);
}

TEST_CASE("zak phase: pi for weak intracell, 0 when swapped") {
  auto topological = zak_phase(0.0832, 0.25, 512);
  CHECK(circular_distance(topological.phase, std::numbers::pi) <
        1e-6 * 2.0 * std::numbers::pi);
  CHECK(topological.converged);

  auto trivial = zak_phase(0.25, 0.0832, 512);
  CHECK(circular_distance(trivial.phase, 0.0) < 1e-6 * 2.0 * std::numbers::pi);
  CHECK(trivial.converged);
}

TEST_CASE("zak phase: invariant under k refinement and coupling scale") {
  auto base = zak_phase(0.1, 0.3, 512);
  auto doubled = zak_phase(0.1, 0.3, 1024);
  auto scaled = zak_phase(0.7, 2.1, 512);
  CHECK(circular_distance(base.phase, doubled.phase) <
        1e-6 * 2.0 * std::numbers::pi);
  CHECK(circular_distance(base.phase, scaled.phase) <
        1e-6 * 2.0 * std::numbers::pi);
}

TEST_CASE("zak phase: rejects closed gap and coarse grids") {
  CHECK_THROWS_AS(zak_phase(0.2, 0.2, 512), ConfigError);
  CHECK_THROWS_AS(zak_phase(0.1, 0.3, 32), ConfigError);
}
