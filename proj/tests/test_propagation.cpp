#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "sshlight/errors.hpp"
#include "sshlight/lattice.hpp"
#include "sshlight/propagation.hpp"

using namespace sshlight;
using namespace sshlight::lattice;
using namespace sshlight::propagation;

namespace {

}  // namespace

TEST_CASE("evolve: decoupled single guide keeps all intensity at the input") {
  Hamiltonian h;
  h.dimension = 1;
  h.matrix = RMat(1, 1);
  auto map = evolve(h, 1, {0.0, 5.0, 20.0});
  for (std::size_t r = 0; r < 3; ++r)
    CHECK(map.intensities(r, 0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("evolve: two-site Rabi flopping") {
  const double j = 0.21;
  auto h = assemble_hamiltonian(build_dimer_chain(2, j, 1.0, std::nullopt));
  std::vector<double> grid;
  for (int i = 0; i <= 40; ++i) grid.push_back(0.5 * i);
  auto map = evolve(h, 1, grid);
  for (std::size_t r = 0; r < grid.size(); ++r) {
    const double c = std::cos(j * grid[r]);
    const double s = std::sin(j * grid[r]);
    CHECK(map.intensities(r, 0) == doctest::Approx(c * c).epsilon(1e-10));
    CHECK(map.intensities(r, 1) == doctest::Approx(s * s).epsilon(1e-10));
  }
}

TEST_CASE("evolve: unitarity, every row sums to one") {
  auto h = fixtures::chip_lattice();
  auto grid = uniform_z_grid(35.0, 0.1);
  for (std::size_t port : {1u, 10u, 20u}) {
    auto map = evolve(h, port, grid);
    for (std::size_t r = 0; r < grid.size(); ++r) {
      double sum = 0.0;
      for (std::size_t i = 0; i < 20; ++i) sum += map.intensities(r, i);
      CHECK(std::abs(sum - 1.0) < 1e-9);
    }
  }
}

TEST_CASE("field_at: z=0 is the injection state; semigroup in z") {
  auto h = fixtures::chip_lattice();
  auto s = spectral::eigendecompose(h);

  auto f0 = field_at(s, 10, 0.0);
  for (std::size_t i = 0; i < 20; ++i)
    CHECK(std::abs(f0.amplitudes[i] - (i == 9 ? 1.0 : 0.0)) < 1e-12);

  // compose: evolving the z1 state by z2 through the dense exponential must
  // match a single field_at(z1+z2)
  const double z1 = 7.3, z2 = 11.9;
  auto f1 = field_at(s, 10, z1);
  CMat hc = to_complex(h.matrix);
  CMat u2 = matexp(scaled(hc, cxd{0.0, z2}));
  auto composed = matvec(u2, f1.amplitudes);
  auto direct = field_at(s, 10, z1 + z2);
  for (std::size_t i = 0; i < 20; ++i)
    CHECK(std::abs(composed[i] - direct.amplitudes[i]) < 1e-10);

  CHECK_THROWS_AS(field_at(s, 10, -1.0), ConfigError);
}

TEST_CASE("field_at: conjugation reverses the evolution direction") {
  auto h = fixtures::chip_lattice();
  auto s = spectral::eigendecompose(h);
  const double z = 13.7;
  auto f = field_at(s, 3, z);
  // independent route: exp(-iHz) through the dense exponential
  CMat back = matexp(scaled(to_complex(h.matrix), cxd{0.0, -z}));
  std::vector<cxd> e3(20);
  e3[2] = 1.0;
  auto rev = matvec(back, e3);
  for (std::size_t i = 0; i < 20; ++i)
    CHECK(std::abs(std::conj(f.amplitudes[i]) - rev[i]) < 1e-10);
}

TEST_CASE("localization_metrics: delta and uniform rows") {
  IntensityMap map;
  map.z_grid_mm = {0.0};
  map.input_site = 4;
  map.intensities = RMat(1, 8);
  map.intensities(0, 3) = 1.0;
  auto m = localization_metrics(map, 4);
  CHECK(m.return_probability == doctest::Approx(1.0));
  CHECK(m.spread == doctest::Approx(1.0));

  for (std::size_t i = 0; i < 8; ++i) map.intensities(0, i) = 1.0 / 8.0;
  auto u = localization_metrics(map, 4);
  CHECK(u.spread == doctest::Approx(8.0));
  CHECK(u.return_probability == doctest::Approx(1.0 / 8.0));
}

TEST_CASE("chip lattice: protected ports stay localized, port 20 spreads") {
  auto h = fixtures::chip_lattice();
  auto grid = uniform_z_grid(35.0, 0.1);
  auto m1 = localization_metrics(evolve(h, 1, grid), 1);
  auto m10 = localization_metrics(evolve(h, 10, grid), 10);
  auto m20 = localization_metrics(evolve(h, 20, grid), 20);
  CHECK(m1.return_probability >= 0.5);
  CHECK(m10.return_probability >= 0.5);
  CHECK(m20.spread > 2.0 * m1.spread);
  CHECK(m20.spread > 2.0 * m10.spread);
}

TEST_CASE("large gap-mode overlap keeps the return probability high") {
  auto h = fixtures::chip_lattice();
  auto s = spectral::eigendecompose(h);
  auto gap = spectral::find_gap_modes(s, 0.05, fixtures::j_strong());
  auto grid = uniform_z_grid(35.0, 0.1);
  for (std::size_t port : {1u, 10u}) {
    double gap_weight = 0.0;
    for (auto m : gap) {
      const double c = s.eigenvectors(m, port - 1);
      gap_weight += c * c;
    }
    CHECK(gap_weight > 0.8);
    auto map = evolve(s, port, grid);
    for (std::size_t r = 0; r < grid.size(); ++r)
      CHECK(map.intensities(r, port - 1) > 0.5);
  }
}

TEST_CASE("localization at protected ports survives bond disorder") {
  std::mt19937 rng(40);
  std::uniform_real_distribution<double> u(-0.05, 0.05);
  auto grid = uniform_z_grid(35.0, 0.5);
  for (int rep = 0; rep < 5; ++rep) {
    auto spec = build_dimer_chain(20, fixtures::j_weak(), fixtures::j_strong(), 10);
    for (auto& b : spec.bonds_per_mm) b *= 1.0 + u(rng);
    auto h = assemble_hamiltonian(spec);
    auto m1 = localization_metrics(evolve(h, 1, grid), 1);
    auto m10 = localization_metrics(evolve(h, 10, grid), 10);
    auto m20 = localization_metrics(evolve(h, 20, grid), 20);
    CHECK(m1.return_probability > 0.5);
    CHECK(m10.return_probability > 0.5);
    CHECK(m20.spread > 2.0 * m1.spread);
  }
}

TEST_CASE("superposition inputs evolve unitarily and match the dense route") {
  auto h = fixtures::chip_lattice();
  auto s = spectral::eigendecompose(h);
  // equal split over the two protected channels
  std::vector<cxd> input(20, cxd{0.0, 0.0});
  input[0] = cxd{1.0 / std::sqrt(2.0), 0.0};
  input[9] = cxd{0.0, 1.0 / std::sqrt(2.0)};

  auto grid = uniform_z_grid(20.0, 1.0);
  auto map = evolve_state(s, input, grid);
  for (std::size_t r = 0; r < grid.size(); ++r) {
    double sum = 0.0;
    for (std::size_t i = 0; i < 20; ++i) sum += map.intensities(r, i);
    CHECK(std::abs(sum - 1.0) < 1e-9);
  }

  const double z = 11.0;
  auto f = field_at_state(s, input, z);
  auto want = matvec(matexp(scaled(to_complex(h.matrix), cxd{0.0, z})), input);
  for (std::size_t i = 0; i < 20; ++i)
    CHECK(std::abs(f.amplitudes[i] - want[i]) < 1e-10);

  std::vector<cxd> unnormalized(20, cxd{0.3, 0.0});
  CHECK_THROWS_AS(evolve_state(s, unnormalized, grid), ConfigError);
}

TEST_CASE("evolution commutes with site reversal") {
  auto spec = build_dimer_chain(12, 0.1, 0.3, std::nullopt);
  auto mirrored = spec;
  std::reverse(mirrored.bonds_per_mm.begin(), mirrored.bonds_per_mm.end());
  std::reverse(mirrored.pattern.begin(), mirrored.pattern.end());

  auto grid = uniform_z_grid(15.0, 0.5);
  auto a = evolve(assemble_hamiltonian(spec), 1, grid);
  auto b = evolve(assemble_hamiltonian(mirrored), 12, grid);
  for (std::size_t r = 0; r < grid.size(); ++r)
    for (std::size_t i = 0; i < 12; ++i)
      CHECK(a.intensities(r, i) ==
            doctest::Approx(b.intensities(r, 11 - i)).epsilon(1e-9));
}

TEST_CASE("evolve: input validation") {
  auto h = fixtures::chip_lattice();
  CHECK_THROWS_AS(evolve(h, 0, {0.0, 1.0}), ConfigError);
  CHECK_THROWS_AS(evolve(h, 21, {0.0, 1.0}), ConfigError);
  CHECK_THROWS_AS(evolve(h, 1, {}), ConfigError);
  CHECK_THROWS_AS(evolve(h, 1, {1.0, 0.5}), ConfigError);
  CHECK_THROWS_AS(evolve(h, 1, {-1.0, 0.5}), ConfigError);
}
