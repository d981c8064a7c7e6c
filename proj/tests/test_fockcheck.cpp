#include <doctest.h>

#include <cmath>
#include <complex>

#include "sshlight/errors.hpp"
#include "sshlight/fockcheck.hpp"

using namespace sshlight;
using namespace sshlight::fockcheck;

namespace {

// prepare a two-mode squeezed vacuum with parameter lambda = tanh(r) by
// evolving vacuum under the constant pair generator
FockStateVector make_tmsv(double r, std::size_t cutoff) {
  FockSpace space{1, 1, cutoff};
  RMat h0(1, 1);
  auto gen = build_generator(h0, h0, {cxd{1.0, 0.0}}, 1.0, space);
  return evolve_fock(vacuum_state(space), gen, r);
}

// closed-form heralded statistics of a lossy TMSV (geometric sums)
struct TmsvReference {
  double g2_heralded;
  double eta_h;
};

TmsvReference tmsv_reference(double lambda, double eta_s, double eta_i) {
  const double x = lambda * lambda;
  const double qs = 1.0 - eta_s, qi = 1.0 - eta_i;
  const double p_h = 1.0 - (1.0 - x) / (1.0 - x * qi);
  const double p_c = (1.0 - x) * (1.0 / (1.0 - x) - 1.0 / (1.0 - x * qs) -
                                  1.0 / (1.0 - x * qi) +
                                  1.0 / (1.0 - x * qs * qi));
  auto sum_j = [](double y) { return y / ((1.0 - y) * (1.0 - y)); };
  auto sum_jj1 = [](double y) {
    return 2.0 * y * y / ((1.0 - y) * (1.0 - y) * (1.0 - y));
  };
  const double norm = (1.0 - x) / p_h;
  const double mean = norm * (sum_j(x) - sum_j(x * qi));
  const double fac2 = norm * (sum_jj1(x) - sum_jj1(x * qi));
  return {fac2 / (mean * mean), p_c / p_h};
}

}  // namespace

TEST_CASE("fock space: dimension guard and indexing round trip") {
  FockSpace space{2, 2, 8};
  CHECK(space.dimension() == 6561);
  for (std::size_t idx : {0u, 1u, 80u, 6560u}) {
    auto occ = space.occupation_of(idx);
    CHECK(space.index_of(occ) == idx);
  }
  FockSpace too_big{2, 2, 20};
  CHECK_THROWS_AS(too_big.dimension(), ConfigError);
  FockSpace too_many{3, 2, 4};
  CHECK_THROWS_AS(too_many.validate(), ConfigError);
}

TEST_CASE("generator: dense realization is Hermitian") {
  FockSpace space{2, 2, 3};
  RMat h(2, 2);
  h(0, 1) = h(1, 0) = 0.17;
  auto gen = build_generator(h, h, {cxd{0.8, 0.3}, cxd{-0.2, 0.9}}, 0.4, space);
  CMat dense = gen.to_dense();
  const std::size_t dim = space.dimension();
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      CHECK(std::abs(dense(i, j) - std::conj(dense(j, i))) < 1e-12);
}

TEST_CASE("generator: gamma=0 single mode leaves populations frozen") {
  FockSpace space{1, 1, 6};
  RMat h0(1, 1);
  auto gen = build_generator(h0, h0, {cxd{1.0, 0.0}}, 0.0, space);
  auto psi = basis_state(space, {2, 1});
  auto evolved = evolve_fock(psi, gen, 3.7);
  for (std::size_t i = 0; i < space.dimension(); ++i)
    CHECK(std::abs(std::abs(evolved.amplitudes[i]) -
                   std::abs(psi.amplitudes[i])) < 1e-12);
}

TEST_CASE("evolve_fock: identity at dz=0, unitary, semigroup") {
  FockSpace space{1, 1, 10};
  RMat h0(1, 1);
  auto gen = build_generator(h0, h0, {cxd{0.9, 0.2}}, 0.6, space);
  auto v = vacuum_state(space);

  auto same = evolve_fock(v, gen, 0.0);
  for (std::size_t i = 0; i < space.dimension(); ++i)
    CHECK(same.amplitudes[i] == v.amplitudes[i]);

  auto a = evolve_fock(v, gen, 0.25);
  CHECK(std::abs(a.norm() - 1.0) < 1e-9);

  auto b = evolve_fock(evolve_fock(v, gen, 0.1), gen, 0.15);
  for (std::size_t i = 0; i < space.dimension(); ++i)
    CHECK(std::abs(a.amplitudes[i] - b.amplitudes[i]) < 1e-9);
}

TEST_CASE("evolve_fock: cutoff leakage raises a numerical error") {
  FockSpace space{1, 1, 3};
  RMat h0(1, 1);
  auto gen = build_generator(h0, h0, {cxd{1.0, 0.0}}, 1.0, space);
  CHECK_THROWS_AS(evolve_fock(vacuum_state(space), gen, 1.5), NumericalError);
}

TEST_CASE("single-site pump gives the TMSV photon-number distribution") {
  const double r = 0.2;
  const double lambda = std::tanh(r);
  auto state = make_tmsv(r, 12);
  auto pnd = joint_number_distribution(state, 0, 0);
  for (std::size_t j = 0; j <= 12; ++j) {
    for (std::size_t k = 0; k <= 12; ++k) {
      const double expected =
          j == k ? (1.0 - lambda * lambda) * std::pow(lambda * lambda, j) : 0.0;
      CHECK(std::abs(pnd(j, k) - expected) < 1e-4);
    }
  }
}

TEST_CASE("moments_fock: vacuum has no moments") {
  FockSpace space{2, 2, 4};
  auto ms = moments_fock(vacuum_state(space));
  CHECK(max_abs(ms.n_signal) == 0.0);
  CHECK(max_abs(ms.n_idler) == 0.0);
  CHECK(max_abs(ms.m_cross) == 0.0);
}

TEST_CASE("moments_fock: TMSV closed form N=sinh^2, |M|=sinh cosh") {
  const double r = 0.18;
  auto ms = moments_fock(make_tmsv(r, 12));
  CHECK(ms.n_signal(0, 0).real() ==
        doctest::Approx(std::sinh(r) * std::sinh(r)).epsilon(1e-8));
  CHECK(std::abs(ms.n_signal(0, 0).imag()) < 1e-12);
  CHECK(ms.n_idler(0, 0).real() ==
        doctest::Approx(std::sinh(r) * std::sinh(r)).epsilon(1e-8));
  CHECK(std::abs(ms.m_cross(0, 0)) ==
        doctest::Approx(std::sinh(r) * std::cosh(r)).epsilon(1e-8));
}

TEST_CASE("moments_fock: cutoff 8 -> 12 shifts stay below 1e-4") {
  const double r = 0.2;
  auto m8 = moments_fock(make_tmsv(r, 8));
  auto m12 = moments_fock(make_tmsv(r, 12));
  CHECK(std::abs(m8.n_signal(0, 0) - m12.n_signal(0, 0)) < 1e-4);
  CHECK(std::abs(m8.m_cross(0, 0) - m12.m_cross(0, 0)) < 1e-4);
}

TEST_CASE("heralded_g2_fock: pure pair state is a perfect heralded source") {
  FockSpace space{1, 1, 4};
  auto pair = basis_state(space, {1, 1});
  auto stats = heralded_g2_fock(pair, 0, 0, {});
  CHECK(stats.g2_heralded == doctest::Approx(0.0));
  CHECK(stats.eta_h == doctest::Approx(1.0));
}

TEST_CASE("heralded_g2_fock: TMSV matches the geometric-sum closed form") {
  for (double lambda : {0.1, 0.2, 0.3}) {
    for (double eta : {0.3, 0.6, 1.0}) {
      auto state = make_tmsv(std::atanh(lambda), 14);
      squeezer::DetectionModel det{eta, eta, 0.0};
      auto stats = heralded_g2_fock(state, 0, 0, det);
      auto want = tmsv_reference(lambda, eta, eta);
      CHECK(stats.g2_heralded ==
            doctest::Approx(want.g2_heralded).epsilon(1e-6));
      CHECK(stats.eta_h == doctest::Approx(want.eta_h).epsilon(1e-6));
    }
  }
}

TEST_CASE("heralded_g2_fock: g2 vanishes and eta_h -> eta_s at low gain") {
  auto state = make_tmsv(std::atanh(0.02), 8);
  squeezer::DetectionModel det{0.4, 0.7, 0.0};
  auto stats = heralded_g2_fock(state, 0, 0, det);
  CHECK(stats.g2_heralded < 2e-3);
  CHECK(stats.eta_h == doctest::Approx(0.4).epsilon(2e-3));
}

TEST_CASE("heralded_g2_fock: vacuum has no herald") {
  FockSpace space{1, 1, 4};
  CHECK_THROWS_AS(heralded_g2_fock(vacuum_state(space), 0, 0, {}),
                  NumericalError);
}
