#include <doctest.h>

#include <cmath>
#include <random>

#include "sshlight/errors.hpp"
#include "sshlight/linalg.hpp"

using namespace sshlight;

namespace {

RMat random_symmetric(std::mt19937& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  RMat a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) a(i, j) = a(j, i) = u(rng);
  return a;
}

}  // namespace

TEST_CASE("jacobi: 2x2 off-diagonal pair gives +/-J") {
  RMat a(2, 2);
  a(0, 1) = a(1, 0) = 0.2;
  auto eig = jacobi_eigensym(a);
  CHECK(eig.values[0] == doctest::Approx(-0.2).epsilon(1e-14));
  CHECK(eig.values[1] == doctest::Approx(0.2).epsilon(1e-14));
}

TEST_CASE("jacobi: uniform trimer spectrum is {-sqrt2 J, 0, sqrt2 J}") {
  const double j = 0.13;
  RMat a(3, 3);
  a(0, 1) = a(1, 0) = j;
  a(1, 2) = a(2, 1) = j;
  auto eig = jacobi_eigensym(a);
  CHECK(std::abs(eig.values[0] + std::sqrt(2.0) * j) < 1e-12);
  CHECK(std::abs(eig.values[1]) < 1e-12);
  CHECK(std::abs(eig.values[2] - std::sqrt(2.0) * j) < 1e-12);
}

TEST_CASE("jacobi: residual and orthonormality on random symmetric matrices") {
  std::mt19937 rng(42);
  for (std::size_t n : {1u, 2u, 5u, 8u, 20u, 40u}) {
    RMat a = random_symmetric(rng, n);
    const double norm = fro_norm(a);
    auto eig = jacobi_eigensym(a);

    for (std::size_t m = 0; m < n; ++m) {
      // residual ||A v - E v||
      double r2 = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double av = 0.0;
        for (std::size_t j = 0; j < n; ++j) av += a(i, j) * eig.vectors(m, j);
        const double d = av - eig.values[m] * eig.vectors(m, i);
        r2 += d * d;
      }
      CHECK(std::sqrt(r2) <= 1e-12 * std::max(1.0, norm));
    }
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = 0; q < n; ++q) {
        const double g = kern::active().dot_d(n, eig.vectors.row(p),
                                              eig.vectors.row(q));
        CHECK(std::abs(g - (p == q ? 1.0 : 0.0)) < 1e-12);
      }
    // ascending order
    for (std::size_t m = 0; m + 1 < n; ++m)
      CHECK(eig.values[m] <= eig.values[m + 1]);
  }
}

TEST_CASE("matexp: identity, rotation block, inverse pairing") {
  CMat z(3, 3);
  CMat e = matexp(z);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      CHECK(std::abs(e(i, j) - (i == j ? 1.0 : 0.0)) < 1e-15);

  // exp of a real antisymmetric generator is a rotation
  const double th = 0.7713;
  CMat g(2, 2);
  g(0, 1) = -th;
  g(1, 0) = th;
  CMat r = matexp(g);
  CHECK(std::abs(r(0, 0) - std::cos(th)) < 1e-13);
  CHECK(std::abs(r(0, 1) + std::sin(th)) < 1e-13);
  CHECK(std::abs(r(1, 0) - std::sin(th)) < 1e-13);
  CHECK(std::abs(r(1, 1) - std::cos(th)) < 1e-13);

  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  CMat a(6, 6);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) a(i, j) = cxd{u(rng), u(rng)};
  CMat prod = matmul(matexp(a), matexp(scaled(a, cxd{-1.0, 0.0})));
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j)
      CHECK(std::abs(prod(i, j) - (i == j ? 1.0 : 0.0)) < 1e-11);

  // semigroup: exp(A)^2 = exp(2A), exercises the squaring path
  CMat twice = matexp(scaled(a, cxd{2.0, 0.0}));
  CMat sq = matmul(matexp(a), matexp(a));
  CHECK(fro_norm(sub(twice, sq)) < 1e-10 * fro_norm(twice));
}

TEST_CASE("expmv matches dense matexp") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const std::size_t n = 12;
  CMat a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = cxd{u(rng), u(rng)};
  std::vector<cxd> x(n);
  for (auto& z : x) z = cxd{u(rng), u(rng)};

  const cxd t{0.0, 2.3};  // imaginary time step, the use case downstream
  CMat at = scaled(a, t);
  auto want = matvec(matexp(at), x);

  auto apply = [&](const cxd* in, cxd* out) {
    kern::active().matvec_cd(n, n, a.data(), in, out);
  };
  auto got = expmv(apply, n, inf_norm(a), t, x);
  for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(got[i] - want[i]) < 1e-11);
}
