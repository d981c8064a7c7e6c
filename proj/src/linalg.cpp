#include "sshlight/linalg.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <sstream>

#include "sshlight/errors.hpp"

namespace sshlight {

CMat matmul(const CMat& a, const CMat& b) {
  assert(a.cols() == b.rows());
  CMat c(a.rows(), b.cols());
  kern::active().matmul_cd(a.rows(), a.cols(), b.cols(), a.data(), b.data(),
                           c.data());
  return c;
}

std::vector<cxd> matvec(const CMat& a, const std::vector<cxd>& x) {
  assert(a.cols() == x.size());
  std::vector<cxd> y(a.rows());
  kern::active().matvec_cd(a.rows(), a.cols(), a.data(), x.data(), y.data());
  return y;
}

CMat adjoint(const CMat& a) {
  CMat r(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(j, i) = std::conj(a(i, j));
  return r;
}

CMat transpose(const CMat& a) {
  CMat r(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(j, i) = a(i, j);
  return r;
}

CMat to_complex(const RMat& a) {
  CMat r(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j);
  return r;
}

CMat scaled(const CMat& a, cxd factor) {
  CMat r = a;
  kern::active().scal_cd(r.rows() * r.cols(), factor, r.data());
  return r;
}

CMat add(const CMat& a, const CMat& b) {
  assert(a.rows() == b.rows() && a.cols() == b.cols());
  CMat r = b;
  kern::active().axpy_cd(r.rows() * r.cols(), cxd{1.0, 0.0}, a.data(),
                         r.data());
  return r;
}

CMat sub(const CMat& a, const CMat& b) {
  CMat r = a;
  kern::active().axpy_cd(r.rows() * r.cols(), cxd{-1.0, 0.0}, b.data(),
                         r.data());
  return r;
}

double fro_norm(const CMat& a) {
  return std::sqrt(kern::active().sumabs2_cd(a.rows() * a.cols(), a.data()));
}

double fro_norm(const RMat& a) {
  const double s = kern::active().dot_d(a.rows() * a.cols(), a.data(),
                                        a.data());
  return std::sqrt(s);
}

double max_abs(const CMat& a) {
  double m = 0.0;
  const cxd* p = a.data();
  for (std::size_t i = 0, n = a.rows() * a.cols(); i < n; ++i)
    m = std::max(m, std::abs(p[i]));
  return m;
}

double inf_norm(const CMat& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += std::abs(a(i, j));
    m = std::max(m, s);
  }
  return m;
}

namespace {

double offdiag_fro(const RMat& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

}  // namespace

SymEig jacobi_eigensym(RMat a, std::size_t max_sweeps, double rel_tol) {
  const std::size_t n = a.rows();
  assert(n == a.cols());
  const auto& k = kern::active();

  RMat vt = RMat::identity(n);  // rows accumulate the eigenvectors
  const double scale = fro_norm(a);
  const double stop = rel_tol * scale;

  std::vector<double> colp(n), colq(n);
  std::size_t sweep = 0;
  double off = offdiag_fro(a);
  while (off > stop && scale > 0.0) {
    if (sweep++ >= max_sweeps) {
      std::ostringstream msg;
      msg << "jacobi_eigensym: no convergence after " << max_sweeps
          << " sweeps (n=" << n << ", off=" << off << ", target=" << stop
          << ")";
      throw NumericalError(msg.str());
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= 1e-2 * stop / static_cast<double>(n)) continue;
        const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        // A <- J^T A J ; rows are contiguous, columns go through scratch
        k.rot2_d(n, a.row(p), a.row(q), c, s);
        for (std::size_t i = 0; i < n; ++i) {
          colp[i] = a(i, p);
          colq[i] = a(i, q);
        }
        k.rot2_d(n, colp.data(), colq.data(), c, s);
        for (std::size_t i = 0; i < n; ++i) {
          a(i, p) = colp[i];
          a(i, q) = colq[i];
        }
        k.rot2_d(n, vt.row(p), vt.row(q), c, s);
      }
    }
    off = offdiag_fro(a);
  }

  SymEig out;
  out.sweeps = sweep;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });
  out.values.resize(n);
  out.vectors = RMat(n, n);
  for (std::size_t m = 0; m < n; ++m) {
    out.values[m] = a(order[m], order[m]);
    const double* src = vt.row(order[m]);
    std::copy(src, src + n, out.vectors.row(m));
  }
  return out;
}

CMat matexp(const CMat& a, double tol) {
  const std::size_t n = a.rows();
  assert(n == a.cols());

  const double norm = inf_norm(a);
  int squarings = 0;
  if (norm > 1.0) squarings = static_cast<int>(std::ceil(std::log2(norm)));

  CMat b = scaled(a, cxd{std::ldexp(1.0, -squarings), 0.0});

  CMat x = CMat::identity(n);
  CMat term = CMat::identity(n);
  const std::size_t max_terms = 60;
  std::size_t k = 1;
  for (; k <= max_terms; ++k) {
    term = scaled(matmul(term, b), cxd{1.0 / static_cast<double>(k), 0.0});
    x = add(x, term);
    if (fro_norm(term) <= 0.25 * tol * fro_norm(x)) break;
  }
  if (k > max_terms)
    throw NumericalError("matexp: Taylor series failed to converge");

  for (int i = 0; i < squarings; ++i) x = matmul(x, x);
  return x;
}

std::vector<cxd> expmv(const std::function<void(const cxd*, cxd*)>& apply,
                       std::size_t dim, double op_norm_bound, cxd t,
                       const std::vector<cxd>& x, double tol) {
  assert(x.size() == dim);
  const auto& k = kern::active();

  const double scaled_norm = std::abs(t) * op_norm_bound;
  const std::size_t steps =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(scaled_norm)));
  const cxd dt = t / static_cast<double>(steps);

  std::vector<cxd> w = x, term = x, next(dim);
  for (std::size_t s = 0; s < steps; ++s) {
    term = w;
    const double ref = std::sqrt(k.sumabs2_cd(dim, w.data()));
    for (std::size_t j = 1; j <= 120; ++j) {
      apply(term.data(), next.data());
      term.swap(next);
      k.scal_cd(dim, dt / static_cast<double>(j), term.data());
      k.axpy_cd(dim, cxd{1.0, 0.0}, term.data(), w.data());
      if (std::sqrt(k.sumabs2_cd(dim, term.data())) <= tol * ref) break;
      if (j == 120)
        throw NumericalError("expmv: Taylor series failed to converge");
    }
  }
  return w;
}

}  // namespace sshlight
