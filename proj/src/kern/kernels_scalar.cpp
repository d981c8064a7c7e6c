#include "sshlight/kern/kernels.hpp"

// Reference kernels. Plain loops, no manual vectorization; these definitions
// are the semantics the SIMD variants are tested against.

namespace sshlight::kern {
namespace {

void axpy_cd_scalar(std::size_t n, cxd a, const cxd* x, cxd* y) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scal_cd_scalar(std::size_t n, cxd a, cxd* x) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

cxd dotc_cd_scalar(std::size_t n, const cxd* x, const cxd* y) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
  }
  return {re, im};
}

double sumabs2_cd_scalar(std::size_t n, const cxd* x) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  return s;
}

void abs2_cd_scalar(std::size_t n, const cxd* x, double* out) {
  for (std::size_t i = 0; i < n; ++i)
    out[i] = x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
}

void matmul_cd_scalar(std::size_t m, std::size_t k, std::size_t n,
                      const cxd* a, const cxd* b, cxd* c) {
  for (std::size_t i = 0; i < m; ++i) {
    cxd* crow = c + i * n;
    for (std::size_t j = 0; j < n; ++j) crow[j] = cxd{0.0, 0.0};
    for (std::size_t l = 0; l < k; ++l) {
      const cxd ail = a[i * k + l];
      const cxd* brow = b + l * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += ail * brow[j];
    }
  }
}

void matvec_cd_scalar(std::size_t m, std::size_t k, const cxd* a, const cxd* x,
                      cxd* y) {
  for (std::size_t i = 0; i < m; ++i) {
    cxd s{0.0, 0.0};
    const cxd* arow = a + i * k;
    for (std::size_t j = 0; j < k; ++j) s += arow[j] * x[j];
    y[i] = s;
  }
}

void rot2_d_scalar(std::size_t n, double* x, double* y, double c, double s) {
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = x[i], yi = y[i];
    x[i] = c * xi - s * yi;
    y[i] = s * xi + c * yi;
  }
}

double dot_d_scalar(std::size_t n, const double* x, const double* y) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

void axpy_d_scalar(std::size_t n, double a, const double* x, double* y) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

const Ops kScalarOps = {
    "scalar",          axpy_cd_scalar, scal_cd_scalar,   dotc_cd_scalar,
    sumabs2_cd_scalar, abs2_cd_scalar, matmul_cd_scalar, matvec_cd_scalar,
    rot2_d_scalar,     dot_d_scalar,   axpy_d_scalar,
};

}  // namespace

const Ops& scalar_ops() { return kScalarOps; }

}  // namespace sshlight::kern
