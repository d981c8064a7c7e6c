#pragma once

#include <complex>
#include <cstddef>

namespace sshlight::kern {

using cxd = std::complex<double>;

// Dispatch table for the data-parallel inner loops shared by the numeric
// modules. Every entry has a scalar reference implementation; the SIMD
// variants must agree with it up to floating-point reassociation and are
// equivalence-tested in tests/test_kernels.cpp.
//
// Complex arrays are interleaved (re, im) pairs, layout-compatible with
// std::complex<double>. Matrices are dense row-major.
struct Ops {
  const char* name;

  // y[i] += a * x[i]
  void (*axpy_cd)(std::size_t n, cxd a, const cxd* x, cxd* y);
  // x[i] *= a
  void (*scal_cd)(std::size_t n, cxd a, cxd* x);
  // sum_i conj(x[i]) * y[i]
  cxd (*dotc_cd)(std::size_t n, const cxd* x, const cxd* y);
  // sum_i |x[i]|^2
  double (*sumabs2_cd)(std::size_t n, const cxd* x);
  // out[i] = |x[i]|^2
  void (*abs2_cd)(std::size_t n, const cxd* x, double* out);
  // C = A * B with A m-by-k, B k-by-n; C must not alias A or B
  void (*matmul_cd)(std::size_t m, std::size_t k, std::size_t n, const cxd* a,
                    const cxd* b, cxd* c);
  // y[i] = sum_j A[i,j] * x[j] with A m-by-k; y must not alias x
  void (*matvec_cd)(std::size_t m, std::size_t k, const cxd* a, const cxd* x,
                    cxd* y);
  // plane rotation {x[i], y[i]} <- {c*x[i] - s*y[i], s*x[i] + c*y[i]}
  void (*rot2_d)(std::size_t n, double* x, double* y, double c, double s);
  // sum_i x[i] * y[i]
  double (*dot_d)(std::size_t n, const double* x, const double* y);
  // y[i] += a * x[i]
  void (*axpy_d)(std::size_t n, double a, const double* x, double* y);
};

const Ops& scalar_ops();
const Ops* avx2_ops();  // null unless compiled for x86-64 and CPU has AVX2+FMA
const Ops* neon_ops();  // null off aarch64

// Runtime-selected table: best SIMD variant the CPU supports, else scalar.
// The environment variable SSHLIGHT_KERNEL=scalar|avx2|neon overrides the
// choice (read once, at first use); unavailable values fall back.
const Ops& active();

// Force a table by name; returns false (and leaves the selection unchanged)
// when that variant is unavailable. Intended for tests.
bool force_active(const char* name);

}  // namespace sshlight::kern
