// AVX2+FMA variants of the kernel table. This translation unit is compiled
// with -mavx2 -mfma and nothing else in the build is; it must stay
// self-contained (raw pointer arithmetic, no inlinable std helpers) so the
// linker cannot leak AVX2 code into translation units that run on CPUs
// selected for the scalar path.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include "sshlight/kern/kernels.hpp"

namespace sshlight::kern {
namespace {

inline double hsum4(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

// sign-flip mask for the imaginary (odd) lanes
inline __m256d neg_odd_mask() {
  return _mm256_castsi256_pd(_mm256_set_epi64x(
      static_cast<long long>(0x8000000000000000ULL), 0,
      static_cast<long long>(0x8000000000000000ULL), 0));
}

void axpy_cd_avx2(std::size_t n, cxd a, const cxd* x, cxd* y) {
  const double* xp = reinterpret_cast<const double*>(x);
  double* yp = reinterpret_cast<double*>(y);
  const double ar = reinterpret_cast<const double*>(&a)[0];
  const double ai = reinterpret_cast<const double*>(&a)[1];
  const __m256d arv = _mm256_set1_pd(ar);
  const __m256d aiv = _mm256_set1_pd(ai);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d vx = _mm256_loadu_pd(xp + 2 * i);
    __m256d vy = _mm256_loadu_pd(yp + 2 * i);
    __m256d t = _mm256_mul_pd(aiv, _mm256_permute_pd(vx, 0x5));
    vy = _mm256_add_pd(vy, _mm256_fmaddsub_pd(arv, vx, t));
    _mm256_storeu_pd(yp + 2 * i, vy);
  }
  for (; i < n; ++i) {
    const double xr = xp[2 * i], xi = xp[2 * i + 1];
    yp[2 * i] += ar * xr - ai * xi;
    yp[2 * i + 1] += ar * xi + ai * xr;
  }
}

void scal_cd_avx2(std::size_t n, cxd a, cxd* x) {
  double* xp = reinterpret_cast<double*>(x);
  const double ar = reinterpret_cast<const double*>(&a)[0];
  const double ai = reinterpret_cast<const double*>(&a)[1];
  const __m256d arv = _mm256_set1_pd(ar);
  const __m256d aiv = _mm256_set1_pd(ai);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d vx = _mm256_loadu_pd(xp + 2 * i);
    __m256d t = _mm256_mul_pd(aiv, _mm256_permute_pd(vx, 0x5));
    _mm256_storeu_pd(xp + 2 * i, _mm256_fmaddsub_pd(arv, vx, t));
  }
  for (; i < n; ++i) {
    const double xr = xp[2 * i], xi = xp[2 * i + 1];
    xp[2 * i] = ar * xr - ai * xi;
    xp[2 * i + 1] = ar * xi + ai * xr;
  }
}

cxd dotc_cd_avx2(std::size_t n, const cxd* x, const cxd* y) {
  const double* xp = reinterpret_cast<const double*>(x);
  const double* yp = reinterpret_cast<const double*>(y);
  const __m256d nmask = neg_odd_mask();
  __m256d acc_re = _mm256_setzero_pd();
  __m256d acc_im = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d vx = _mm256_loadu_pd(xp + 2 * i);
    __m256d vy = _mm256_loadu_pd(yp + 2 * i);
    // re: xr*yr + xi*yi accumulates across both lanes of each pair
    acc_re = _mm256_fmadd_pd(vx, vy, acc_re);
    // im: xr*yi - xi*yr; swap y pairs, negate the odd product lanes
    __m256d sw = _mm256_xor_pd(_mm256_permute_pd(vy, 0x5), nmask);
    acc_im = _mm256_fmadd_pd(vx, sw, acc_im);
  }
  double re = hsum4(acc_re), im = hsum4(acc_im);
  for (; i < n; ++i) {
    const double xr = xp[2 * i], xi = xp[2 * i + 1];
    const double yr = yp[2 * i], yi = yp[2 * i + 1];
    re += xr * yr + xi * yi;
    im += xr * yi - xi * yr;
  }
  double out[2] = {re, im};
  return *reinterpret_cast<const cxd*>(out);
}

double sumabs2_cd_avx2(std::size_t n, const cxd* x) {
  const double* xp = reinterpret_cast<const double*>(x);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d vx = _mm256_loadu_pd(xp + 2 * i);
    acc = _mm256_fmadd_pd(vx, vx, acc);
  }
  double s = hsum4(acc);
  for (; i < n; ++i)
    s += xp[2 * i] * xp[2 * i] + xp[2 * i + 1] * xp[2 * i + 1];
  return s;
}

void abs2_cd_avx2(std::size_t n, const cxd* x, double* out) {
  const double* xp = reinterpret_cast<const double*>(x);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v0 = _mm256_loadu_pd(xp + 2 * i);
    __m256d v1 = _mm256_loadu_pd(xp + 2 * i + 4);
    __m256d h = _mm256_hadd_pd(_mm256_mul_pd(v0, v0), _mm256_mul_pd(v1, v1));
    // hadd interleaves (x0,x2,x1,x3); put lanes back in order
    _mm256_storeu_pd(out + i, _mm256_permute4x64_pd(h, _MM_SHUFFLE(3, 1, 2, 0)));
  }
  for (; i < n; ++i)
    out[i] = xp[2 * i] * xp[2 * i] + xp[2 * i + 1] * xp[2 * i + 1];
}

void matmul_cd_avx2(std::size_t m, std::size_t k, std::size_t n, const cxd* a,
                    const cxd* b, cxd* c) {
  const double* ap = reinterpret_cast<const double*>(a);
  const double* bp = reinterpret_cast<const double*>(b);
  double* cp = reinterpret_cast<double*>(c);
  const std::size_t nd = 2 * n;  // doubles per row of B and C
  for (std::size_t i = 0; i < m; ++i) {
    double* crow = cp + i * nd;
    {
      const __m256d z = _mm256_setzero_pd();
      std::size_t j = 0;
      for (; j + 4 <= nd; j += 4) _mm256_storeu_pd(crow + j, z);
      for (; j < nd; ++j) crow[j] = 0.0;
    }
    for (std::size_t l = 0; l < k; ++l) {
      const double ar = ap[2 * (i * k + l)];
      const double ai = ap[2 * (i * k + l) + 1];
      const __m256d arv = _mm256_set1_pd(ar);
      const __m256d aiv = _mm256_set1_pd(ai);
      const double* brow = bp + l * nd;
      std::size_t j = 0;
      for (; j + 4 <= nd; j += 4) {
        __m256d vb = _mm256_loadu_pd(brow + j);
        __m256d vc = _mm256_loadu_pd(crow + j);
        __m256d t = _mm256_mul_pd(aiv, _mm256_permute_pd(vb, 0x5));
        vc = _mm256_add_pd(vc, _mm256_fmaddsub_pd(arv, vb, t));
        _mm256_storeu_pd(crow + j, vc);
      }
      for (; j + 2 <= nd; j += 2) {
        const double br = brow[j], bi = brow[j + 1];
        crow[j] += ar * br - ai * bi;
        crow[j + 1] += ar * bi + ai * br;
      }
    }
  }
}

void matvec_cd_avx2(std::size_t m, std::size_t k, const cxd* a, const cxd* x,
                    cxd* y) {
  const double* ap = reinterpret_cast<const double*>(a);
  const double* xp = reinterpret_cast<const double*>(x);
  double* yp = reinterpret_cast<double*>(y);
  const __m256d nmask = neg_odd_mask();
  for (std::size_t i = 0; i < m; ++i) {
    const double* arow = ap + 2 * i * k;
    __m256d acc_re = _mm256_setzero_pd();
    __m256d acc_im = _mm256_setzero_pd();
    std::size_t j = 0;
    for (; j + 2 <= k; j += 2) {
      __m256d va = _mm256_loadu_pd(arow + 2 * j);
      __m256d vx = _mm256_loadu_pd(xp + 2 * j);
      // re: ar*xr - ai*xi
      acc_re = _mm256_add_pd(acc_re,
                             _mm256_xor_pd(_mm256_mul_pd(va, vx), nmask));
      // im: ar*xi + ai*xr
      acc_im = _mm256_fmadd_pd(va, _mm256_permute_pd(vx, 0x5), acc_im);
    }
    double re = hsum4(acc_re), im = hsum4(acc_im);
    for (; j < k; ++j) {
      const double ar = arow[2 * j], ai = arow[2 * j + 1];
      const double xr = xp[2 * j], xi = xp[2 * j + 1];
      re += ar * xr - ai * xi;
      im += ar * xi + ai * xr;
    }
    yp[2 * i] = re;
    yp[2 * i + 1] = im;
  }
}

void rot2_d_avx2(std::size_t n, double* x, double* y, double c, double s) {
  const __m256d cv = _mm256_set1_pd(c);
  const __m256d sv = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vx = _mm256_loadu_pd(x + i);
    __m256d vy = _mm256_loadu_pd(y + i);
    __m256d nx = _mm256_fmsub_pd(cv, vx, _mm256_mul_pd(sv, vy));
    __m256d ny = _mm256_fmadd_pd(sv, vx, _mm256_mul_pd(cv, vy));
    _mm256_storeu_pd(x + i, nx);
    _mm256_storeu_pd(y + i, ny);
  }
  for (; i < n; ++i) {
    const double xi = x[i], yi = y[i];
    x[i] = c * xi - s * yi;
    y[i] = s * xi + c * yi;
  }
}

double dot_d_avx2(std::size_t n, const double* x, const double* y) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
  double s = hsum4(acc);
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

void axpy_d_avx2(std::size_t n, double a, const double* x, double* y) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i),
                                 _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

const Ops kAvx2Ops = {
    "avx2",          axpy_cd_avx2, scal_cd_avx2,   dotc_cd_avx2,
    sumabs2_cd_avx2, abs2_cd_avx2, matmul_cd_avx2, matvec_cd_avx2,
    rot2_d_avx2,     dot_d_avx2,   axpy_d_avx2,
};

}  // namespace

const Ops* avx2_ops() {
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
    return &kAvx2Ops;
  return nullptr;
}

}  // namespace sshlight::kern

#else

#include "sshlight/kern/kernels.hpp"

namespace sshlight::kern {
const Ops* avx2_ops() { return nullptr; }
}  // namespace sshlight::kern

#endif
