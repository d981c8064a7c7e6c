// NEON variants of the kernel table for aarch64. One float64x2_t holds one
// complex value (re, im), so the complex kernels work a full complex per
// vector and use a second fma against the pair-swapped operand.

#if defined(__aarch64__) || defined(_M_ARM64)

#include <arm_neon.h>

#include "sshlight/kern/kernels.hpp"

namespace sshlight::kern {
namespace {

const double kPosNeg[2] = {1.0, -1.0};
const double kNegPos[2] = {-1.0, 1.0};

inline float64x2_t swap_pair(float64x2_t v) { return vextq_f64(v, v, 1); }

void axpy_cd_neon(std::size_t n, cxd a, const cxd* x, cxd* y) {
  const double* xp = reinterpret_cast<const double*>(x);
  double* yp = reinterpret_cast<double*>(y);
  const double ar = reinterpret_cast<const double*>(&a)[0];
  const double ai = reinterpret_cast<const double*>(&a)[1];
  const float64x2_t arv = vdupq_n_f64(ar);
  // (-ai, ai) pairs with the swapped x to give (-ai*xi, ai*xr)
  const float64x2_t aiv = vmulq_f64(vdupq_n_f64(ai), vld1q_f64(kNegPos));
  for (std::size_t i = 0; i < n; ++i) {
    float64x2_t vx = vld1q_f64(xp + 2 * i);
    float64x2_t vy = vld1q_f64(yp + 2 * i);
    vy = vfmaq_f64(vy, arv, vx);
    vy = vfmaq_f64(vy, aiv, swap_pair(vx));
    vst1q_f64(yp + 2 * i, vy);
  }
}

void scal_cd_neon(std::size_t n, cxd a, cxd* x) {
  double* xp = reinterpret_cast<double*>(x);
  const double ar = reinterpret_cast<const double*>(&a)[0];
  const double ai = reinterpret_cast<const double*>(&a)[1];
  const float64x2_t arv = vdupq_n_f64(ar);
  const float64x2_t aiv = vmulq_f64(vdupq_n_f64(ai), vld1q_f64(kNegPos));
  for (std::size_t i = 0; i < n; ++i) {
    float64x2_t vx = vld1q_f64(xp + 2 * i);
    float64x2_t r = vmulq_f64(arv, vx);
    r = vfmaq_f64(r, aiv, swap_pair(vx));
    vst1q_f64(xp + 2 * i, r);
  }
}

cxd dotc_cd_neon(std::size_t n, const cxd* x, const cxd* y) {
  const double* xp = reinterpret_cast<const double*>(x);
  const double* yp = reinterpret_cast<const double*>(y);
  const float64x2_t posneg = vld1q_f64(kPosNeg);
  float64x2_t acc_re = vdupq_n_f64(0.0);
  float64x2_t acc_im = vdupq_n_f64(0.0);
  for (std::size_t i = 0; i < n; ++i) {
    float64x2_t vx = vld1q_f64(xp + 2 * i);
    float64x2_t vy = vld1q_f64(yp + 2 * i);
    // re: xr*yr + xi*yi
    acc_re = vfmaq_f64(acc_re, vx, vy);
    // im: xr*yi - xi*yr
    acc_im = vfmaq_f64(acc_im, vx, vmulq_f64(swap_pair(vy), posneg));
  }
  double out[2] = {vaddvq_f64(acc_re), vaddvq_f64(acc_im)};
  return *reinterpret_cast<const cxd*>(out);
}

double sumabs2_cd_neon(std::size_t n, const cxd* x) {
  const double* xp = reinterpret_cast<const double*>(x);
  float64x2_t acc = vdupq_n_f64(0.0);
  for (std::size_t i = 0; i < n; ++i) {
    float64x2_t vx = vld1q_f64(xp + 2 * i);
    acc = vfmaq_f64(acc, vx, vx);
  }
  return vaddvq_f64(acc);
}

void abs2_cd_neon(std::size_t n, const cxd* x, double* out) {
  const double* xp = reinterpret_cast<const double*>(x);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t v0 = vld1q_f64(xp + 2 * i);
    float64x2_t v1 = vld1q_f64(xp + 2 * i + 2);
    vst1q_f64(out + i, vpaddq_f64(vmulq_f64(v0, v0), vmulq_f64(v1, v1)));
  }
  for (; i < n; ++i)
    out[i] = xp[2 * i] * xp[2 * i] + xp[2 * i + 1] * xp[2 * i + 1];
}

void matmul_cd_neon(std::size_t m, std::size_t k, std::size_t n, const cxd* a,
                    const cxd* b, cxd* c) {
  const double* ap = reinterpret_cast<const double*>(a);
  const double* bp = reinterpret_cast<const double*>(b);
  double* cp = reinterpret_cast<double*>(c);
  const std::size_t nd = 2 * n;
  const float64x2_t negpos = vld1q_f64(kNegPos);
  for (std::size_t i = 0; i < m; ++i) {
    double* crow = cp + i * nd;
    const float64x2_t z = vdupq_n_f64(0.0);
    for (std::size_t j = 0; j < nd; j += 2) vst1q_f64(crow + j, z);
    for (std::size_t l = 0; l < k; ++l) {
      const float64x2_t arv = vdupq_n_f64(ap[2 * (i * k + l)]);
      const float64x2_t aiv =
          vmulq_f64(vdupq_n_f64(ap[2 * (i * k + l) + 1]), negpos);
      const double* brow = bp + l * nd;
      for (std::size_t j = 0; j < nd; j += 2) {
        float64x2_t vb = vld1q_f64(brow + j);
        float64x2_t vc = vld1q_f64(crow + j);
        vc = vfmaq_f64(vc, arv, vb);
        vc = vfmaq_f64(vc, aiv, swap_pair(vb));
        vst1q_f64(crow + j, vc);
      }
    }
  }
}

void matvec_cd_neon(std::size_t m, std::size_t k, const cxd* a, const cxd* x,
                    cxd* y) {
  const double* ap = reinterpret_cast<const double*>(a);
  const double* xp = reinterpret_cast<const double*>(x);
  double* yp = reinterpret_cast<double*>(y);
  const float64x2_t posneg = vld1q_f64(kPosNeg);
  for (std::size_t i = 0; i < m; ++i) {
    const double* arow = ap + 2 * i * k;
    float64x2_t acc_re = vdupq_n_f64(0.0);
    float64x2_t acc_im = vdupq_n_f64(0.0);
    for (std::size_t j = 0; j < k; ++j) {
      float64x2_t va = vld1q_f64(arow + 2 * j);
      float64x2_t vx = vld1q_f64(xp + 2 * j);
      // re: ar*xr - ai*xi
      acc_re = vfmaq_f64(acc_re, va, vmulq_f64(vx, posneg));
      // im: ar*xi + ai*xr
      acc_im = vfmaq_f64(acc_im, va, swap_pair(vx));
    }
    yp[2 * i] = vaddvq_f64(acc_re);
    yp[2 * i + 1] = vaddvq_f64(acc_im);
  }
}

void rot2_d_neon(std::size_t n, double* x, double* y, double c, double s) {
  const float64x2_t cv = vdupq_n_f64(c);
  const float64x2_t sv = vdupq_n_f64(s);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t vx = vld1q_f64(x + i);
    float64x2_t vy = vld1q_f64(y + i);
    float64x2_t nx = vfmsq_f64(vmulq_f64(cv, vx), sv, vy);
    float64x2_t ny = vfmaq_f64(vmulq_f64(cv, vy), sv, vx);
    vst1q_f64(x + i, nx);
    vst1q_f64(y + i, ny);
  }
  for (; i < n; ++i) {
    const double xi = x[i], yi = y[i];
    x[i] = c * xi - s * yi;
    y[i] = s * xi + c * yi;
  }
}

double dot_d_neon(std::size_t n, const double* x, const double* y) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    acc = vfmaq_f64(acc, vld1q_f64(x + i), vld1q_f64(y + i));
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

void axpy_d_neon(std::size_t n, double a, const double* x, double* y) {
  const float64x2_t av = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t vy = vfmaq_f64(vld1q_f64(y + i), av, vld1q_f64(x + i));
    vst1q_f64(y + i, vy);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

const Ops kNeonOps = {
    "neon",          axpy_cd_neon, scal_cd_neon,   dotc_cd_neon,
    sumabs2_cd_neon, abs2_cd_neon, matmul_cd_neon, matvec_cd_neon,
    rot2_d_neon,     dot_d_neon,   axpy_d_neon,
};

}  // namespace

const Ops* neon_ops() { return &kNeonOps; }

}  // namespace sshlight::kern

#else

#include "sshlight/kern/kernels.hpp"

namespace sshlight::kern {
const Ops* neon_ops() { return nullptr; }
}  // namespace sshlight::kern

#endif
