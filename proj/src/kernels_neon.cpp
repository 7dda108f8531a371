#include "liespec/kernels.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

// NEON lane, 2 doubles (1 complex) per vector. NEON is baseline on aarch64,
// so no runtime feature probe is needed.

namespace liespec::kernels::detail {

namespace {

void axpy_neon(double* y, const double* x, double a, std::size_t n) {
  const float64x2_t av = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t yv = vld1q_f64(y + i);
    yv = vfmaq_f64(yv, av, vld1q_f64(x + i));
    vst1q_f64(y + i, yv);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void rot_neon(double* x, double* y, double c, double s, std::size_t n) {
  const float64x2_t cv = vdupq_n_f64(c);
  const float64x2_t sv = vdupq_n_f64(s);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t xv = vld1q_f64(x + i);
    const float64x2_t yv = vld1q_f64(y + i);
    vst1q_f64(x + i, vfmsq_f64(vmulq_f64(cv, xv), sv, yv));
    vst1q_f64(y + i, vfmaq_f64(vmulq_f64(cv, yv), sv, xv));
  }
  for (; i < n; ++i) {
    const double xi = x[i];
    const double yi = y[i];
    x[i] = c * xi - s * yi;
    y[i] = s * xi + c * yi;
  }
}

double dot_neon(const double* x, const double* y, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    acc = vfmaq_f64(acc, vld1q_f64(x + i), vld1q_f64(y + i));
  }
  double out = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
  for (; i < n; ++i) out += x[i] * y[i];
  return out;
}

void zaxpy_neon(double* y, const double* x, double ar, double ai,
                std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t xv = vld1q_f64(x + 2 * i);  // (xr, xi)
    const float64x2_t xswap = vextq_f64(xv, xv, 1);
    float64x2_t prod = vmulq_n_f64(xv, ar);
    const float64x2_t cross = vmulq_n_f64(xswap, ai);
    // (ar*xr - ai*xi, ar*xi + ai*xr)
    const float64x2_t signs = {-1.0, 1.0};
    prod = vfmaq_f64(prod, cross, signs);
    vst1q_f64(y + 2 * i, vaddq_f64(vld1q_f64(y + 2 * i), prod));
  }
}

}  // namespace

const Ops neon_ops = {axpy_neon, rot_neon, dot_neon, zaxpy_neon};

}  // namespace liespec::kernels::detail

#endif  // aarch64
