#include "liespec/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

// AVX2+FMA lane, 4 doubles (2 complex) per vector. Compiled via target
// attributes so the translation unit builds regardless of -m flags; the
// dispatcher only installs this table after a cpuid check.

namespace liespec::kernels::detail {

namespace {

__attribute__((target("avx2,fma"))) void axpy_avx2(double* y, const double* x,
                                                   double a, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d yv = _mm256_loadu_pd(y + i);
    __m256d xv = _mm256_loadu_pd(x + i);
    yv = _mm256_fmadd_pd(av, xv, yv);
    _mm256_storeu_pd(y + i, yv);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

__attribute__((target("avx2,fma"))) void rot_avx2(double* x, double* y,
                                                  double c, double s,
                                                  std::size_t n) {
  const __m256d cv = _mm256_set1_pd(c);
  const __m256d sv = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d xv = _mm256_loadu_pd(x + i);
    const __m256d yv = _mm256_loadu_pd(y + i);
    const __m256d xn = _mm256_fmsub_pd(cv, xv, _mm256_mul_pd(sv, yv));
    const __m256d yn = _mm256_fmadd_pd(sv, xv, _mm256_mul_pd(cv, yv));
    _mm256_storeu_pd(x + i, xn);
    _mm256_storeu_pd(y + i, yn);
  }
  for (; i < n; ++i) {
    const double xi = x[i];
    const double yi = y[i];
    x[i] = c * xi - s * yi;
    y[i] = s * xi + c * yi;
  }
}

__attribute__((target("avx2,fma"))) double dot_avx2(const double* x,
                                                    const double* y,
                                                    std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double out = lanes[0] + lanes[1] + lanes[2] + lanes[3];
  for (; i < n; ++i) out += x[i] * y[i];
  return out;
}

// y += (ar + i*ai) * x over interleaved complex pairs:
// real parts at even slots get ar*xr - ai*xi, odd slots ar*xi + ai*xr.
// addsub on (ar*x, ai*swap(x)) produces exactly that pattern.
__attribute__((target("avx2,fma"))) void zaxpy_avx2(double* y, const double* x,
                                                    double ar, double ai,
                                                    std::size_t n) {
  const __m256d arv = _mm256_set1_pd(ar);
  const __m256d aiv = _mm256_set1_pd(ai);
  const std::size_t nd = 2 * n;
  std::size_t i = 0;
  for (; i + 4 <= nd; i += 4) {
    const __m256d xv = _mm256_loadu_pd(x + i);
    const __m256d xswap = _mm256_permute_pd(xv, 0x5);
    const __m256d prod =
        _mm256_addsub_pd(_mm256_mul_pd(arv, xv), _mm256_mul_pd(aiv, xswap));
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), prod));
  }
  for (; i + 2 <= nd; i += 2) {
    const double xr = x[i];
    const double xi = x[i + 1];
    y[i] += ar * xr - ai * xi;
    y[i + 1] += ar * xi + ai * xr;
  }
}

}  // namespace

bool avx2_available() {
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

const Ops avx2_ops = {axpy_avx2, rot_avx2, dot_avx2, zaxpy_avx2};

}  // namespace liespec::kernels::detail

#endif  // x86-64
