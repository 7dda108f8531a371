#include "liespec/kernels.hpp"

// Reference lane. Kept branch-free and order-identical to the SIMD lanes'
// remainder loops; the equivalence tests in tests/test_kernels.cpp compare
// every lane against this one.

namespace liespec::kernels::detail {

namespace {

void axpy_scalar(double* y, const double* x, double a, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void rot_scalar(double* x, double* y, double c, double s, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = x[i];
    const double yi = y[i];
    x[i] = c * xi - s * yi;
    y[i] = s * xi + c * yi;
  }
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

void zaxpy_scalar(double* y, const double* x, double ar, double ai,
                  std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = x[2 * i];
    const double xi = x[2 * i + 1];
    y[2 * i] += ar * xr - ai * xi;
    y[2 * i + 1] += ar * xi + ai * xr;
  }
}

}  // namespace

const Ops scalar_ops = {axpy_scalar, rot_scalar, dot_scalar, zaxpy_scalar};

}  // namespace liespec::kernels::detail
