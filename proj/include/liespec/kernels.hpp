#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace liespec::kernels {

// Inner-loop primitives behind the dense linear algebra. Each has a scalar
// reference implementation plus SIMD variants (AVX2 on x86-64, NEON on
// aarch64) selected once at runtime from CPU capabilities; set_lane or the
// CLI --lane flag pins a specific lane.

enum class Lane { scalar, avx2, neon };

struct Ops {
  // y[i] += a * x[i]
  void (*axpy)(double* y, const double* x, double a, std::size_t n);
  // (x[i], y[i]) <- (c*x[i] - s*y[i], s*x[i] + c*y[i])
  void (*rot)(double* x, double* y, double c, double s, std::size_t n);
  double (*dot)(const double* x, const double* y, std::size_t n);
  // interleaved complex y[i] += (ar + i*ai) * x[i]; n complex elements
  void (*zaxpy)(double* y, const double* x, double ar, double ai, std::size_t n);
};

const char* lane_name(Lane lane);
Lane lane_from_name(const std::string& name);

/// Lanes usable on this host (always contains Lane::scalar).
std::vector<Lane> supported_lanes();

Lane active_lane();
void set_lane(Lane lane);  // throws input_error if unsupported here

const Ops& ops();  // table for the active lane
const Ops& ops_for(Lane lane);

inline void zaxpy(std::complex<double>* y, const std::complex<double>* x,
                  std::complex<double> a, std::size_t n) {
  ops().zaxpy(reinterpret_cast<double*>(y),
              reinterpret_cast<const double*>(x), a.real(), a.imag(), n);
}

inline void axpy(double* y, const double* x, double a, std::size_t n) {
  ops().axpy(y, x, a, n);
}

inline void rot(double* x, double* y, double c, double s, std::size_t n) {
  ops().rot(x, y, c, s, n);
}

inline double dot(const double* x, const double* y, std::size_t n) {
  return ops().dot(x, y, n);
}

namespace detail {
extern const Ops scalar_ops;
#if defined(__x86_64__) || defined(_M_X64)
extern const Ops avx2_ops;
bool avx2_available();
#endif
#if defined(__aarch64__)
extern const Ops neon_ops;
#endif
}  // namespace detail

}  // namespace liespec::kernels
