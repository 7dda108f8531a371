#include "liespec/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "liespec/errors.hpp"

namespace liespec {

Mat operator*(const Mat& a, const Mat& b) {
  if (a.cols() != b.rows()) throw input_error("matrix product: shape mismatch");
  Mat c(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      kernels::axpy(c.row(i), b.row(k), aik, static_cast<std::size_t>(b.cols()));
    }
  }
  return c;
}

Mat operator+(const Mat& a, const Mat& b) {
  Mat c = a;
  for (std::size_t i = 0; i < c.size(); ++i) c.data()[i] += b.data()[i];
  return c;
}

Mat operator-(const Mat& a, const Mat& b) {
  Mat c = a;
  for (std::size_t i = 0; i < c.size(); ++i) c.data()[i] -= b.data()[i];
  return c;
}

Mat operator*(double s, const Mat& a) {
  Mat c = a;
  for (std::size_t i = 0; i < c.size(); ++i) c.data()[i] *= s;
  return c;
}

Mat transpose(const Mat& a) {
  Mat t(a.cols(), a.rows());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

double frob_norm(const Mat& a) {
  return std::sqrt(kernels::dot(a.data(), a.data(), a.size()));
}

double max_abs(const Mat& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data()[i]));
  return m;
}

double max_abs_diff(const Mat& a, const Mat& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

bool is_symmetric(const Mat& a, double rel_tol) {
  if (a.rows() != a.cols()) return false;
  const double scale = std::max(max_abs(a), 1e-300);
  for (int i = 0; i < a.rows(); ++i)
    for (int j = i + 1; j < a.cols(); ++j)
      if (std::abs(a(i, j) - a(j, i)) > rel_tol * scale) return false;
  return true;
}

Mat symmetrize(const Mat& a) {
  Mat s(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) s(i, j) = 0.5 * (a(i, j) + a(j, i));
  return s;
}

std::optional<Mat> cholesky_lower(const Mat& a, double pivot_rel) {
  const int n = a.rows();
  if (n != a.cols()) return std::nullopt;
  double max_diag = 0.0;
  for (int i = 0; i < n; ++i) max_diag = std::max(max_diag, a(i, i));
  if (max_diag <= 0.0) return std::nullopt;
  const double pivot_floor = pivot_rel * max_diag;

  Mat l(n, n);
  for (int j = 0; j < n; ++j) {
    double d = a(j, j) - kernels::dot(l.row(j), l.row(j), static_cast<std::size_t>(j));
    if (d <= pivot_floor) return std::nullopt;
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (int i = j + 1; i < n; ++i) {
      const double v = a(i, j) - kernels::dot(l.row(i), l.row(j), static_cast<std::size_t>(j));
      l(i, j) = v / ljj;
    }
  }
  return l;
}

double spd_det(const Mat& a) {
  auto l = cholesky_lower(a);
  if (!l) throw input_error("spd_det: matrix is not positive definite");
  double det = 1.0;
  for (int i = 0; i < a.rows(); ++i) det *= (*l)(i, i) * (*l)(i, i);
  return det;
}

Mat inverse_lower_triangular(const Mat& l) {
  const int n = l.rows();
  Mat inv(n, n);
  for (int j = 0; j < n; ++j) {
    inv(j, j) = 1.0 / l(j, j);
    for (int i = j + 1; i < n; ++i) {
      double acc = 0.0;
      for (int k = j; k < i; ++k) acc += l(i, k) * inv(k, j);
      inv(i, j) = -acc / l(i, i);
    }
  }
  return inv;
}

Mat spd_inverse(const Mat& a) {
  auto l = cholesky_lower(a);
  if (!l) throw input_error("spd_inverse: matrix is not positive definite");
  const Mat linv = inverse_lower_triangular(*l);
  return transpose(linv) * linv;
}

Mat solve_lower(const Mat& l, const Mat& b) {
  const int n = l.rows();
  Mat x = b;
  for (int c = 0; c < b.cols(); ++c) {
    for (int i = 0; i < n; ++i) {
      double acc = x(i, c);
      for (int k = 0; k < i; ++k) acc -= l(i, k) * x(k, c);
      x(i, c) = acc / l(i, i);
    }
  }
  return x;
}

namespace {

double offdiag_frob(const Mat& a) {
  double acc = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = i + 1; j < a.cols(); ++j) acc += a(i, j) * a(i, j);
  return std::sqrt(2.0 * acc);
}

}  // namespace

SymEig jacobi_symmetric(Mat a, bool with_vectors) {
  const int n = a.rows();
  if (n != a.cols()) throw input_error("jacobi_symmetric: matrix must be square");
  SymEig out;
  if (n == 0) return out;

  // Eigenvector candidates accumulate as rows of vt, so plane rotations act
  // on contiguous memory.
  Mat vt;
  if (with_vectors) vt = Mat::identity(n);

  const double norm = std::max(frob_norm(a), 1e-300);
  const double stop = 1e-13 * norm;

  constexpr int kMaxSweeps = 100;
  int sweep = 0;
  for (; sweep < kMaxSweeps; ++sweep) {
    if (offdiag_frob(a) <= stop) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= stop / (static_cast<double>(n) * n)) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        if (theta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        kernels::rot(a.row(p), a.row(q), c, s, static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
          const double aip = a(i, p);
          const double aiq = a(i, q);
          a(i, p) = c * aip - s * aiq;
          a(i, q) = s * aip + c * aiq;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        if (with_vectors)
          kernels::rot(vt.row(p), vt.row(q), c, s, static_cast<std::size_t>(n));
      }
    }
  }
  if (sweep == kMaxSweeps && offdiag_frob(a) > stop)
    throw numeric_error("jacobi_symmetric: no convergence in 100 sweeps");

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&a](int i, int j) { return a(i, i) < a(j, j); });

  out.values.resize(n);
  for (int i = 0; i < n; ++i) out.values[i] = a(order[i], order[i]);
  if (with_vectors) {
    out.vectors = Mat(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out.vectors(j, i) = vt(order[i], j);
  }
  return out;
}

double herm_residual(const CMat& h) {
  double m = 0.0;
  for (int i = 0; i < h.rows(); ++i)
    for (int j = i; j < h.cols(); ++j)
      m = std::max(m, std::abs(h(i, j) - std::conj(h(j, i))));
  return m;
}

double cmax_abs(const CMat& h) {
  double m = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) m = std::max(m, std::abs(h.data()[i]));
  return m;
}

std::vector<double> hermitian_eigenvalues(const CMat& h, double tol) {
  const int d = h.rows();
  if (d != h.cols()) throw input_error("hermitian_eigenvalues: matrix must be square");
  const double scale = std::max(1.0, cmax_abs(h));
  if (herm_residual(h) > tol * scale)
    throw input_error("hermitian_eigenvalues: matrix is not Hermitian within tolerance");

  // Real symmetric embedding [[Re, -Im], [Im, Re]] of the Hermitian part.
  Mat e(2 * d, 2 * d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const std::complex<double> v = 0.5 * (h(i, j) + std::conj(h(j, i)));
      e(i, j) = v.real();
      e(i + d, j + d) = v.real();
      e(i, j + d) = -v.imag();
      e(i + d, j) = v.imag();
    }
  }
  const SymEig eig = jacobi_symmetric(std::move(e), false);

  // Every eigenvalue of h shows up exactly twice in the embedding.
  std::vector<double> values(d);
  for (int i = 0; i < d; ++i)
    values[i] = 0.5 * (eig.values[2 * i] + eig.values[2 * i + 1]);
  return values;
}

Mat sym_exp(const Mat& s) {
  const SymEig eig = jacobi_symmetric(s, true);
  const int n = s.rows();
  Mat out(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k)
        acc += eig.vectors(i, k) * std::exp(eig.values[k]) * eig.vectors(j, k);
      out(i, j) = acc;
    }
  }
  return symmetrize(out);
}

CMat cmul(const CMat& a, const CMat& b) {
  CMat c(a.rows(), b.cols());
  cmul_acc(c, a, b, 1.0);
  return c;
}

void cmul_acc(CMat& c, const CMat& a, const CMat& b, std::complex<double> s) {
  if (a.cols() != b.rows() || c.rows() != a.rows() || c.cols() != b.cols())
    throw input_error("cmul_acc: shape mismatch");
  for (int i = 0; i < a.rows(); ++i) {
    for (int k = 0; k < a.cols(); ++k) {
      const std::complex<double> f = s * a(i, k);
      if (f == 0.0) continue;
      kernels::zaxpy(c.row(i), b.row(k), f, static_cast<std::size_t>(b.cols()));
    }
  }
}

void caxpy(CMat& y, const CMat& x, std::complex<double> a) {
  kernels::zaxpy(y.data(), x.data(), a, x.size());
}

CMat adjoint(const CMat& a) {
  CMat t(a.cols(), a.rows());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) t(j, i) = std::conj(a(i, j));
  return t;
}

std::complex<double> ctrace(const CMat& a) {
  std::complex<double> t = 0.0;
  for (int i = 0; i < std::min(a.rows(), a.cols()); ++i) t += a(i, i);
  return t;
}

double cmax_abs_diff(const CMat& a, const CMat& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

}  // namespace liespec
