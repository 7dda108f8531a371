#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "liespec/kernels.hpp"

namespace liespec {

/// Dense row-major real matrix. Sizes here are small (algebra dimension
/// at most 8, representation blocks at most 64), so everything is by value.
class Mat {
 public:
  Mat() = default;
  Mat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols, 0.0) {}

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return a_.empty(); }

  double* row(int i) { return a_.data() + static_cast<std::size_t>(i) * cols_; }
  const double* row(int i) const { return a_.data() + static_cast<std::size_t>(i) * cols_; }
  double* data() { return a_.data(); }
  const double* data() const { return a_.data(); }
  std::size_t size() const { return a_.size(); }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> a_;
};

/// Dense row-major complex matrix.
class CMat {
 public:
  using value_type = std::complex<double>;

  CMat() = default;
  CMat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols) {}

  static CMat identity(int n) {
    CMat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  value_type& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
  const value_type& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return a_.empty(); }

  value_type* row(int i) { return a_.data() + static_cast<std::size_t>(i) * cols_; }
  const value_type* row(int i) const { return a_.data() + static_cast<std::size_t>(i) * cols_; }
  value_type* data() { return a_.data(); }
  const value_type* data() const { return a_.data(); }
  std::size_t size() const { return a_.size(); }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<value_type> a_;
};

Mat operator*(const Mat& a, const Mat& b);
Mat operator+(const Mat& a, const Mat& b);
Mat operator-(const Mat& a, const Mat& b);
Mat operator*(double s, const Mat& a);
Mat transpose(const Mat& a);

double frob_norm(const Mat& a);
double max_abs(const Mat& a);
double max_abs_diff(const Mat& a, const Mat& b);
bool is_symmetric(const Mat& a, double rel_tol);
Mat symmetrize(const Mat& a);

/// Lower Cholesky factor, or nullopt when a pivot falls below
/// pivot_rel * (largest diagonal entry), i.e. the input is not numerically SPD.
std::optional<Mat> cholesky_lower(const Mat& a, double pivot_rel = 1e-12);

/// det of an SPD matrix from its Cholesky factor.
double spd_det(const Mat& a);

Mat inverse_lower_triangular(const Mat& l);
Mat spd_inverse(const Mat& a);

/// Solve L * X = B with L lower triangular.
Mat solve_lower(const Mat& l, const Mat& b);

struct SymEig {
  std::vector<double> values;  // ascending
  Mat vectors;                 // columns are eigenvectors; empty unless requested
};

/// Cyclic Jacobi for real symmetric matrices. Sweeps until the off-diagonal
/// Frobenius norm falls below 1e-13 * ||A||_F.
SymEig jacobi_symmetric(Mat a, bool with_vectors = false);

/// Eigenvalues of a Hermitian matrix, ascending. Checks Hermiticity up to
/// `tol` (relative to the largest entry), then diagonalizes the 2d x 2d real
/// symmetric embedding and collapses the doubled multiplicities.
std::vector<double> hermitian_eigenvalues(const CMat& h, double tol = 1e-12);

/// exp(S) for symmetric S via eigendecomposition.
Mat sym_exp(const Mat& s);

double herm_residual(const CMat& h);
double cmax_abs(const CMat& h);

CMat cmul(const CMat& a, const CMat& b);
/// c += s * a * b
void cmul_acc(CMat& c, const CMat& a, const CMat& b, std::complex<double> s);
void caxpy(CMat& y, const CMat& x, std::complex<double> a);
CMat adjoint(const CMat& a);
std::complex<double> ctrace(const CMat& a);
double cmax_abs_diff(const CMat& a, const CMat& b);

}  // namespace liespec
