#include "liespec/reps.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "liespec/errors.hpp"

namespace liespec {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

long long int_det(const std::vector<long long>& a, int n) {
  if (n == 1) return a[0];
  long long det = 0;
  std::vector<long long> minor((n - 1) * (n - 1));
  for (int col = 0; col < n; ++col) {
    for (int i = 1; i < n; ++i) {
      int mj = 0;
      for (int j = 0; j < n; ++j) {
        if (j == col) continue;
        minor[static_cast<std::size_t>(i - 1) * (n - 1) + mj++] =
            a[static_cast<std::size_t>(i) * n + j];
      }
    }
    const long long cof = int_det(minor, n - 1);
    det += (col % 2 == 0 ? 1 : -1) * a[col] * cof;
  }
  return det;
}

// adj(A)(i,j) = (-1)^{i+j} * minor_det(A with row j, col i removed)
std::vector<long long> int_adjugate(const std::vector<long long>& a, int n) {
  std::vector<long long> adj(static_cast<std::size_t>(n) * n, 0);
  if (n == 1) {
    adj[0] = 1;
    return adj;
  }
  std::vector<long long> minor((n - 1) * (n - 1));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      int mi = 0;
      for (int r = 0; r < n; ++r) {
        if (r == j) continue;
        int mj = 0;
        for (int c = 0; c < n; ++c) {
          if (c == i) continue;
          minor[static_cast<std::size_t>(mi) * (n - 1) + mj++] =
              a[static_cast<std::size_t>(r) * n + c];
        }
        ++mi;
      }
      const long long cof = int_det(minor, n - 1);
      adj[static_cast<std::size_t>(i) * n + j] = ((i + j) % 2 == 0 ? 1 : -1) * cof;
    }
  }
  return adj;
}

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) {
      const std::complex<double> f = a(i, j);
      if (f == 0.0) continue;
      for (int r = 0; r < b.rows(); ++r)
        for (int c = 0; c < b.cols(); ++c)
          out(i * b.rows() + r, j * b.cols() + c) = f * b(r, c);
    }
  return out;
}

// Scalar of the bi-invariant block -sum_{ik} W_ik pi_i pi_k for a factor
// irrep, with W the inverse of the factor's reference Gram.
double numeric_casimir(const std::vector<CMat>& gens, const Mat& gram) {
  const int m = gram.rows();
  const int d = gens.empty() ? 1 : gens[0].rows();
  const Mat w = spd_inverse(gram);
  CMat h(d, d);
  for (int i = 0; i < m; ++i) {
    CMat q(d, d);
    for (int k = 0; k < m; ++k)
      if (w(i, k) != 0.0) caxpy(q, gens[k], w(i, k));
    cmul_acc(h, gens[i], q, -1.0);
  }
  return scalar_of(h, 1e-10 * std::max(1.0, cmax_abs(h)));
}

}  // namespace

TorusLattice TorusLattice::create(std::vector<std::vector<long long>> generators) {
  TorusLattice out;
  out.k_ = static_cast<int>(generators.size());
  if (out.k_ == 0) return out;
  const int k = out.k_;
  out.gens_.assign(static_cast<std::size_t>(k) * k, 0);
  for (int i = 0; i < k; ++i) {
    if (static_cast<int>(generators[i].size()) != k)
      throw input_error("TorusLattice: generator matrix must be square");
    for (int j = 0; j < k; ++j) out.gens_[static_cast<std::size_t>(i) * k + j] = generators[i][j];
  }

  const long long det = int_det(out.gens_, k);
  if (det == 0) throw input_error("TorusLattice: generator matrix is singular");
  const std::vector<long long> adj = int_adjugate(out.gens_, k);

  // Exact integer check adj(M) * M = det * I.
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      long long acc = 0;
      for (int s = 0; s < k; ++s)
        acc += adj[static_cast<std::size_t>(i) * k + s] * out.gens_[static_cast<std::size_t>(s) * k + j];
      if (acc != (i == j ? det : 0))
        throw numeric_error("TorusLattice: adjugate identity failed");
    }

  // Column i of M^{-T} is row i of M^{-1} = adj(M)/det.
  out.dual_ = Mat(k, k);
  for (int i = 0; i < k; ++i)
    for (int s = 0; s < k; ++s)
      out.dual_(s, i) = static_cast<double>(adj[static_cast<std::size_t>(i) * k + s]) /
                        static_cast<double>(det);
  return out;
}

std::vector<double> TorusLattice::dual_vector(std::span<const long long> coeffs) const {
  if (static_cast<int>(coeffs.size()) != k_)
    throw input_error("TorusLattice: coefficient vector has wrong length");
  std::vector<double> mu(k_, 0.0);
  for (int s = 0; s < k_; ++s)
    for (int i = 0; i < k_; ++i)
      mu[s] += static_cast<double>(coeffs[i]) * dual_(s, i);
  return mu;
}

std::string IrrepLabel::str() const {
  std::string out = "{";
  for (std::size_t i = 0; i < spins.size(); ++i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%sj=%g", i ? "," : "", spins[i]);
    out += buf;
  }
  for (std::size_t i = 0; i < chars.size(); ++i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%smu=%lld", (i || !spins.empty()) ? "," : "", chars[i]);
    out += buf;
  }
  return out + "}";
}

bool label_less(const IrrepLabel& a, const IrrepLabel& b) {
  if (a.spins != b.spins) return a.spins < b.spins;
  return a.chars < b.chars;
}

Irrep su2_irrep(double j) {
  const double twoj = 2.0 * j;
  const long long tj = std::llround(twoj);
  if (tj < 0 || std::abs(twoj - static_cast<double>(tj)) > 1e-9)
    throw input_error("su2_irrep: spin must be a nonnegative half-integer");

  const int d = static_cast<int>(tj) + 1;
  CMat j3(d, d), jp(d, d), jm(d, d);
  for (int r = 0; r < d; ++r) j3(r, r) = j - r;  // weights descend
  for (int r = 1; r < d; ++r) {
    const double m = j - r;  // J+ raises |j,m> to |j,m+1>
    const double amp = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
    jp(r - 1, r) = amp;
    jm(r, r - 1) = amp;
  }

  Irrep out;
  out.label.spins = {j};
  out.dim = d;
  out.generators.resize(3, CMat(d, d));
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) {
      const std::complex<double> j1 = 0.5 * (jp(r, c) + jm(r, c));
      const std::complex<double> j2 = -0.5 * kI * (jp(r, c) - jm(r, c));
      out.generators[0](r, c) = -kI * j1;
      out.generators[1](r, c) = -kI * j2;
      out.generators[2](r, c) = -kI * j3(r, c);
    }
  out.casimir0 = numeric_casimir(out.generators, 2.0 * Mat::identity(3));
  return out;
}

Irrep spin_irrep_for_ideal(const LieAlgebra& alg, const IdealRange& ideal, double j) {
  if (ideal.dim() != 3)
    throw input_error("spin_irrep_for_ideal: spin representations require a 3-dimensional simple ideal");

  // Frame E = X * T with B(E_a, E_b) = -2 delta_ab; in such a frame the
  // structure constants of a compact 3-dimensional simple algebra are
  // +/- the cyclic ones, and a sign flip of E_3 fixes the orientation.
  const Mat b = killing_form(alg);
  Mat negb(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int jj = 0; jj < 3; ++jj) negb(i, jj) = -0.5 * b(ideal.lo + i, ideal.lo + jj);
  auto l = cholesky_lower(negb);
  if (!l) throw input_error("spin_irrep_for_ideal: Killing form is not negative definite on the ideal");
  Mat t = transpose(inverse_lower_triangular(*l));  // E = X * t

  auto frame_constants = [&](const Mat& frame) {
    // c~(a,b,e) with [E_a, E_b] = sum_e c~(a,b,e) E_e; frame columns in ideal coords.
    const Mat frame_inv = spd_inverse(transpose(frame) * frame) * transpose(frame);
    std::vector<double> ct(27, 0.0);
    for (int a = 0; a < 3; ++a)
      for (int bb = 0; bb < 3; ++bb) {
        std::vector<double> bracket(3, 0.0);
        for (int i = 0; i < 3; ++i)
          for (int jj = 0; jj < 3; ++jj)
            for (int kk = 0; kk < 3; ++kk)
              bracket[kk] += frame(i, a) * frame(jj, bb) *
                             alg.c(ideal.lo + i, ideal.lo + jj, ideal.lo + kk);
        for (int e = 0; e < 3; ++e) {
          double acc = 0.0;
          for (int kk = 0; kk < 3; ++kk) acc += frame_inv(e, kk) * bracket[kk];
          ct[static_cast<std::size_t>(a) * 9 + bb * 3 + e] = acc;
        }
      }
    return ct;
  };

  std::vector<double> ct = frame_constants(t);
  if (ct[0 * 9 + 1 * 3 + 2] < 0.0) {
    for (int i = 0; i < 3; ++i) t(i, 2) = -t(i, 2);
    ct = frame_constants(t);
  }
  double resid = 0.0;
  for (int a = 0; a < 3; ++a)
    for (int bb = 0; bb < 3; ++bb)
      for (int e = 0; e < 3; ++e) {
        double expected = 0.0;
        if (a == 0 && bb == 1 && e == 2) expected = 1.0;
        if (a == 1 && bb == 2 && e == 0) expected = 1.0;
        if (a == 2 && bb == 0 && e == 1) expected = 1.0;
        if (a == 1 && bb == 0 && e == 2) expected = -1.0;
        if (a == 2 && bb == 1 && e == 0) expected = -1.0;
        if (a == 0 && bb == 2 && e == 1) expected = -1.0;
        resid = std::max(resid, std::abs(ct[static_cast<std::size_t>(a) * 9 + bb * 3 + e] - expected));
      }
  if (resid > 1e-10)
    throw input_error("spin_irrep_for_ideal: simple ideal is not su(2)-compatible");

  const Irrep base = su2_irrep(j);
  const Mat tinv = spd_inverse(transpose(t) * t) * transpose(t);

  // X_i = sum_a tinv(a, i) E_a, so pi(X_i) = sum_a tinv(a, i) pi(E_a).
  Irrep out;
  out.label.spins = {j};
  out.dim = base.dim;
  out.generators.assign(3, CMat(base.dim, base.dim));
  for (int i = 0; i < 3; ++i)
    for (int a = 0; a < 3; ++a)
      if (tinv(a, i) != 0.0) caxpy(out.generators[i], base.generators[a], tinv(a, i));

  Mat gram(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int jj = 0; jj < 3; ++jj) gram(i, jj) = -b(ideal.lo + i, ideal.lo + jj);
  out.casimir0 = numeric_casimir(out.generators, gram);
  return out;
}

Irrep torus_character(const TorusLattice& lattice, std::span<const long long> coeffs) {
  const std::vector<double> mu = lattice.dual_vector(coeffs);
  Irrep out;
  out.label.chars.assign(coeffs.begin(), coeffs.end());
  out.dim = 1;
  out.generators.assign(lattice.k(), CMat(1, 1));
  double mu2 = 0.0;
  for (int s = 0; s < lattice.k(); ++s) {
    out.generators[s](0, 0) = 2.0 * std::numbers::pi * kI * mu[s];
    mu2 += mu[s] * mu[s];
  }
  out.casimir0 = 4.0 * std::numbers::pi * std::numbers::pi * mu2;
  return out;
}

Irrep product_irrep(const LieAlgebra& alg, std::span<const Irrep> factors) {
  const auto simple = alg.simple_ideals();
  const int k = alg.center_dim();
  const std::size_t expected = simple.size() + (k > 0 ? 1 : 0);
  if (factors.size() != expected)
    throw input_error("product_irrep: factor list does not match the group's factor structure");
  for (std::size_t f = 0; f < simple.size(); ++f)
    if (static_cast<int>(factors[f].generators.size()) != simple[f].dim())
      throw input_error("product_irrep: factor generators do not match the ideal dimension");
  if (k > 0 && static_cast<int>(factors.back().generators.size()) != k)
    throw input_error("product_irrep: torus factor generators do not match the center dimension");

  Irrep out;
  out.dim = 1;
  for (const Irrep& f : factors) out.dim *= f.dim;
  for (const Irrep& f : factors) {
    out.label.spins.insert(out.label.spins.end(), f.label.spins.begin(), f.label.spins.end());
    out.label.chars.insert(out.label.chars.end(), f.label.chars.begin(), f.label.chars.end());
  }

  auto embed = [&factors](std::size_t which, const CMat& local) {
    CMat acc = CMat::identity(1);
    for (std::size_t f = 0; f < factors.size(); ++f)
      acc = kron(acc, f == which ? local : CMat::identity(factors[f].dim));
    return acc;
  };

  out.generators.assign(alg.dim(), CMat(out.dim, out.dim));
  for (std::size_t f = 0; f < simple.size(); ++f) {
    const auto& r = simple[f];
    for (int t = 0; t < r.dim(); ++t)
      out.generators[r.lo + t] = embed(f, factors[f].generators[t]);
  }
  if (k > 0) {
    const auto& center = alg.center_indices();
    for (int s = 0; s < k; ++s)
      out.generators[center[s]] = embed(factors.size() - 1, factors.back().generators[s]);
  }

  std::vector<double> ones(simple.size(), 1.0);
  const Metric reference = bi_invariant_metric(alg, ones);
  out.casimir0 = numeric_casimir(out.generators, reference.gram);
  return out;
}

Irrep adjoint_irrep(const LieAlgebra& alg, int simple_ideal_index) {
  const auto simple = alg.simple_ideals();
  if (simple_ideal_index < 0 || simple_ideal_index >= static_cast<int>(simple.size()))
    throw input_error("adjoint_irrep: no such simple ideal");
  const IdealRange ideal = simple[simple_ideal_index];
  const int nl = ideal.dim();

  // Orthonormal frame for -B on the ideal; ad matrices are skew-symmetric there.
  const Mat b = killing_form(alg);
  Mat negb(nl, nl);
  for (int i = 0; i < nl; ++i)
    for (int j = 0; j < nl; ++j) negb(i, j) = -b(ideal.lo + i, ideal.lo + j);
  auto l = cholesky_lower(negb);
  if (!l) throw input_error("adjoint_irrep: Killing form is not negative definite on the ideal");
  const Mat frame = transpose(inverse_lower_triangular(*l));
  const Mat frame_inv = *l;  // inverse of upper chol^{-T} is chol^{T}; see below

  Irrep out;
  out.label.spins.assign(simple.size(), 0.0);
  out.label.spins[simple_ideal_index] = 1.0;
  out.label.chars.assign(alg.center_dim(), 0);
  out.dim = nl;
  out.generators.assign(alg.dim(), CMat(nl, nl));

  std::vector<double> e(alg.dim(), 0.0);
  for (int i = 0; i < alg.dim(); ++i) {
    e[i] = 1.0;
    const Mat adx = ad_restricted(alg, e, ideal);
    e[i] = 0.0;
    // conjugate into the frame: frame^{-1} * adx * frame, frame^{-1} = L^T
    const Mat m = transpose(frame_inv) * adx * frame;
    for (int r = 0; r < nl; ++r)
      for (int c = 0; c < nl; ++c) out.generators[i](r, c) = m(r, c);
  }

  std::vector<double> ones(simple.size(), 1.0);
  const Metric reference = bi_invariant_metric(alg, ones, Mat::identity(alg.center_dim()));
  out.casimir0 = numeric_casimir(out.generators, reference.gram);
  return out;
}

double skew_residual(const Irrep& irrep) {
  double resid = 0.0;
  for (const CMat& g : irrep.generators) {
    for (int i = 0; i < g.rows(); ++i)
      for (int j = i; j < g.cols(); ++j)
        resid = std::max(resid, std::abs(g(i, j) + std::conj(g(j, i))));
  }
  return resid;
}

double commutation_residual(const Irrep& irrep, const LieAlgebra& alg) {
  if (static_cast<int>(irrep.generators.size()) != alg.dim())
    throw input_error("commutation_residual: generator count does not match the algebra");
  double resid = 0.0;
  const int d = irrep.dim;
  for (int i = 0; i < alg.dim(); ++i) {
    for (int j = i + 1; j < alg.dim(); ++j) {
      CMat comm(d, d);
      cmul_acc(comm, irrep.generators[i], irrep.generators[j], 1.0);
      cmul_acc(comm, irrep.generators[j], irrep.generators[i], -1.0);
      for (int k = 0; k < alg.dim(); ++k) {
        const double c = alg.c(i, j, k);
        if (c != 0.0) caxpy(comm, irrep.generators[k], -c);
      }
      resid = std::max(resid, cmax_abs(comm));
    }
  }
  return resid;
}

double block_casimir(const Irrep& irrep, const Mat& gram) {
  return numeric_casimir(irrep.generators, gram);
}

double scalar_of(const CMat& h, double tol) {
  const int d = h.rows();
  const std::complex<double> mean = ctrace(h) / static_cast<double>(d);
  double resid = std::abs(mean.imag());
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const std::complex<double> expect = (i == j) ? std::complex<double>(mean.real(), 0.0) : 0.0;
      resid = std::max(resid, std::abs(h(i, j) - expect));
    }
  if (resid > tol)
    throw numeric_error("scalar_of: matrix is not a multiple of the identity within tolerance");
  return mean.real();
}

}  // namespace liespec
