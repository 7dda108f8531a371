#include "liespec/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "liespec/errors.hpp"

namespace liespec {

namespace {

constexpr double kStructureTol = 1e-12;

std::string entry_str(int i, int j, int k) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "c[%d][%d][%d]", i + 1, j + 1, k + 1);
  return buf;
}

}  // namespace

LieAlgebra LieAlgebra::create(int dim, const std::vector<StructureEntry>& entries,
                              std::vector<IdealRange> ideals) {
  if (dim <= 0) throw input_error("LieAlgebra: dimension must be positive");

  LieAlgebra alg;
  alg.dim_ = dim;
  alg.c_.assign(static_cast<std::size_t>(dim) * dim * dim, 0.0);

  auto at = [&alg, dim](int i, int j, int k) -> double& {
    return alg.c_[(static_cast<std::size_t>(i) * dim + j) * dim + k];
  };

  std::vector<bool> seen(alg.c_.size(), false);
  for (const auto& e : entries) {
    if (e.i < 0 || e.i >= dim || e.j < 0 || e.j >= dim || e.k < 0 || e.k >= dim)
      throw input_error("LieAlgebra: structure constant index out of range in " +
                        entry_str(e.i, e.j, e.k));
    const std::size_t fwd = (static_cast<std::size_t>(e.i) * dim + e.j) * dim + e.k;
    const std::size_t mir = (static_cast<std::size_t>(e.j) * dim + e.i) * dim + e.k;
    if (seen[fwd] && std::abs(alg.c_[fwd] - e.value) > kStructureTol)
      throw input_error("LieAlgebra: conflicting values for " + entry_str(e.i, e.j, e.k));
    if (seen[mir] && std::abs(alg.c_[mir] + e.value) > kStructureTol)
      throw input_error("LieAlgebra: antisymmetry conflict at " + entry_str(e.j, e.i, e.k));
    at(e.i, e.j, e.k) = e.value;
    at(e.j, e.i, e.k) = -e.value;
    seen[fwd] = seen[mir] = true;
  }

  // Ideal ranges must partition {1..m}.
  if (ideals.empty()) throw input_error("LieAlgebra: at least one ideal range required");
  std::vector<IdealRange> sorted = ideals;
  std::sort(sorted.begin(), sorted.end(),
            [](const IdealRange& a, const IdealRange& b) { return a.lo < b.lo; });
  int expected = 0;
  for (const auto& r : sorted) {
    if (r.lo != expected || r.hi < r.lo || r.hi >= dim)
      throw input_error("LieAlgebra: ideal ranges must partition the basis index range");
    expected = r.hi + 1;
  }
  if (expected != dim)
    throw input_error("LieAlgebra: ideal ranges must cover every basis index");
  alg.ideals_ = std::move(ideals);

  for (const auto& r : alg.ideals_) {
    for (int i = r.lo; i <= r.hi; ++i) {
      if (r.simple)
        alg.ss_indices_.push_back(i);
      else
        alg.center_indices_.push_back(i);
    }
  }

  // Antisymmetry including the diagonal [X_i, X_i] = 0.
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k)
        if (std::abs(alg.c(i, j, k) + alg.c(j, i, k)) > kStructureTol)
          throw input_error("LieAlgebra: antisymmetry violated at " + entry_str(i, j, k));

  // Jacobi identity.
  for (int i = 0; i < dim; ++i) {
    for (int j = i + 1; j < dim; ++j) {
      for (int k = j + 1; k < dim; ++k) {
        for (int l = 0; l < dim; ++l) {
          double acc = 0.0;
          for (int m = 0; m < dim; ++m) {
            acc += alg.c(i, j, m) * alg.c(m, k, l);
            acc += alg.c(j, k, m) * alg.c(m, i, l);
            acc += alg.c(k, i, m) * alg.c(m, j, l);
          }
          if (std::abs(acc) > kStructureTol)
            throw input_error("LieAlgebra: Jacobi identity violated on triple " +
                              entry_str(i, j, k));
        }
      }
    }
  }

  // Brackets respect the partition: [ideal_a, ideal_b] = 0 for a != b and the
  // bracket of each ideal stays inside it; the center commutes with everything.
  auto ideal_of = [&alg](int idx) {
    for (std::size_t a = 0; a < alg.ideals_.size(); ++a)
      if (idx >= alg.ideals_[a].lo && idx <= alg.ideals_[a].hi) return a;
    return alg.ideals_.size();
  };
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      const std::size_t a = ideal_of(i);
      const std::size_t b = ideal_of(j);
      const bool must_vanish =
          a != b || !alg.ideals_[a].simple || !alg.ideals_[b].simple;
      for (int k = 0; k < dim; ++k) {
        const double v = alg.c(i, j, k);
        if (std::abs(v) <= kStructureTol) continue;
        if (must_vanish)
          throw input_error("LieAlgebra: bracket does not respect the ideal partition at " +
                            entry_str(i, j, k));
        if (ideal_of(k) != a)
          throw input_error("LieAlgebra: bracket leaves its ideal at " + entry_str(i, j, k));
      }
    }
  }

  // Killing form negative definite on each simple ideal.
  const Mat b = killing_form(alg);
  for (const auto& r : alg.ideals_) {
    if (!r.simple) continue;
    Mat blk(r.dim(), r.dim());
    for (int i = 0; i < r.dim(); ++i)
      for (int j = 0; j < r.dim(); ++j) blk(i, j) = -b(r.lo + i, r.lo + j);
    if (!cholesky_lower(blk, 1e-9))
      throw input_error("LieAlgebra: Killing form is not negative definite on a declared simple ideal");
  }

  return alg;
}

std::vector<IdealRange> LieAlgebra::simple_ideals() const {
  std::vector<IdealRange> out;
  for (const auto& r : ideals_)
    if (r.simple) out.push_back(r);
  return out;
}

Mat ad(const LieAlgebra& alg, std::span<const double> v) {
  const int m = alg.dim();
  if (static_cast<int>(v.size()) != m)
    throw input_error("ad: coefficient vector length does not match the algebra dimension");
  Mat out(m, m);
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k) {
      double acc = 0.0;
      for (int i = 0; i < m; ++i) acc += v[i] * alg.c(i, j, k);
      out(k, j) = acc;
    }
  return out;
}

Mat ad_restricted(const LieAlgebra& alg, std::span<const double> v,
                  const IdealRange& ideal) {
  const Mat full = ad(alg, v);
  Mat out(ideal.dim(), ideal.dim());
  for (int i = 0; i < ideal.dim(); ++i)
    for (int j = 0; j < ideal.dim(); ++j) out(i, j) = full(ideal.lo + i, ideal.lo + j);
  return out;
}

Mat killing_form(const LieAlgebra& alg) {
  const int m = alg.dim();
  std::vector<Mat> ads;
  ads.reserve(m);
  std::vector<double> e(m, 0.0);
  for (int i = 0; i < m; ++i) {
    e[i] = 1.0;
    ads.push_back(ad(alg, e));
    e[i] = 0.0;
  }
  Mat b(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j) {
      double tr = 0.0;
      for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c) tr += ads[i](r, c) * ads[j](c, r);
      b(i, j) = tr;
      b(j, i) = tr;
    }
  }
  return b;
}

Metric make_metric(Mat gram) {
  if (gram.rows() != gram.cols())
    throw input_error("Metric: Gram matrix must be square");
  if (!is_symmetric(gram, 1e-14))
    throw input_error("Metric: Gram matrix is not symmetric");
  Mat sym = symmetrize(gram);
  if (!cholesky_lower(sym))
    throw input_error("Metric: Gram matrix is not positive definite");
  return Metric{std::move(sym)};
}

Metric bi_invariant_metric(const LieAlgebra& alg, std::span<const double> scales,
                           const Mat& torus_gram) {
  const auto simple = alg.simple_ideals();
  if (scales.size() != simple.size())
    throw input_error("bi_invariant_metric: need exactly one scale per simple ideal");
  for (double s : scales)
    if (!(s > 0.0)) throw input_error("bi_invariant_metric: scales must be positive");

  const int k = alg.center_dim();
  Mat torus = torus_gram;
  if (torus.empty() && k > 0) torus = Mat::identity(k);
  if (k > 0) {
    if (torus.rows() != k || torus.cols() != k)
      throw input_error("bi_invariant_metric: torus Gram must be k x k");
    if (!is_symmetric(torus, 1e-14) || !cholesky_lower(symmetrize(torus)))
      throw input_error("bi_invariant_metric: torus Gram must be SPD");
  }

  const Mat b = killing_form(alg);
  Mat gram(alg.dim(), alg.dim());
  for (std::size_t l = 0; l < simple.size(); ++l) {
    const auto& r = simple[l];
    for (int i = r.lo; i <= r.hi; ++i)
      for (int j = r.lo; j <= r.hi; ++j) gram(i, j) = -scales[l] * b(i, j);
  }
  const auto& center = alg.center_indices();
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) gram(center[i], center[j]) = torus(i, j);
  return make_metric(std::move(gram));
}

double volume_ratio(const Metric& g, const Metric& g0) {
  if (g.dim() != g0.dim())
    throw input_error("volume_ratio: metrics live on different algebras");
  return std::sqrt(spd_det(g.gram) / spd_det(g0.gram));
}

std::vector<int> adapted_order(const LieAlgebra& alg) {
  std::vector<int> order = alg.semisimple_indices();
  const auto& center = alg.center_indices();
  order.insert(order.end(), center.begin(), center.end());
  return order;
}

namespace {

Mat permute_sym(const Mat& a, const std::vector<int>& order) {
  const int m = static_cast<int>(order.size());
  Mat out(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) out(i, j) = a(order[i], order[j]);
  return out;
}

void check_block_diagonal(const Mat& gram, const LieAlgebra& alg, const char* who) {
  const double tol = 1e-10 * std::max(1.0, max_abs(gram));
  for (std::size_t a = 0; a < alg.ideals().size(); ++a) {
    for (std::size_t b = a + 1; b < alg.ideals().size(); ++b) {
      const auto& ra = alg.ideals()[a];
      const auto& rb = alg.ideals()[b];
      for (int i = ra.lo; i <= ra.hi; ++i)
        for (int j = rb.lo; j <= rb.hi; ++j)
          if (std::abs(gram(i, j)) > tol)
            throw input_error(std::string(who) +
                              ": reference metric must be block-diagonal over the ideal partition");
    }
  }
}

}  // namespace

Mat g0_orthonormal_basis(const Metric& g0, const LieAlgebra& alg) {
  check_block_diagonal(g0.gram, alg, "g0_orthonormal_basis");
  const std::vector<int> order = adapted_order(alg);
  const int m = alg.dim();

  // Per-ideal upper-triangular Cholesky orthonormalization keeps each basis
  // vector inside its ideal and makes the output deterministic.
  Mat t(m, m);
  int offset = 0;
  auto emit_block = [&](const std::vector<int>& idx) {
    const int d = static_cast<int>(idx.size());
    if (d == 0) return;
    Mat blk(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) blk(i, j) = g0.gram(idx[i], idx[j]);
    auto l = cholesky_lower(blk);
    if (!l) throw input_error("g0_orthonormal_basis: reference metric block is not SPD");
    const Mat tinv = transpose(inverse_lower_triangular(*l));  // upper
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) t(offset + i, offset + j) = tinv(i, j);
    offset += d;
  };
  for (const auto& r : alg.ideals()) {
    if (!r.simple) continue;
    std::vector<int> idx;
    for (int i = r.lo; i <= r.hi; ++i) idx.push_back(i);
    emit_block(idx);
  }
  emit_block(alg.center_indices());

  // Columns are adapted-basis vectors in *adapted-order* reference
  // coordinates; expand back to raw reference coordinates.
  Mat cols(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) cols(order[i], j) = t(i, j);
  return cols;
}

Mat gram_in_g0_basis(const Metric& g, const Metric& g0, const LieAlgebra& alg) {
  const Mat t = g0_orthonormal_basis(g0, alg);
  return symmetrize(transpose(t) * g.gram * t);
}

Mat AdaptedBasisBlocks::full_matrix() const {
  const int n = A.rows();
  const int k = R.cols();
  Mat out(n + k, n + k);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(i, j) = A(i, j);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < k; ++j) out(i, n + j) = R(i, j);
  for (int j = 0; j < k; ++j) out(n + j, n + j) = 1.0;
  return out;
}

AdaptedBasisBlocks adapted_change_of_basis(const Metric& g, const Metric& g0,
                                           const LieAlgebra& alg) {
  if (g.dim() != alg.dim() || g0.dim() != alg.dim())
    throw input_error("adapted_change_of_basis: dimension mismatch");
  const int n = alg.ss_dim();
  const int k = alg.center_dim();

  const Mat s = gram_in_g0_basis(g, g0, alg);

  Mat s_nn(n, n), s_nk(n, k), s_kk(k, k);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s_nn(i, j) = s(i, j);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < k; ++j) s_nk(i, j) = s(i, n + j);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) s_kk(i, j) = s(n + i, n + j);

  AdaptedBasisBlocks out;
  if (n > 0) {
    auto l = cholesky_lower(s_nn);
    if (!l) throw input_error("adapted_change_of_basis: metric is not positive definite");
    out.A = transpose(inverse_lower_triangular(*l));
    // Cholesky already gives det(A) > 0; the flip is the documented guard.
    double det = 1.0;
    for (int i = 0; i < n; ++i) det *= out.A(i, i);
    if (det < 0.0)
      for (int i = 0; i < n; ++i) out.A(i, n - 1) = -out.A(i, n - 1);

    // W_s = -S_nn^{-1} S_nk e_s completes Z_s to the g-orthogonal complement
    // of the semisimple part while keeping its center coordinates.
    if (k > 0) {
      const Mat w = spd_inverse(s_nn) * s_nk;
      out.R = -1.0 * w;
      out.quotient_gram = symmetrize(s_kk - transpose(s_nk) * w);
    } else {
      out.R = Mat(n, 0);
      out.quotient_gram = Mat(0, 0);
    }
  } else {
    out.A = Mat(0, 0);
    out.R = Mat(0, k);
    out.quotient_gram = s_kk;
  }
  return out;
}

Mat quotient_torus_metric(const Metric& g, const LieAlgebra& alg) {
  const int k = alg.center_dim();
  if (k == 0)
    throw input_error("quotient_torus_metric: the algebra has no center");
  const int n = alg.ss_dim();
  const std::vector<int> order = adapted_order(alg);
  const Mat s = permute_sym(g.gram, order);

  Mat s_kk(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) s_kk(i, j) = s(n + i, n + j);
  if (n == 0) return s_kk;

  Mat s_nn(n, n), s_nk(n, k);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s_nn(i, j) = s(i, j);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < k; ++j) s_nk(i, j) = s(i, n + j);
  return symmetrize(s_kk - transpose(s_nk) * spd_inverse(s_nn) * s_nk);
}

}  // namespace liespec
