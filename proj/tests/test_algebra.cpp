#include <doctest.h>

#include <cmath>

#include "liespec/algebra.hpp"
#include "liespec/errors.hpp"
#include "liespec/group.hpp"
#include "liespec/rng.hpp"
#include "test_oracles.hpp"

using namespace liespec;

namespace {

std::vector<double> basis_vec(int m, int i) {
  std::vector<double> v(m, 0.0);
  v[i] = 1.0;
  return v;
}

Mat so3_rotation(Rng& rng) {
  Mat skew(3, 3);
  skew(0, 1) = rng.uniform(-1.0, 1.0);
  skew(0, 2) = rng.uniform(-1.0, 1.0);
  skew(1, 2) = rng.uniform(-1.0, 1.0);
  skew(1, 0) = -skew(0, 1);
  skew(2, 0) = -skew(0, 2);
  skew(2, 1) = -skew(1, 2);
  // exp of a skew matrix; the symmetric-eigen route does not apply, use series
  Mat q = Mat::identity(3);
  Mat term = Mat::identity(3);
  for (int k = 1; k < 40; ++k) {
    term = (1.0 / k) * (term * skew);
    q = q + term;
  }
  return q;
}

}  // namespace

TEST_CASE("every preset constructs and validates") {
  for (const auto& name : GroupModel::preset_names()) {
    const GroupModel group = GroupModel::preset(name);
    CHECK(group.algebra.dim() >= 1);
    CHECK(group.lattice.k() == group.algebra.center_dim());
    // the reference bi-invariant metric is SPD and bi-invariant by analysis
    const Metric g0 = group.default_bi_invariant();
    CHECK_NOTHROW(analyze_bi_invariant(group, g0));
  }
  CHECK_THROWS_AS(GroupModel::preset("e8"), input_error);
}

TEST_CASE("su2 preset: ad matrix matches the hand expansion") {
  const GroupModel su2 = GroupModel::preset("su2");
  const Mat m = ad(su2.algebra, basis_vec(3, 0));
  // [X1, X2] = X3 and [X1, X3] = -X2: only entries (3,2) = 1 and (2,3) = -1
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double expected = 0.0;
      if (i == 2 && j == 1) expected = 1.0;
      if (i == 1 && j == 2) expected = -1.0;
      CHECK(m(i, j) == doctest::Approx(expected));
    }

  // linearity and the zero vector
  const Mat zero = ad(su2.algebra, std::vector<double>{0.0, 0.0, 0.0});
  CHECK(max_abs(zero) == 0.0);
  CHECK_THROWS_AS(ad(su2.algebra, std::vector<double>{1.0}), input_error);
}

TEST_CASE("abelian preset: every ad matrix vanishes") {
  const GroupModel t2 = GroupModel::preset("t2");
  Rng rng(5);
  for (int rep = 0; rep < 5; ++rep) {
    std::vector<double> v{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
    CHECK(max_abs(ad(t2.algebra, v)) == 0.0);
  }
}

TEST_CASE("killing form goldens") {
  const Mat b_su2 = killing_form(GroupModel::preset("su2").algebra);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(b_su2(i, j) == doctest::Approx(i == j ? -2.0 : 0.0));

  const Mat b_t2 = killing_form(GroupModel::preset("t2").algebra);
  CHECK(max_abs(b_t2) == 0.0);

  const Mat b_double = killing_form(GroupModel::preset("su2xsu2").algebra);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      CHECK(b_double(i, j) == doctest::Approx(i == j ? -2.0 : 0.0));
}

TEST_CASE("killing form is ad-invariant") {
  const GroupModel su2xt1 = GroupModel::preset("su2xt1");
  const Mat b = killing_form(su2xt1.algebra);
  Rng rng(23);
  const int m = su2xt1.algebra.dim();
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> v(m), x(m), y(m);
    for (int i = 0; i < m; ++i) {
      v[i] = rng.uniform(-1.0, 1.0);
      x[i] = rng.uniform(-1.0, 1.0);
      y[i] = rng.uniform(-1.0, 1.0);
    }
    const Mat adv = ad(su2xt1.algebra, v);
    // B(ad_v x, y) + B(x, ad_v y) = 0
    double acc = 0.0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        double adx = 0.0, ady = 0.0;
        for (int k = 0; k < m; ++k) {
          adx += adv(i, k) * x[k];
          ady += adv(j, k) * y[k];
        }
        acc += adx * b(i, j) * y[j] + x[i] * b(i, j) * ady;
      }
    CHECK(std::abs(acc) < 1e-10);
  }
}

TEST_CASE("structure validation rejects bad input") {
  // Jacobi violation: [X1,X2] = X3, [X2,X3] = X1, [X3,X1] = -X2
  std::vector<StructureEntry> bad{{0, 1, 2, 1.0}, {1, 2, 0, 1.0}, {2, 0, 1, -1.0}};
  CHECK_THROWS_AS(LieAlgebra::create(3, bad, {{0, 2, true}}), input_error);

  // bracket leaving the declared center
  std::vector<StructureEntry> center_bad{{0, 1, 2, 1.0}, {1, 2, 0, 1.0}, {2, 0, 1, 1.0}};
  CHECK_THROWS_AS(LieAlgebra::create(3, center_bad, {{0, 1, true}, {2, 2, false}}),
                  input_error);

  // abelian algebra declared simple: Killing form is zero, not negative definite
  CHECK_THROWS_AS(LieAlgebra::create(2, {}, {{0, 1, true}}), input_error);

  // ranges must partition
  CHECK_THROWS_AS(LieAlgebra::create(3, center_bad, {{0, 1, true}}), input_error);
}

TEST_CASE("bi-invariant metric goldens") {
  const GroupModel su2 = GroupModel::preset("su2");
  const Metric half = bi_invariant_metric(su2.algebra, std::vector<double>{0.5});
  CHECK(max_abs_diff(half.gram, Mat::identity(3)) < 1e-14);

  const GroupModel su2xt1 = GroupModel::preset("su2xt1");
  const Metric prod =
      bi_invariant_metric(su2xt1.algebra, std::vector<double>{0.5}, Mat::identity(1));
  CHECK(max_abs_diff(prod.gram, Mat::identity(4)) < 1e-14);

  // scale linearity on the semisimple block
  const Metric one = bi_invariant_metric(su2.algebra, std::vector<double>{1.0});
  const Metric three = bi_invariant_metric(su2.algebra, std::vector<double>{3.0});
  CHECK(max_abs_diff(three.gram, 3.0 * one.gram) < 1e-12);

  CHECK_THROWS_AS(bi_invariant_metric(su2.algebra, std::vector<double>{-1.0}), input_error);
}

TEST_CASE("metric validation") {
  Mat asym = Mat::identity(2);
  asym(0, 1) = 1e-3;
  CHECK_THROWS_AS(make_metric(asym), input_error);

  Mat indef(2, 2);
  indef(0, 0) = 1.0;
  indef(1, 1) = -1.0;
  CHECK_THROWS_AS(make_metric(indef), input_error);
}

TEST_CASE("volume ratio") {
  const GroupModel su2 = GroupModel::preset("su2");
  const Metric g0 = bi_invariant_metric(su2.algebra, std::vector<double>{0.5});
  CHECK(volume_ratio(g0, g0) == doctest::Approx(1.0));

  const Metric scaled = make_metric(2.5 * g0.gram);
  CHECK(volume_ratio(scaled, g0) == doctest::Approx(std::pow(2.5, 1.5)));

  Mat diag = Mat::identity(3);
  diag(0, 0) = 0.5;
  CHECK(volume_ratio(make_metric(diag), g0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));

  // reciprocal property
  Rng rng(31);
  for (int rep = 0; rep < 10; ++rep) {
    Mat s(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) {
        const double v = rng.uniform(-0.5, 0.5);
        s(i, j) = v;
        s(j, i) = v;
      }
    const Metric g = make_metric(sym_exp(s));
    CHECK(volume_ratio(g, g0) * volume_ratio(g0, g) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("adapted change of basis: identity and pure semisimple") {
  const GroupModel su2 = GroupModel::preset("su2");
  const Metric g0 = bi_invariant_metric(su2.algebra, std::vector<double>{1.0});
  const AdaptedBasisBlocks blocks = adapted_change_of_basis(g0, g0, su2.algebra);
  CHECK(max_abs_diff(blocks.A, Mat::identity(3)) < 1e-12);
  CHECK(blocks.R.cols() == 0);
  double a2 = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a2 += blocks.A(i, j) * blocks.A(i, j);
  CHECK(a2 == doctest::Approx(3.0));
}

TEST_CASE("adapted change of basis matches a Gram-Schmidt oracle on su2 x t1") {
  const GroupModel group = GroupModel::preset("su2xt1");
  const Metric g0 =
      bi_invariant_metric(group.algebra, std::vector<double>{0.5}, Mat::identity(1));

  // Gram [[I, v], [v^T, 1 + |v|^2]] with v = (0.1, 0, 0)
  Mat gram = Mat::identity(4);
  gram(0, 3) = gram(3, 0) = 0.1;
  gram(3, 3) = 1.01;
  const Metric g = make_metric(gram);

  const AdaptedBasisBlocks blocks = adapted_change_of_basis(g, g0, group.algebra);
  REQUIRE(blocks.R.rows() == 3);
  REQUIRE(blocks.R.cols() == 1);
  CHECK(blocks.R(0, 0) == doctest::Approx(-0.1));
  CHECK(blocks.R(1, 0) == doctest::Approx(0.0));
  CHECK(blocks.R(2, 0) == doctest::Approx(0.0));
  CHECK(max_abs_diff(blocks.A, Mat::identity(3)) < 1e-12);

  // Gram-Schmidt oracle on the semisimple block of the 4x4 matrix: the
  // orthonormalization of the first three reference vectors must match A.
  oracle::matd s = oracle::zeros(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) s[i][j] = gram(i, j);
  oracle::matd s_nn = oracle::zeros(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) s_nn[i][j] = s[i][j];
  const oracle::matd gs = oracle::gram_schmidt(s_nn);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(blocks.A(i, j) == doctest::Approx(gs[i][j]).epsilon(1e-10));

  // n = |A|^2 + |R|^2 fails here (the trace conditions do not hold)
  double total = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) total += blocks.A(i, j) * blocks.A(i, j);
  total += 0.1 * 0.1;
  CHECK(total > 3.0 + 1e-3);

  // reconstruction invariant: the transported Gram is diag(I_n, quotient)
  const Mat c = blocks.full_matrix();
  const Mat s_adapted = gram_in_g0_basis(g, g0, group.algebra);
  const Mat transported = transpose(c) * s_adapted * c;
  Mat expected = Mat::identity(4);
  expected(3, 3) = blocks.quotient_gram(0, 0);
  CHECK(max_abs_diff(transported, expected) < 1e-10);
  // and here the quotient Gram is the identity, so the full Gram is I_m
  CHECK(blocks.quotient_gram(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("adapted reconstruction holds for random metrics") {
  const GroupModel group = GroupModel::preset("su2xt1");
  const Metric g0 = group.default_bi_invariant();
  Rng rng(41);
  for (int rep = 0; rep < 20; ++rep) {
    Mat p(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = i; j < 4; ++j) {
        const double v = rng.uniform(-0.4, 0.4);
        p(i, j) = v;
        p(j, i) = v;
      }
    const Metric g = make_metric(sym_exp(p));
    const AdaptedBasisBlocks blocks = adapted_change_of_basis(g, g0, group.algebra);
    const Mat c = blocks.full_matrix();
    const Mat s = gram_in_g0_basis(g, g0, group.algebra);
    const Mat transported = transpose(c) * s * c;
    Mat expected = Mat::identity(4);
    expected(3, 3) = blocks.quotient_gram(0, 0);
    CHECK(max_abs_diff(transported, expected) < 1e-10);

    // det(A) > 0 by construction
    double det = 1.0;
    for (int i = 0; i < 3; ++i) det *= blocks.A(i, i);
    CHECK(det > 0.0);
  }
}

TEST_CASE("quotient torus metric") {
  const GroupModel group = GroupModel::preset("su2xt1");

  // block-diagonal: returns the torus block unchanged
  Mat block = Mat::identity(4);
  block(3, 3) = 2.5;
  const Mat q1 = quotient_torus_metric(make_metric(block), group.algebra);
  CHECK(q1(0, 0) == doctest::Approx(2.5));

  // Schur complement oracle
  Mat gram = Mat::identity(4);
  gram(0, 3) = gram(3, 0) = 0.1;
  gram(3, 3) = 1.01;
  const Mat q2 = quotient_torus_metric(make_metric(gram), group.algebra);
  CHECK(q2(0, 0) == doctest::Approx(1.0).epsilon(1e-12));

  // homogeneity
  const Mat q3 = quotient_torus_metric(make_metric(3.0 * gram), group.algebra);
  CHECK(q3(0, 0) == doctest::Approx(3.0 * q2(0, 0)).epsilon(1e-12));

  // no center: domain error
  const GroupModel su2 = GroupModel::preset("su2");
  CHECK_THROWS_AS(quotient_torus_metric(su2.default_bi_invariant(), su2.algebra), input_error);
}

TEST_CASE("quotient metric agrees with the schur complement in a g0-adapted basis") {
  const GroupModel group = GroupModel::preset("su2xt1");
  Mat torus(1, 1);
  torus(0, 0) = 2.5;
  const Metric g0 = bi_invariant_metric(group.algebra, std::vector<double>{1.0}, torus);

  Rng rng(53);
  for (int rep = 0; rep < 10; ++rep) {
    Mat p(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = i; j < 4; ++j) {
        const double v = rng.uniform(-0.4, 0.4);
        p(i, j) = v;
        p(j, i) = v;
      }
    const Metric g = make_metric(sym_exp(p));
    const Mat q_ref = quotient_torus_metric(g, group.algebra);

    // Schur complement of the semisimple block in the g0-adapted coordinates,
    // transported back to the reference center coordinate (Z = e_4 / sqrt(2.5)).
    const Mat s = gram_in_g0_basis(g, g0, group.algebra);
    Mat s_nn(3, 3), s_nk(3, 1);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) s_nn(i, j) = s(i, j);
      s_nk(i, 0) = s(i, 3);
    }
    const double schur_adapted =
        s(3, 3) - (transpose(s_nk) * spd_inverse(s_nn) * s_nk)(0, 0);
    CHECK(q_ref(0, 0) == doctest::Approx(schur_adapted * 2.5).epsilon(1e-10));
  }
}

TEST_CASE("conjugating the su2 gram by a rotation preserves killing orthonormality") {
  const GroupModel su2 = GroupModel::preset("su2");
  const Mat b = killing_form(su2.algebra);
  Rng rng(47);
  const Mat q = so3_rotation(rng);
  CHECK(max_abs_diff(transpose(q) * q, Mat::identity(3)) < 1e-12);
  // B is a multiple of the identity here, so Q^T B Q = B
  CHECK(max_abs_diff(transpose(q) * b * q, b) < 1e-10);
}
