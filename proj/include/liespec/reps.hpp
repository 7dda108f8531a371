#pragma once

#include <span>
#include <string>
#include <vector>

#include "liespec/algebra.hpp"

namespace liespec {

/// Kernel lattice of the torus exponential map, given by an integer matrix
/// whose columns generate the lattice in the reference center coordinates.
/// The dual basis is computed exactly via the integer adjugate.
class TorusLattice {
 public:
  TorusLattice() = default;
  static TorusLattice create(std::vector<std::vector<long long>> generators);

  int k() const { return k_; }
  long long generator(int i, int j) const { return gens_[static_cast<std::size_t>(i) * k_ + j]; }
  /// Columns are the dual basis vectors nu_1..nu_k.
  const Mat& dual() const { return dual_; }

  /// mu = sum_i coeffs[i] * nu_i, as coordinates on the center.
  std::vector<double> dual_vector(std::span<const long long> coeffs) const;

 private:
  int k_ = 0;
  std::vector<long long> gens_;
  Mat dual_;
};

struct IrrepLabel {
  std::vector<double> spins;      // half-integers, one per simple ideal
  std::vector<long long> chars;   // integer character vector, one per center coordinate

  std::string str() const;
  bool operator==(const IrrepLabel&) const = default;
};

/// Deterministic total order: spins lexicographically, then chars.
bool label_less(const IrrepLabel& a, const IrrepLabel& b);

/// Irreducible unitary representation, stored as one skew-Hermitian generator
/// matrix per basis vector of the algebra it represents (a single factor or
/// the full algebra). casimir0 is the scalar by which the reference
/// bi-invariant block Laplacian acts.
struct Irrep {
  IrrepLabel label;
  int dim = 1;
  std::vector<CMat> generators;
  double casimir0 = 0.0;
};

/// Spin-j representation of su(2) over the cyclic reference basis
/// ([X1,X2] = X3 and cyclic), built from ladder operators with rows ordered
/// by descending weight. casimir0 is taken with respect to -B, i.e. j(j+1)/2.
Irrep su2_irrep(double j);

/// Spin-j representation of a 3-dimensional simple ideal given in an
/// arbitrary reference basis; generators are expressed in that basis.
Irrep spin_irrep_for_ideal(const LieAlgebra& alg, const IdealRange& ideal, double j);

/// One-dimensional character exp(2*pi*i*mu) with mu = sum coeffs_i nu_i.
/// casimir0 is 4*pi^2*|mu|^2 with respect to the unit torus metric.
Irrep torus_character(const TorusLattice& lattice, std::span<const long long> coeffs);

/// Kronecker product representation of a product group: one factor per simple
/// ideal (in order), then one torus character when the center is nontrivial.
/// casimir0 is recomputed numerically against the algebra's reference
/// bi-invariant metric (unit scales, unit torus Gram).
Irrep product_irrep(const LieAlgebra& alg, std::span<const Irrep> factors);

/// Adjoint representation on the given simple ideal, realized on a
/// (-B)-orthonormal frame of the ideal so the generators are skew-symmetric.
/// Generators cover the whole algebra (center and other ideals act as zero).
Irrep adjoint_irrep(const LieAlgebra& alg, int simple_ideal_index);

/// Largest absolute deviation of the generators from skew-Hermiticity.
double skew_residual(const Irrep& irrep);

/// Largest absolute deviation of [pi(X_i), pi(X_j)] from sum_k c_ijk pi(X_k),
/// measured against the given algebra (which must match the generator count).
double commutation_residual(const Irrep& irrep, const LieAlgebra& alg);

/// Extract the scalar of a matrix expected to be a multiple of the identity;
/// throws numeric_error when the off-scalar residual exceeds tol.
double scalar_of(const CMat& h, double tol);

/// Scalar of -sum_ik (gram^-1)_ik pi_i pi_k; the Gram matrix must make this
/// block a multiple of the identity (bi-invariant data).
double block_casimir(const Irrep& irrep, const Mat& gram);

}  // namespace liespec
