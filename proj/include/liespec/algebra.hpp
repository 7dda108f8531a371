#pragma once

#include <span>
#include <string>
#include <vector>

#include "liespec/linalg.hpp"

namespace liespec {

struct IdealRange {
  int lo = 0;  // inclusive, 0-based
  int hi = 0;  // inclusive, 0-based
  bool simple = true;

  int dim() const { return hi - lo + 1; }
};

struct StructureEntry {
  int i = 0, j = 0, k = 0;  // 0-based
  double value = 0.0;
};

/// Compact Lie algebra given by structure constants in a fixed reference
/// basis, together with its declared decomposition into simple ideals and
/// center. Construction validates antisymmetry, the Jacobi identity, that
/// brackets respect the ideal partition, and that the Killing form is
/// negative definite on every simple ideal.
class LieAlgebra {
 public:
  static LieAlgebra create(int dim, const std::vector<StructureEntry>& entries,
                           std::vector<IdealRange> ideals);

  int dim() const { return dim_; }
  double c(int i, int j, int k) const {
    return c_[(static_cast<std::size_t>(i) * dim_ + j) * dim_ + k];
  }

  const std::vector<IdealRange>& ideals() const { return ideals_; }
  std::vector<IdealRange> simple_ideals() const;

  /// Indices of all simple-ideal basis vectors, in declared ideal order.
  const std::vector<int>& semisimple_indices() const { return ss_indices_; }
  /// Indices of all center basis vectors.
  const std::vector<int>& center_indices() const { return center_indices_; }

  int ss_dim() const { return static_cast<int>(ss_indices_.size()); }
  int center_dim() const { return static_cast<int>(center_indices_.size()); }

 private:
  int dim_ = 0;
  std::vector<double> c_;
  std::vector<IdealRange> ideals_;
  std::vector<int> ss_indices_;
  std::vector<int> center_indices_;
};

/// Matrix of ad_v = [v, .] in the reference basis; linear in v.
Mat ad(const LieAlgebra& alg, std::span<const double> v);

/// Matrix of ad_v restricted to the given ideal (rows and columns within it).
Mat ad_restricted(const LieAlgebra& alg, std::span<const double> v,
                  const IdealRange& ideal);

/// Killing form B(i, j) = Tr(ad_i ad_j). Symmetric; vanishes on the center.
Mat killing_form(const LieAlgebra& alg);

/// Left-invariant metric: SPD Gram matrix of the inner product on the
/// algebra, in the reference basis.
struct Metric {
  Mat gram;

  int dim() const { return gram.rows(); }
};

/// Validates symmetry (1e-14 relative) and positive definiteness.
Metric make_metric(Mat gram);

/// Block-diagonal Gram: -scale_l * B_l on each simple ideal, torus_gram on
/// the center. Requires one positive scale per simple ideal.
Metric bi_invariant_metric(const LieAlgebra& alg, std::span<const double> scales,
                           const Mat& torus_gram = Mat());

/// vol(g) / vol(g0) = sqrt(det Gram_g / det Gram_g0).
double volume_ratio(const Metric& g, const Metric& g0);

/// Change of basis between a fixed g0-orthonormal adapted basis and a
/// g-orthonormal adapted basis. A maps the semisimple part, R holds the
/// semisimple components of the center-completing vectors Z_s + W_s whose
/// center coordinates stay the identity. quotient_gram is the Gram of those
/// completing vectors: the full transported Gram is diag(I_n, quotient_gram),
/// which collapses to the identity exactly when the quotient torus metric of
/// g matches the one of g0.
struct AdaptedBasisBlocks {
  Mat A;              // n x n, det > 0
  Mat R;              // n x k
  Mat quotient_gram;  // k x k, in the g0-orthonormal center coordinates

  /// [[A, R], [0, I_k]]
  Mat full_matrix() const;
};

/// Requires g0 block-diagonal with respect to the ideal partition.
AdaptedBasisBlocks adapted_change_of_basis(const Metric& g, const Metric& g0,
                                           const LieAlgebra& alg);

/// Pushforward of g to the quotient torus: the Schur complement of the
/// semisimple block, expressed in the reference center coordinates.
/// Requires a nontrivial center.
Mat quotient_torus_metric(const Metric& g, const LieAlgebra& alg);

/// Gram matrix of g written in a g0-orthonormal basis (per-ideal Cholesky
/// orthonormalization of the reference basis, adapted index order).
Mat gram_in_g0_basis(const Metric& g, const Metric& g0, const LieAlgebra& alg);

/// Columns form the g0-orthonormal adapted basis in reference coordinates
/// (adapted index order: simple ideals first, then center).
Mat g0_orthonormal_basis(const Metric& g0, const LieAlgebra& alg);

/// Adapted index order: semisimple indices then center indices.
std::vector<int> adapted_order(const LieAlgebra& alg);

}  // namespace liespec
