#pragma once

#include <vector>

#include "liespec/group.hpp"

namespace liespec {

/// Eigenvalues of the Laplacian restricted to one irreducible block. Every
/// entry enters the global spectrum with multiplicity `weight` (the irrep
/// dimension, per Peter-Weyl).
struct SpectrumBlock {
  IrrepLabel label;
  double casimir0 = 0.0;
  int weight = 1;
  std::vector<double> eigenvalues;  // ascending, length = weight
};

/// Completeness certificate: per block, alpha * casimir0 and beta * casimir0
/// sandwich every block eigenvalue, so enumerating casimir0 <= enum_cutoff
/// (= lambda / alpha) captures every eigenvalue up to the requested cutoff.
struct Certificate {
  double alpha = 1.0;
  double beta = 1.0;
  double enum_cutoff = 0.0;
};

struct Spectrum {
  double cutoff = 0.0;
  Certificate certificate;
  std::vector<SpectrumBlock> blocks;
};

/// Distinct eigenvalues after tolerance clustering, values ascending and only
/// those certified (at most the spectrum cutoff).
struct EigenvalueSet {
  std::vector<double> values;
  std::vector<long long> multiplicities;
  double cluster_tol = 0.0;
};

/// -sum_{ik} (G^{-1})_{ik} pi(X_i) pi(X_k): the Laplacian of g on the block.
CMat laplace_block(const Metric& g, const Irrep& irrep);

struct SpectrumOptions {
  double hermitian_tol = 1e-12;
  long long entry_budget = 1'000'000;  // total Laplacian matrix entries across blocks
};

/// Certified spectrum of g up to `cutoff`, enumerated against the
/// bi-invariant reference g0.
Spectrum spectrum(const GroupModel& group, const Metric& g, const Metric& g0,
                  double cutoff, const SpectrumOptions& opts = {});

EigenvalueSet eigenvalue_set(const Spectrum& spec, double cluster_tol = 1e-8);

/// Which irrep blocks contribute to each distinct value: the first N entries
/// say which representations a level-N comparison actually certifies.
struct LevelAttribution {
  double value = 0.0;
  std::vector<IrrepLabel> labels;
};
std::vector<LevelAttribution> attribute_levels(const Spectrum& spec,
                                               double cluster_tol = 1e-8);

/// First `level` distinct values agree within match_tol (relative above 1).
bool eigenvalue_equivalent_up_to_level(const EigenvalueSet& s1,
                                       const EigenvalueSet& s2, int level,
                                       double match_tol = 1e-6);

/// max_{i <= level} |s1[i] - s2[i]| / max(1, s1[i]).
double spectral_discrepancy(const EigenvalueSet& s1, const EigenvalueSet& s2,
                            int level);

}  // namespace liespec
