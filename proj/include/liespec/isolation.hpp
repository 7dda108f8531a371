#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "liespec/rng.hpp"
#include "liespec/spectra.hpp"

namespace liespec {

/// Distance from g to the isometry class of a bi-invariant g0. Isometric
/// left-invariant metrics have conjugate Gram matrices, so this compares the
/// eigenvalues of the Gram of g in a g0-orthonormal basis against 1.
double isometry_class_distance(const Metric& g, const Metric& g0,
                               const LieAlgebra& alg);

/// Trace of laplace_block(g, irrep).
double trace_block(const Metric& g, const Irrep& irrep);

/// The same adjoint-block trace computed purely from structure constants:
/// -sum_j Tr((ad_{U_j} restricted to the ideal)^2) over a g-orthonormal
/// basis {U_j} of the full algebra.
double adjoint_trace_via_ad(const LieAlgebra& alg, const Metric& g,
                            int simple_ideal_index);

struct TraceRatioEntry {
  IrrepLabel label;
  double trace_g = 0.0;
  double trace_g0 = 0.0;
  double ratio = 1.0;
};

struct TraceReport {
  std::vector<TraceRatioEntry> entries;
  std::vector<IrrepLabel> skipped;   // trivial blocks: the ratio is undefined
  double predicted_c = 1.0;          // |A|^2 / n from the adapted change of basis
  double ratio_spread = 0.0;         // max ratio - min ratio
  double max_ratio_deviation = 0.0;  // max |ratio - predicted_c|
  double volume_ratio = 1.0;
  double distance = 0.0;
  bool simple_hypothesis = false;  // single simple ideal and no center
};

/// Per-irrep traces of the Laplacians of g and g0 and their ratios. On a
/// simple group the ratio is a constant C = |A|^2 / n across every
/// nontrivial block, and C > 1 whenever vol(g) <= vol(g0) and g is off the
/// isometry class of g0.
TraceReport trace_ratio(const GroupModel& group, const Metric& g,
                        const Metric& g0, std::span<const Irrep> irreps);

struct FrobeniusReport {
  double residual = 0.0;   // | n - |A|^2 - |R~|^2 |
  double a_norm2 = 0.0;    // |A|^2
  double r_norm2 = 0.0;    // |R~|^2 (center columns g-orthonormalized)
  std::vector<double> scales;          // c_l per simple ideal
  std::vector<double> ideal_trace_g;   // Tr(D_g on adjoint block l)
  std::vector<double> ideal_trace_g0;  // Tr(D_0 on adjoint block l)
  std::vector<double> ideal_lhs;       // c_l * Tr(D_g on block l)
  std::vector<double> ideal_rhs;       // squared row norms of [A R~] over ideal l
};

/// Raw per-ideal trace identity c_l * Tr(D_g | V_l) = sum over ideal rows of
/// the squared entries of [A R~]; under equal adjoint traces the total
/// collapses to n = |A|^2 + |R|^2.
FrobeniusReport frobenius_identity_check(const GroupModel& group,
                                         const Metric& g, const Metric& g0);

/// |A|_F^2 - n for det(A) >= 1; zero exactly on SO(n).
double minimality_gap(const Mat& a);

struct ScanConfig {
  double radius = 0.2;
  int samples = 1000;
  int level = 3;
  double cutoff = 3.0;
  std::uint64_t seed = 0;
  double match_tol = 1e-6;
  double cluster_tol = 1e-8;
  std::vector<double> delta_grid = {0.01, 0.02, 0.05, 0.1, 0.15, 0.2, 0.3};
};

struct ScanSample {
  double distance = 0.0;
  double volume_ratio = 1.0;
  double discrepancy = 0.0;
};

struct ScanThreshold {
  double delta = 0.0;
  long long count = 0;            // samples with distance >= delta
  double min_discrepancy = -1.0;  // -1 when no sample qualifies
  int argmin = -1;
};

struct ScanReport {
  ScanConfig config;
  std::vector<ScanSample> samples;
  std::vector<ScanThreshold> thresholds;
};

/// Samples volume-normalized SPD perturbations of g0 and records the level-N
/// eigenvalue-set discrepancy of each against g0. Deterministic for a given
/// seed; samples are evaluated independently (parallelizable by index).
ScanReport isolation_scan(const GroupModel& group, const Metric& g0,
                          const ScanConfig& config);

struct RigidityOptions {
  double cutoff = 3.0;
  double match_tol = 1e-6;
  double cluster_tol = 1e-8;
};

struct RigidityResult {
  bool verdict = false;
  bool volume_ok = false;
  double volume_ratio = 1.0;
  bool triple_found = false;
  int match_index = -1;             // position of alpha_1 in the set of g
  std::vector<double> alphas;       // first three distinct values of g0
  double alpha2_block_trace = 0.0;  // Tr(D_g) on the alpha_2 block of g0
  double alpha2_block_expected = 0.0;  // alpha_2 * dim V
  double alpha2_trace_ratio = 1.0;
  double distance = 0.0;
};

/// Do the first three distinct eigenvalues of g0 appear as consecutive
/// distinct eigenvalues of g, subject to vol(g) <= vol(g0)? Requires a
/// simple group and a cutoff certifying three values on both sides.
RigidityResult three_eigenvalue_test(const GroupModel& group, const Metric& g0,
                                     const Metric& g,
                                     const RigidityOptions& opts = {});

struct SearchConfig {
  int level = 3;
  double cutoff = 3.0;
  long long budget = 20000;
  std::uint64_t seed = 0;
  double exclusion_radius = 0.05;
  int starts = 8;
  double start_spread = 0.3;
  double match_tol = 1e-6;
  double cluster_tol = 1e-8;
  double penalty_weight = 1e4;
  double simplex_tol = 1e-10;
};

struct SearchResult {
  bool found = false;             // some feasible point was evaluated
  double best_objective = 0.0;    // penalized objective at the best point
  double best_discrepancy = 0.0;  // level-N discrepancy there
  double best_distance = 0.0;
  Mat best_gram;                  // reference coordinates
  double trace_ratio_c = 1.0;     // |A|^2 / n at the best point
  bool converged = false;         // some start collapsed its simplex
  long long evaluations = 0;
  std::vector<std::pair<long long, double>> improvements;  // (eval, objective)
};

/// Multi-start Nelder-Mead over log-Cholesky coordinates of the Gram matrix,
/// volume fixed by determinant rescaling, exclusion of the isometry class of
/// g0 enforced by a quadratic penalty. Minimizes the level-N discrepancy.
SearchResult isospectral_search(const GroupModel& group, const Metric& g0,
                                const SearchConfig& config);

/// Sample one volume-normalized SPD perturbation of g0 (symmetric exponential
/// coordinates, entries uniform in [-radius, radius]).
Metric sample_perturbed_metric(const GroupModel& group, const Metric& g0,
                               double radius, Rng& rng);

}  // namespace liespec
