#include "liespec/isolation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "liespec/errors.hpp"
#include "liespec/parallel.hpp"

namespace liespec {

double isometry_class_distance(const Metric& g, const Metric& g0,
                               const LieAlgebra& alg) {
  const Mat s = gram_in_g0_basis(g, g0, alg);
  const SymEig eig = jacobi_symmetric(s);
  double dist = 0.0;
  for (double lam : eig.values) dist = std::max(dist, std::abs(lam - 1.0));
  return dist;
}

double trace_block(const Metric& g, const Irrep& irrep) {
  return ctrace(laplace_block(g, irrep)).real();
}

double adjoint_trace_via_ad(const LieAlgebra& alg, const Metric& g,
                            int simple_ideal_index) {
  const auto simple = alg.simple_ideals();
  if (simple_ideal_index < 0 || simple_ideal_index >= static_cast<int>(simple.size()))
    throw input_error("adjoint_trace_via_ad: no such simple ideal");
  const IdealRange ideal = simple[simple_ideal_index];

  // g-orthonormal basis from the Cholesky factor of the Gram matrix.
  auto l = cholesky_lower(g.gram);
  if (!l) throw input_error("adjoint_trace_via_ad: metric is not positive definite");
  const Mat basis = transpose(inverse_lower_triangular(*l));  // columns U_j

  const int m = alg.dim();
  double total = 0.0;
  std::vector<double> u(m);
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) u[i] = basis(i, j);
    const Mat adu = ad_restricted(alg, u, ideal);
    double tr = 0.0;
    for (int r = 0; r < adu.rows(); ++r)
      for (int c = 0; c < adu.cols(); ++c) tr += adu(r, c) * adu(c, r);
    total -= tr;
  }
  return total;
}

TraceReport trace_ratio(const GroupModel& group, const Metric& g,
                        const Metric& g0, std::span<const Irrep> irreps) {
  TraceReport report;
  report.simple_hypothesis = group.is_simple();
  report.volume_ratio = volume_ratio(g, g0);
  report.distance = isometry_class_distance(g, g0, group.algebra);

  const AdaptedBasisBlocks blocks = adapted_change_of_basis(g, g0, group.algebra);
  const int n = group.algebra.ss_dim();
  double a2 = 0.0;
  for (std::size_t i = 0; i < blocks.A.size(); ++i) a2 += blocks.A.data()[i] * blocks.A.data()[i];
  report.predicted_c = (n > 0) ? a2 / static_cast<double>(n) : 1.0;

  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const Irrep& irrep : irreps) {
    const double tg0 = trace_block(g0, irrep);
    if (std::abs(tg0) < 1e-12 * std::max(1.0, static_cast<double>(irrep.dim))) {
      report.skipped.push_back(irrep.label);
      continue;
    }
    TraceRatioEntry entry;
    entry.label = irrep.label;
    entry.trace_g = trace_block(g, irrep);
    entry.trace_g0 = tg0;
    entry.ratio = entry.trace_g / entry.trace_g0;
    lo = std::min(lo, entry.ratio);
    hi = std::max(hi, entry.ratio);
    report.max_ratio_deviation =
        std::max(report.max_ratio_deviation, std::abs(entry.ratio - report.predicted_c));
    report.entries.push_back(std::move(entry));
  }
  report.ratio_spread = report.entries.empty() ? 0.0 : hi - lo;
  return report;
}

FrobeniusReport frobenius_identity_check(const GroupModel& group,
                                         const Metric& g, const Metric& g0) {
  const LieAlgebra& alg = group.algebra;
  const BiInvariantData bi = analyze_bi_invariant(group, g0);
  const AdaptedBasisBlocks blocks = adapted_change_of_basis(g, g0, alg);
  const int n = alg.ss_dim();
  const int k = alg.center_dim();

  // R~ expresses the g-orthonormalized center completion; it coincides with
  // R whenever the quotient torus metrics of g and g0 agree.
  Mat r_tilde = blocks.R;
  if (k > 0) {
    auto lq = cholesky_lower(blocks.quotient_gram);
    if (!lq) throw input_error("frobenius_identity_check: degenerate quotient metric");
    r_tilde = blocks.R * transpose(inverse_lower_triangular(*lq));
  }

  FrobeniusReport report;
  report.scales = bi.scales;
  for (std::size_t i = 0; i < blocks.A.size(); ++i)
    report.a_norm2 += blocks.A.data()[i] * blocks.A.data()[i];
  for (std::size_t i = 0; i < r_tilde.size(); ++i)
    report.r_norm2 += r_tilde.data()[i] * r_tilde.data()[i];
  report.residual = std::abs(static_cast<double>(n) - report.a_norm2 - report.r_norm2);

  const std::vector<Irrep> adjoints = adjoint_irreps(group);
  const auto simple = alg.simple_ideals();
  int row_offset = 0;
  for (std::size_t l = 0; l < simple.size(); ++l) {
    const double tg = trace_block(g, adjoints[l]);
    const double tg0 = trace_block(g0, adjoints[l]);
    report.ideal_trace_g.push_back(tg);
    report.ideal_trace_g0.push_back(tg0);
    report.ideal_lhs.push_back(bi.scales[l] * tg);
    double rhs = 0.0;
    for (int i = row_offset; i < row_offset + simple[l].dim(); ++i) {
      for (int j = 0; j < n; ++j) rhs += blocks.A(i, j) * blocks.A(i, j);
      for (int s = 0; s < k; ++s) rhs += r_tilde(i, s) * r_tilde(i, s);
    }
    report.ideal_rhs.push_back(rhs);
    row_offset += simple[l].dim();
  }
  return report;
}

namespace {

double gauss_det(Mat a) {
  const int n = a.rows();
  double det = 1.0;
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
    if (a(pivot, col) == 0.0) return 0.0;
    if (pivot != col) {
      for (int c = 0; c < n; ++c) std::swap(a(pivot, c), a(col, c));
      det = -det;
    }
    det *= a(col, col);
    for (int r = col + 1; r < n; ++r) {
      const double f = a(r, col) / a(col, col);
      for (int c = col; c < n; ++c) a(r, c) -= f * a(col, c);
    }
  }
  return det;
}

}  // namespace

double minimality_gap(const Mat& a) {
  const int n = a.rows();
  if (n != a.cols()) throw input_error("minimality_gap: matrix must be square");
  const double det = gauss_det(a);
  if (det < 1.0 - 1e-12)
    throw input_error("minimality_gap: det(A) must be at least 1");
  double norm2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) norm2 += a.data()[i] * a.data()[i];
  return norm2 - static_cast<double>(n);
}

Metric sample_perturbed_metric(const GroupModel& group, const Metric& g0,
                               double radius, Rng& rng) {
  const int m = group.algebra.dim();
  Mat p(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) {
      const double v = rng.uniform(-radius, radius);
      p(i, j) = v;
      p(j, i) = v;
    }
  const Mat ehalf = sym_exp(0.5 * p);
  Mat gram = symmetrize(ehalf * g0.gram * ehalf);

  // Volume constraint vol(g) <= vol(g0), enforced as equality by rescaling.
  const double t = std::pow(spd_det(g0.gram) / spd_det(gram), 1.0 / m);
  gram = t * gram;
  return make_metric(std::move(gram));
}

namespace {

// Smallest cutoff certifying `level` distinct values of g against g0,
// padded a little so the suggestion is directly usable.
double needed_cutoff_for(const GroupModel& group, const Metric& g,
                         const Metric& g0, int level, double cluster_tol) {
  double cutoff = 1.0;
  for (int attempt = 0; attempt < 24; ++attempt) {
    const Spectrum spec = spectrum(group, g, g0, cutoff);
    const EigenvalueSet set = eigenvalue_set(spec, cluster_tol);
    if (static_cast<int>(set.values.size()) >= level)
      return set.values[level - 1] * 1.05 + 1e-6;
    cutoff *= 2.0;
  }
  throw resource_error("needed_cutoff_for: no certifying cutoff found");
}

}  // namespace

ScanReport isolation_scan(const GroupModel& group, const Metric& g0,
                          const ScanConfig& config) {
  if (!(config.radius >= 0.0)) throw input_error("isolation_scan: radius must be nonnegative");
  if (config.samples < 0) throw input_error("isolation_scan: sample count must be nonnegative");

  ScanReport report;
  report.config = config;

  const Spectrum spec0 = spectrum(group, g0, g0, config.cutoff);
  const EigenvalueSet set0 = eigenvalue_set(spec0, config.cluster_tol);
  if (static_cast<int>(set0.values.size()) < config.level)
    throw resource_error(
        "isolation_scan: the cutoff certifies only " + std::to_string(set0.values.size()) +
        " distinct values of g0; level " + std::to_string(config.level) +
        " needs a cutoff of at least " +
        std::to_string(needed_cutoff_for(group, g0, g0, config.level, config.cluster_tol)));

  const Rng master(config.seed);
  report.samples.resize(config.samples);
  parallel_for(static_cast<std::size_t>(config.samples), [&](std::size_t i) {
    Rng rng = master.split(i);
    const Metric g = sample_perturbed_metric(group, g0, config.radius, rng);
    ScanSample sample;
    sample.distance = isometry_class_distance(g, g0, group.algebra);
    sample.volume_ratio = volume_ratio(g, g0);
    const Spectrum spec = spectrum(group, g, g0, config.cutoff);
    const EigenvalueSet set = eigenvalue_set(spec, config.cluster_tol);
    sample.discrepancy = spectral_discrepancy(set0, set, config.level);
    report.samples[i] = sample;
  });

  for (double delta : config.delta_grid) {
    ScanThreshold th;
    th.delta = delta;
    for (int i = 0; i < config.samples; ++i) {
      const ScanSample& s = report.samples[i];
      if (s.distance < delta) continue;
      ++th.count;
      if (th.argmin < 0 || s.discrepancy < th.min_discrepancy) {
        th.min_discrepancy = s.discrepancy;
        th.argmin = i;
      }
    }
    report.thresholds.push_back(th);
  }
  return report;
}

RigidityResult three_eigenvalue_test(const GroupModel& group, const Metric& g0,
                                     const Metric& g, const RigidityOptions& opts) {
  if (!group.is_simple())
    throw hypothesis_error(
        "three_eigenvalue_test: the three-eigenvalue rigidity statement requires a simple group");

  RigidityResult result;
  result.volume_ratio = volume_ratio(g, g0);
  result.volume_ok = result.volume_ratio <= 1.0 + 1e-12;
  result.distance = isometry_class_distance(g, g0, group.algebra);

  const Spectrum spec0 = spectrum(group, g0, g0, opts.cutoff);
  const EigenvalueSet set0 = eigenvalue_set(spec0, opts.cluster_tol);
  if (static_cast<int>(set0.values.size()) < 3)
    throw resource_error("three_eigenvalue_test: cutoff certifies fewer than 3 distinct values of g0; need at least " +
                         std::to_string(needed_cutoff_for(group, g0, g0, 3, opts.cluster_tol)));
  result.alphas = {set0.values[0], set0.values[1], set0.values[2]};

  const Spectrum spec = spectrum(group, g, g0, opts.cutoff);
  const EigenvalueSet set = eigenvalue_set(spec, opts.cluster_tol);
  if (static_cast<int>(set.values.size()) < 3)
    throw resource_error("three_eigenvalue_test: cutoff certifies fewer than 3 distinct values of g; need at least " +
                         std::to_string(needed_cutoff_for(group, g, g0, 3, opts.cluster_tol)));

  auto matches = [&opts](double value, double target) {
    return std::abs(value - target) <= opts.match_tol * std::max(1.0, std::abs(target));
  };
  for (std::size_t i = 0; i + 2 < set.values.size(); ++i) {
    if (matches(set.values[i], result.alphas[0]) &&
        matches(set.values[i + 1], result.alphas[1]) &&
        matches(set.values[i + 2], result.alphas[2])) {
      result.triple_found = true;
      result.match_index = static_cast<int>(i);
      break;
    }
  }

  // Trace diagnostic on the alpha_2 eigenspace of g0: the constancy result
  // forces strict trace excess there whenever g is off the isometry class.
  const std::vector<Irrep> irreps = enumerate_irreps(group, g0, result.alphas[2]);
  for (const Irrep& irrep : irreps) {
    if (std::abs(irrep.casimir0 - result.alphas[1]) <=
        opts.cluster_tol * std::max(1.0, result.alphas[1])) {
      result.alpha2_block_trace = trace_block(g, irrep);
      result.alpha2_block_expected = result.alphas[1] * irrep.dim;
      result.alpha2_trace_ratio = result.alpha2_block_trace / result.alpha2_block_expected;
      break;
    }
  }

  result.verdict = result.volume_ok && result.triple_found;
  return result;
}

namespace {

struct LogCholeskyMap {
  int m = 0;

  int dims() const { return m * (m + 1) / 2; }

  // theta -> volume-normalized SPD matrix in the g0-orthonormal basis
  Mat operator()(std::span<const double> theta) const {
    Mat l(m, m);
    int pos = 0;
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < i; ++j) l(i, j) = theta[pos++];
      l(i, i) = std::exp(theta[pos++]);
    }
    Mat s = symmetrize(l * transpose(l));
    const double det = spd_det(s);
    return std::pow(det, -1.0 / m) * s;
  }
};

struct Objective {
  Objective(const GroupModel& group_in, const Metric& g0_in, const EigenvalueSet& set0_in,
            const SearchConfig& config_in, const Mat& basis_inv_in, int m)
      : group(group_in), g0(g0_in), set0(set0_in), config(config_in),
        basis_inv(basis_inv_in), map{m} {}

  const GroupModel& group;
  const Metric& g0;
  const EigenvalueSet& set0;
  const SearchConfig& config;
  const Mat& basis_inv;  // inverse of the g0-orthonormal basis columns
  LogCholeskyMap map;

  mutable long long evaluations = 0;
  mutable std::vector<std::pair<long long, double>> improvements;
  mutable double best_feasible = std::numeric_limits<double>::infinity();
  mutable double best_feasible_discrepancy = std::numeric_limits<double>::infinity();
  mutable double best_feasible_distance = 0.0;
  mutable Mat best_feasible_gram;

  // S lives in g0-orthonormal coordinates; pull back to the reference Gram.
  Metric to_metric(const Mat& s) const {
    return make_metric(symmetrize(transpose(basis_inv) * s * basis_inv));
  }

  double operator()(std::span<const double> theta) const {
    ++evaluations;
    for (double t : theta)
      if (std::abs(t) > 4.0) return 1e6 + std::abs(t);

    const Mat s = map(theta);
    const SymEig eig = jacobi_symmetric(s);
    if (eig.values.front() < 1.0 / 64.0 || eig.values.back() > 64.0)
      return 1e6 + eig.values.back();

    double dist = 0.0;
    for (double lam : eig.values) dist = std::max(dist, std::abs(lam - 1.0));

    const Metric g = to_metric(s);
    double discrepancy;
    try {
      const Spectrum spec = spectrum(group, g, g0, config.cutoff);
      const EigenvalueSet set = eigenvalue_set(spec, config.cluster_tol);
      discrepancy = spectral_discrepancy(set0, set, config.level);
    } catch (const input_error&) {
      return 1e6;
    } catch (const resource_error&) {
      return 1e6;
    }

    const double shortfall = std::max(0.0, config.exclusion_radius - dist);
    const double objective = discrepancy + config.penalty_weight * shortfall * shortfall;

    const bool feasible = dist >= config.exclusion_radius - 1e-12;
    if (feasible && objective < best_feasible) {
      best_feasible = objective;
      best_feasible_discrepancy = discrepancy;
      best_feasible_distance = dist;
      best_feasible_gram = g.gram;
      improvements.emplace_back(evaluations, objective);
    }
    return objective;
  }
};

// Standard Nelder-Mead; deterministic given the start simplex.
bool nelder_mead(const Objective& objective, std::vector<double> start,
                 double step, long long max_evals, double diameter_tol) {
  const int dim = static_cast<int>(start.size());
  std::vector<std::vector<double>> simplex(dim + 1, start);
  for (int i = 0; i < dim; ++i) simplex[i + 1][i] += step;
  if (max_evals < dim + 1) return false;
  std::vector<double> values(dim + 1);
  long long used = 0;
  for (int i = 0; i <= dim; ++i, ++used) values[i] = objective(simplex[i]);

  std::vector<int> order(dim + 1);
  while (used < max_evals) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&values](int a, int b) {
                if (values[a] != values[b]) return values[a] < values[b];
                return a < b;
              });

    double diameter = 0.0;
    for (int i = 1; i <= dim; ++i)
      for (int c = 0; c < dim; ++c)
        diameter = std::max(diameter, std::abs(simplex[order[i]][c] - simplex[order[0]][c]));
    if (diameter < diameter_tol) return true;

    const int best = order[0];
    const int worst = order[dim];
    const int second_worst = order[dim - 1];

    std::vector<double> centroid(dim, 0.0);
    for (int i = 0; i <= dim; ++i) {
      if (i == worst) continue;
      for (int c = 0; c < dim; ++c) centroid[c] += simplex[i][c];
    }
    for (int c = 0; c < dim; ++c) centroid[c] /= dim;

    auto blend = [&](double t) {
      std::vector<double> p(dim);
      for (int c = 0; c < dim; ++c) p[c] = centroid[c] + t * (simplex[worst][c] - centroid[c]);
      return p;
    };

    const std::vector<double> reflected = blend(-1.0);
    const double fr = objective(reflected);
    ++used;
    if (fr < values[best]) {
      const std::vector<double> expanded = blend(-2.0);
      const double fe = (used < max_evals) ? (++used, objective(expanded)) : fr;
      if (fe < fr) {
        simplex[worst] = expanded;
        values[worst] = fe;
      } else {
        simplex[worst] = reflected;
        values[worst] = fr;
      }
      continue;
    }
    if (fr < values[second_worst]) {
      simplex[worst] = reflected;
      values[worst] = fr;
      continue;
    }
    const std::vector<double> contracted = blend(fr < values[worst] ? -0.5 : 0.5);
    const double fc = (used < max_evals) ? (++used, objective(contracted)) : fr;
    if (fc < std::min(fr, values[worst])) {
      simplex[worst] = contracted;
      values[worst] = fc;
      continue;
    }
    // shrink toward the best vertex
    for (int i = 0; i <= dim; ++i) {
      if (i == best) continue;
      for (int c = 0; c < dim; ++c)
        simplex[i][c] = simplex[best][c] + 0.5 * (simplex[i][c] - simplex[best][c]);
      if (used < max_evals) {
        values[i] = objective(simplex[i]);
        ++used;
      }
    }
  }
  return false;
}

}  // namespace

SearchResult isospectral_search(const GroupModel& group, const Metric& g0,
                                const SearchConfig& config) {
  if (config.exclusion_radius < 0.0)
    throw input_error("isospectral_search: exclusion radius must be nonnegative");
  if (config.starts <= 0 || config.budget <= 0)
    throw input_error("isospectral_search: starts and budget must be positive");

  const Spectrum spec0 = spectrum(group, g0, g0, config.cutoff);
  const EigenvalueSet set0 = eigenvalue_set(spec0, config.cluster_tol);
  if (static_cast<int>(set0.values.size()) < config.level)
    throw resource_error("isospectral_search: cutoff certifies fewer than " +
                         std::to_string(config.level) + " distinct values; need at least " +
                         std::to_string(needed_cutoff_for(group, g0, g0, config.level, config.cluster_tol)));

  const Mat basis = g0_orthonormal_basis(g0, group.algebra);
  // Invert the (block-triangular) basis by solving against the identity.
  const int m = group.algebra.dim();
  Mat basis_inv = Mat::identity(m);
  {
    // Gauss-Jordan; the matrix is tiny.
    Mat a = basis;
    for (int col = 0; col < m; ++col) {
      int pivot = col;
      for (int r = col + 1; r < m; ++r)
        if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
      for (int c = 0; c < m; ++c) {
        std::swap(a(pivot, c), a(col, c));
        std::swap(basis_inv(pivot, c), basis_inv(col, c));
      }
      const double d = a(col, col);
      for (int c = 0; c < m; ++c) {
        a(col, c) /= d;
        basis_inv(col, c) /= d;
      }
      for (int r = 0; r < m; ++r) {
        if (r == col) continue;
        const double f = a(r, col);
        if (f == 0.0) continue;
        for (int c = 0; c < m; ++c) {
          a(r, c) -= f * a(col, c);
          basis_inv(r, c) -= f * basis_inv(col, c);
        }
      }
    }
  }

  Objective objective(group, g0, set0, config, basis_inv, m);

  const Rng master(config.seed);
  const long long per_start =
      std::max<long long>(config.budget / config.starts, objective.map.dims() + 2);
  bool any_converged = false;
  for (int start = 0; start < config.starts; ++start) {
    Rng rng = master.split(start);
    std::vector<double> theta(objective.map.dims());
    for (double& t : theta) t = config.start_spread * rng.uniform(-1.0, 1.0);
    const long long remaining = config.budget - objective.evaluations;
    if (remaining <= 0) break;
    const double step = std::max(0.1, 0.5 * config.start_spread);
    if (nelder_mead(objective, std::move(theta), step, std::min(per_start, remaining),
                    config.simplex_tol))
      any_converged = true;
  }

  SearchResult result;
  result.evaluations = objective.evaluations;
  result.converged = any_converged;
  result.improvements = std::move(objective.improvements);
  result.found = !objective.best_feasible_gram.empty();
  if (result.found) {
    result.best_objective = objective.best_feasible;
    result.best_discrepancy = objective.best_feasible_discrepancy;
    result.best_distance = objective.best_feasible_distance;
    result.best_gram = objective.best_feasible_gram;
  }

  if (!result.best_gram.empty()) {
    const Metric best = make_metric(result.best_gram);
    const std::vector<Irrep> probes = first_nontrivial_irreps(group, g0, 3);
    const TraceReport tr = trace_ratio(group, best, g0, probes);
    result.trace_ratio_c = tr.predicted_c;
  }
  return result;
}

}  // namespace liespec
