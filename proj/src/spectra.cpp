#include "liespec/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "liespec/errors.hpp"

namespace liespec {

CMat laplace_block(const Metric& g, const Irrep& irrep) {
  const int m = g.dim();
  if (static_cast<int>(irrep.generators.size()) != m)
    throw input_error("laplace_block: metric and irrep live on different algebras");
  const int d = irrep.dim;
  const Mat w = spd_inverse(g.gram);

  CMat h(d, d);
  for (int i = 0; i < m; ++i) {
    CMat q(d, d);
    for (int k = 0; k < m; ++k)
      if (w(i, k) != 0.0) caxpy(q, irrep.generators[k], w(i, k));
    cmul_acc(h, irrep.generators[i], q, -1.0);
  }

  // Exact Hermiticity of the output; the assembly is Hermitian up to roundoff.
  for (int i = 0; i < d; ++i) {
    h(i, i) = std::complex<double>(h(i, i).real(), 0.0);
    for (int j = i + 1; j < d; ++j) {
      const std::complex<double> v = 0.5 * (h(i, j) + std::conj(h(j, i)));
      h(i, j) = v;
      h(j, i) = std::conj(v);
    }
  }
  return h;
}

Spectrum spectrum(const GroupModel& group, const Metric& g, const Metric& g0,
                  double cutoff, const SpectrumOptions& opts) {
  if (!(cutoff > 0.0)) throw input_error("spectrum: cutoff must be positive");

  // Operator sandwich alpha * D0 <= D_g <= beta * D0 per block, with alpha
  // and beta the extreme eigenvalues of the inverse of g written in a
  // g0-orthonormal basis.
  const Mat s = gram_in_g0_basis(g, g0, group.algebra);
  const SymEig eig = jacobi_symmetric(s);
  const double lam_min = eig.values.front();
  const double lam_max = eig.values.back();
  if (!(lam_min > 0.0)) throw input_error("spectrum: metric is not positive definite");

  Spectrum out;
  out.cutoff = cutoff;
  out.certificate.alpha = 1.0 / lam_max;
  out.certificate.beta = 1.0 / lam_min;
  out.certificate.enum_cutoff = cutoff / out.certificate.alpha;

  std::vector<Irrep> irreps = enumerate_irreps(group, g0, out.certificate.enum_cutoff);

  long long entries = 0;
  for (const Irrep& irrep : irreps)
    entries += static_cast<long long>(irrep.dim) * irrep.dim;
  if (entries > opts.entry_budget)
    throw resource_error("spectrum: enumeration budget of " +
                         std::to_string(opts.entry_budget) +
                         " matrix entries exceeded (this run needs " +
                         std::to_string(entries) + "); lower the cutoff or raise the budget");

  out.blocks.reserve(irreps.size());
  for (const Irrep& irrep : irreps) {
    SpectrumBlock block;
    block.label = irrep.label;
    block.casimir0 = irrep.casimir0;
    block.weight = irrep.dim;
    const CMat h = laplace_block(g, irrep);
    block.eigenvalues = hermitian_eigenvalues(h, opts.hermitian_tol);
    out.blocks.push_back(std::move(block));
  }
  return out;
}

EigenvalueSet eigenvalue_set(const Spectrum& spec, double cluster_tol) {
  if (!(cluster_tol > 0.0)) throw input_error("eigenvalue_set: cluster tolerance must be positive");

  struct Entry {
    double value;
    long long weight;
  };
  std::vector<Entry> entries;
  const double keep = spec.cutoff * (1.0 + 1e-12) + 1e-12;
  for (const auto& block : spec.blocks)
    for (double v : block.eigenvalues)
      if (v <= keep) entries.push_back({v, block.weight});
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.value < b.value; });

  EigenvalueSet out;
  out.cluster_tol = cluster_tol;
  std::size_t i = 0;
  while (i < entries.size()) {
    double sum = 0.0;
    long long weight = 0;
    double last = entries[i].value;
    std::size_t j = i;
    for (; j < entries.size(); ++j) {
      if (entries[j].value - last > cluster_tol * std::max(1.0, std::abs(last))) break;
      sum += entries[j].value * static_cast<double>(entries[j].weight);
      weight += entries[j].weight;
      last = entries[j].value;
    }
    out.values.push_back(sum / static_cast<double>(weight));
    out.multiplicities.push_back(weight);
    i = j;
  }
  return out;
}

std::vector<LevelAttribution> attribute_levels(const Spectrum& spec,
                                               double cluster_tol) {
  if (!(cluster_tol > 0.0))
    throw input_error("attribute_levels: cluster tolerance must be positive");

  struct Entry {
    double value;
    const IrrepLabel* label;
  };
  std::vector<Entry> entries;
  const double keep = spec.cutoff * (1.0 + 1e-12) + 1e-12;
  for (const auto& block : spec.blocks)
    for (double v : block.eigenvalues)
      if (v <= keep) entries.push_back({v, &block.label});
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.value < b.value; });

  std::vector<LevelAttribution> out;
  std::size_t i = 0;
  while (i < entries.size()) {
    LevelAttribution level;
    double sum = 0.0;
    long long count = 0;
    double last = entries[i].value;
    std::size_t j = i;
    for (; j < entries.size(); ++j) {
      if (entries[j].value - last > cluster_tol * std::max(1.0, std::abs(last))) break;
      sum += entries[j].value;
      ++count;
      last = entries[j].value;
      bool seen = false;
      for (const IrrepLabel& known : level.labels)
        if (known == *entries[j].label) {
          seen = true;
          break;
        }
      if (!seen) level.labels.push_back(*entries[j].label);
    }
    level.value = sum / static_cast<double>(count);
    out.push_back(std::move(level));
    i = j;
  }
  return out;
}

namespace {

void require_level(const EigenvalueSet& s, int level, const char* who) {
  if (level <= 0) throw input_error(std::string(who) + ": level must be positive");
  if (static_cast<int>(s.values.size()) < level)
    throw input_error(std::string(who) + ": only " + std::to_string(s.values.size()) +
                      " certified distinct values available for level " +
                      std::to_string(level) + "; recompute the spectrum with a larger cutoff");
}

}  // namespace

bool eigenvalue_equivalent_up_to_level(const EigenvalueSet& s1,
                                       const EigenvalueSet& s2, int level,
                                       double match_tol) {
  require_level(s1, level, "eigenvalue_equivalent_up_to_level");
  require_level(s2, level, "eigenvalue_equivalent_up_to_level");
  for (int i = 0; i < level; ++i)
    if (std::abs(s1.values[i] - s2.values[i]) >
        match_tol * std::max(1.0, std::abs(s1.values[i])))
      return false;
  return true;
}

double spectral_discrepancy(const EigenvalueSet& s1, const EigenvalueSet& s2,
                            int level) {
  require_level(s1, level, "spectral_discrepancy");
  require_level(s2, level, "spectral_discrepancy");
  double worst = 0.0;
  for (int i = 0; i < level; ++i)
    worst = std::max(worst, std::abs(s1.values[i] - s2.values[i]) /
                                std::max(1.0, std::abs(s1.values[i])));
  return worst;
}

}  // namespace liespec
