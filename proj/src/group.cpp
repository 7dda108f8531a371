#include "liespec/group.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "liespec/errors.hpp"

namespace liespec {

namespace {

std::vector<StructureEntry> cyclic_su2_entries(int offset) {
  return {
      {offset + 0, offset + 1, offset + 2, 1.0},
      {offset + 1, offset + 2, offset + 0, 1.0},
      {offset + 2, offset + 0, offset + 1, 1.0},
  };
}

std::vector<std::vector<long long>> unit_lattice(int k) {
  std::vector<std::vector<long long>> gens(k, std::vector<long long>(k, 0));
  for (int i = 0; i < k; ++i) gens[i][i] = 1;
  return gens;
}

}  // namespace

const char* selection_rule_name(SelectionRule rule) {
  switch (rule) {
    case SelectionRule::all: return "all";
    case SelectionRule::integer_spins: return "integer-spins";
    case SelectionRule::even_sum: return "even-sum";
  }
  return "unknown";
}

std::vector<std::string> GroupModel::preset_names() {
  return {"su2", "so3", "t1", "t2", "su2xt1", "su2xsu2", "u2"};
}

GroupModel GroupModel::preset(const std::string& name) {
  GroupModel g;
  g.name = name;
  if (name == "su2" || name == "so3") {
    g.algebra = LieAlgebra::create(3, cyclic_su2_entries(0), {{0, 2, true}});
    g.lattice = TorusLattice::create({});
    g.rule = (name == "so3") ? SelectionRule::integer_spins : SelectionRule::all;
  } else if (name == "t1") {
    g.algebra = LieAlgebra::create(1, {}, {{0, 0, false}});
    g.lattice = TorusLattice::create(unit_lattice(1));
  } else if (name == "t2") {
    g.algebra = LieAlgebra::create(2, {}, {{0, 1, false}});
    g.lattice = TorusLattice::create(unit_lattice(2));
  } else if (name == "su2xt1") {
    g.algebra = LieAlgebra::create(4, cyclic_su2_entries(0), {{0, 2, true}, {3, 3, false}});
    g.lattice = TorusLattice::create(unit_lattice(1));
  } else if (name == "su2xsu2") {
    auto entries = cyclic_su2_entries(0);
    auto second = cyclic_su2_entries(3);
    entries.insert(entries.end(), second.begin(), second.end());
    g.algebra = LieAlgebra::create(6, entries, {{0, 2, true}, {3, 5, true}});
    g.lattice = TorusLattice::create({});
  } else if (name == "u2") {
    g.algebra = LieAlgebra::create(4, cyclic_su2_entries(0), {{0, 2, true}, {3, 3, false}});
    g.lattice = TorusLattice::create(unit_lattice(1));
    g.rule = SelectionRule::even_sum;
  } else {
    throw input_error("unknown group preset '" + name + "'");
  }
  return g;
}

GroupModel GroupModel::from_json_text(const std::string& text, const std::string& origin) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw input_error(origin + ": " + e.what());
  }

  try {
    if (!doc.is_object()) throw input_error(origin + ": group definition must be a JSON object");
    if (!doc.contains("dim")) throw input_error(origin + ": missing field 'dim'");
    const int dim = doc.at("dim").get<int>();

    std::vector<StructureEntry> entries;
    if (doc.contains("structure_constants")) {
      for (const auto& row : doc.at("structure_constants")) {
        if (!row.is_array() || row.size() != 4)
          throw input_error(origin + ": structure_constants entries must be [i, j, k, value]");
        StructureEntry e;
        e.i = row[0].get<int>() - 1;
        e.j = row[1].get<int>() - 1;
        e.k = row[2].get<int>() - 1;
        e.value = row[3].get<double>();
        entries.push_back(e);
      }
    }

    std::vector<IdealRange> ideals;
    if (!doc.contains("ideals")) throw input_error(origin + ": missing field 'ideals'");
    for (const auto& item : doc.at("ideals")) {
      IdealRange r;
      const auto& range = item.at("range");
      r.lo = range.at(0).get<int>() - 1;
      r.hi = range.at(1).get<int>() - 1;
      const std::string kind = item.at("kind").get<std::string>();
      if (kind == "simple")
        r.simple = true;
      else if (kind == "center")
        r.simple = false;
      else
        throw input_error(origin + ": ideal kind must be 'simple' or 'center'");
      ideals.push_back(r);
    }

    GroupModel g;
    g.name = origin;
    g.algebra = LieAlgebra::create(dim, entries, std::move(ideals));

    const int k = g.algebra.center_dim();
    std::vector<std::vector<long long>> gens = unit_lattice(k);
    if (doc.contains("lattice")) {
      const auto& lat = doc.at("lattice");
      if (static_cast<int>(lat.size()) != k)
        throw input_error(origin + ": lattice must be a k x k integer matrix");
      for (int i = 0; i < k; ++i) {
        if (static_cast<int>(lat[i].size()) != k)
          throw input_error(origin + ": lattice must be a k x k integer matrix");
        for (int j = 0; j < k; ++j) gens[i][j] = lat[i][j].get<long long>();
      }
    }
    g.lattice = TorusLattice::create(std::move(gens));
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw input_error(origin + ": " + e.what());
  }
}

GroupModel GroupModel::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open group definition file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str(), path);
}

Metric GroupModel::default_bi_invariant() const {
  std::vector<double> ones(algebra.simple_ideals().size(), 1.0);
  return bi_invariant_metric(algebra, ones, Mat::identity(algebra.center_dim()));
}

BiInvariantData analyze_bi_invariant(const GroupModel& group, const Metric& g0) {
  const LieAlgebra& alg = group.algebra;
  if (g0.dim() != alg.dim())
    throw input_error("analyze_bi_invariant: metric dimension mismatch");
  const Mat b = killing_form(alg);
  const double scale = std::max(1.0, max_abs(g0.gram));

  // Off-ideal blocks must vanish.
  const auto& ideals = alg.ideals();
  for (std::size_t a = 0; a < ideals.size(); ++a)
    for (std::size_t c = a + 1; c < ideals.size(); ++c)
      for (int i = ideals[a].lo; i <= ideals[a].hi; ++i)
        for (int j = ideals[c].lo; j <= ideals[c].hi; ++j)
          if (std::abs(g0.gram(i, j)) > 1e-10 * scale)
            throw input_error("analyze_bi_invariant: metric is not block-diagonal over the ideal partition");

  BiInvariantData out;
  for (const auto& r : alg.simple_ideals()) {
    const double c = g0.gram(r.lo, r.lo) / (-b(r.lo, r.lo));
    if (!(c > 0.0))
      throw input_error("analyze_bi_invariant: non-positive Killing scale");
    for (int i = r.lo; i <= r.hi; ++i)
      for (int j = r.lo; j <= r.hi; ++j)
        if (std::abs(g0.gram(i, j) + c * b(i, j)) > 1e-10 * scale)
          throw input_error(
              "analyze_bi_invariant: metric is not proportional to the Killing form on a simple ideal");
    out.scales.push_back(c);
  }

  const auto& center = alg.center_indices();
  const int k = alg.center_dim();
  out.torus_gram = Mat(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) out.torus_gram(i, j) = g0.gram(center[i], center[j]);
  return out;
}

namespace {

bool label_admissible(const GroupModel& group, const IrrepLabel& label) {
  switch (group.rule) {
    case SelectionRule::all:
      return true;
    case SelectionRule::integer_spins:
      for (double j : label.spins)
        if (std::abs(j - std::round(j)) > 1e-9) return false;
      return true;
    case SelectionRule::even_sum: {
      long long sum = 0;
      for (double j : label.spins) sum += std::llround(2.0 * j);
      for (long long mu : label.chars) sum += mu;
      return sum % 2 == 0;
    }
  }
  return false;
}

struct LabelCandidate {
  IrrepLabel label;
  double casimir_closed;  // closed-form casimir, used for ordering and cutoff
  long long dim;
};

}  // namespace

std::vector<Irrep> enumerate_irreps(const GroupModel& group, const Metric& g0,
                                    double cutoff) {
  if (cutoff < 0.0) throw input_error("enumerate_irreps: cutoff must be nonnegative");
  const LieAlgebra& alg = group.algebra;
  const BiInvariantData bi = analyze_bi_invariant(group, g0);
  const auto simple = alg.simple_ideals();
  const int k = alg.center_dim();
  const double bound = cutoff * (1.0 + 1e-12) + 1e-12;

  // Per-ideal spin lists with casimir j(j+1) / (2 c_l).
  std::vector<std::vector<double>> spin_lists(simple.size());
  for (std::size_t l = 0; l < simple.size(); ++l) {
    for (long long tj = 0;; ++tj) {
      const double j = 0.5 * static_cast<double>(tj);
      const double cas = j * (j + 1.0) / (2.0 * bi.scales[l]);
      if (cas > bound) break;
      spin_lists[l].push_back(j);
      if (tj > 4000000) throw resource_error("enumerate_irreps: spin enumeration exceeds sane bounds");
    }
  }

  // Character list: box-bounded by the smallest eigenvalue of the dual
  // quadratic form q(c) = c^T (N^T T0^{-1} N) c, eigenvalue 4 pi^2 q(c).
  std::vector<std::pair<std::vector<long long>, double>> char_list;
  if (k > 0) {
    const Mat t0inv = spd_inverse(bi.torus_gram);
    const Mat q = transpose(group.lattice.dual()) * t0inv * group.lattice.dual();
    const SymEig eig = jacobi_symmetric(symmetrize(q));
    const double lam_min = eig.values.front();
    if (!(lam_min > 0.0)) throw numeric_error("enumerate_irreps: degenerate dual quadratic form");
    const double four_pi2 = 4.0 * std::numbers::pi * std::numbers::pi;
    const double radius = std::sqrt(bound / (four_pi2 * lam_min));
    const long long r = static_cast<long long>(std::floor(radius + 1e-12));
    double count_estimate = 1.0;
    for (int i = 0; i < k; ++i) count_estimate *= static_cast<double>(2 * r + 1);
    if (count_estimate > 2e6)
      throw resource_error("enumerate_irreps: character box of " +
                           std::to_string(static_cast<long long>(count_estimate)) +
                           " labels exceeds the enumeration guard of 2000000");

    std::vector<long long> c(k, -r);
    while (true) {
      double qc = 0.0;
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) qc += static_cast<double>(c[i]) * q(i, j) * static_cast<double>(c[j]);
      const double cas = four_pi2 * qc;
      if (cas <= bound) char_list.emplace_back(c, cas);
      int pos = 0;
      while (pos < k && ++c[pos] > r) c[pos++] = -r;
      if (pos == k) break;
    }
  }

  // Cartesian product over factors, pruned by the additive closed form.
  std::vector<LabelCandidate> candidates;
  std::vector<std::size_t> idx(simple.size(), 0);
  const std::size_t n_char = k > 0 ? char_list.size() : 1;
  while (true) {
    double spin_cas = 0.0;
    long long dim = 1;
    IrrepLabel label;
    for (std::size_t l = 0; l < simple.size(); ++l) {
      const double j = spin_lists[l][idx[l]];
      label.spins.push_back(j);
      spin_cas += j * (j + 1.0) / (2.0 * bi.scales[l]);
      dim *= std::llround(2.0 * j) + 1;
    }
    if (spin_cas <= bound) {
      for (std::size_t ci = 0; ci < n_char; ++ci) {
        IrrepLabel full = label;
        double cas = spin_cas;
        if (k > 0) {
          full.chars = char_list[ci].first;
          cas += char_list[ci].second;
        }
        if (cas <= bound && label_admissible(group, full))
          candidates.push_back({std::move(full), cas, dim});
      }
    }

    std::size_t pos = 0;
    while (pos < simple.size() && ++idx[pos] == spin_lists[pos].size()) idx[pos++] = 0;
    if (pos == simple.size()) break;
  }

  if (candidates.size() > 2000000)
    throw resource_error("enumerate_irreps: label count exceeds the enumeration guard of 2000000");

  std::sort(candidates.begin(), candidates.end(),
            [](const LabelCandidate& a, const LabelCandidate& b) {
              if (a.casimir_closed != b.casimir_closed) return a.casimir_closed < b.casimir_closed;
              return label_less(a.label, b.label);
            });

  std::vector<Irrep> out;
  out.reserve(candidates.size());
  for (const auto& cand : candidates) {
    std::vector<Irrep> factors;
    for (std::size_t l = 0; l < simple.size(); ++l)
      factors.push_back(spin_irrep_for_ideal(alg, simple[l], cand.label.spins[l]));
    if (k > 0) factors.push_back(torus_character(group.lattice, cand.label.chars));
    Irrep irrep = product_irrep(alg, factors);
    // casimir0 with respect to the supplied g0, not the unit reference.
    irrep.casimir0 = block_casimir(irrep, g0.gram);
    out.push_back(std::move(irrep));
  }
  return out;
}

std::vector<Irrep> adjoint_irreps(const GroupModel& group) {
  std::vector<Irrep> out;
  const auto simple = group.algebra.simple_ideals();
  for (std::size_t l = 0; l < simple.size(); ++l)
    out.push_back(adjoint_irrep(group.algebra, static_cast<int>(l)));
  return out;
}

Irrep trivial_irrep(const GroupModel& group) {
  const auto simple = group.algebra.simple_ideals();
  std::vector<Irrep> factors;
  for (const auto& r : simple) factors.push_back(spin_irrep_for_ideal(group.algebra, r, 0.0));
  if (group.algebra.center_dim() > 0) {
    std::vector<long long> zero(group.algebra.center_dim(), 0);
    factors.push_back(torus_character(group.lattice, zero));
  }
  return product_irrep(group.algebra, factors);
}

std::vector<Irrep> first_nontrivial_irreps(const GroupModel& group,
                                           const Metric& g0, int count) {
  double cutoff = 1.0;
  for (int attempt = 0; attempt < 24; ++attempt) {
    std::vector<Irrep> all = enumerate_irreps(group, g0, cutoff);
    std::vector<Irrep> nontrivial;
    for (auto& irrep : all)
      if (irrep.casimir0 > 1e-12) nontrivial.push_back(std::move(irrep));
    if (static_cast<int>(nontrivial.size()) >= count) {
      nontrivial.resize(count);
      return nontrivial;
    }
    cutoff *= 2.0;
  }
  throw resource_error("first_nontrivial_irreps: could not find enough irreps within the cutoff guard");
}

}  // namespace liespec
