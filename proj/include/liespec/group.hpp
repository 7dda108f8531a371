#pragma once

#include <string>
#include <vector>

#include "liespec/reps.hpp"

namespace liespec {

/// Which (spin, character) labels are admissible as representations of the
/// global group rather than just of its universal cover.
enum class SelectionRule {
  all,            // direct products: every label
  integer_spins,  // adjoint-type quotients (so3): integer spins only
  even_sum,       // u2-type quotients: sum of (2j) and character entries even
};

const char* selection_rule_name(SelectionRule rule);

/// A compact group at desk scale: algebra, torus lattice for the center
/// coordinates, and the irrep selection rule.
struct GroupModel {
  std::string name;
  LieAlgebra algebra;
  TorusLattice lattice;
  SelectionRule rule = SelectionRule::all;

  static GroupModel preset(const std::string& name);
  static std::vector<std::string> preset_names();
  /// Group-definition JSON document (fields dim, structure_constants, ideals,
  /// lattice). Throws input_error with parse diagnostics on malformed input.
  static GroupModel from_json_text(const std::string& text, const std::string& origin);
  static GroupModel from_file(const std::string& path);

  /// Unit scales on every simple ideal, unit torus Gram.
  Metric default_bi_invariant() const;

  bool is_simple() const {
    return algebra.simple_ideals().size() == 1 && algebra.center_dim() == 0;
  }
};

struct BiInvariantData {
  std::vector<double> scales;  // one per simple ideal: Gram = -scale_l * B_l
  Mat torus_gram;              // center block in reference coordinates
};

/// Decompose a bi-invariant metric into per-ideal Killing scales and the
/// torus block; throws input_error when g0 is not bi-invariant (block
/// diagonal and Killing-proportional on every simple ideal).
BiInvariantData analyze_bi_invariant(const GroupModel& group, const Metric& g0);

/// All irreps admitted by the group's selection rule with casimir0 (taken
/// with respect to g0) at most `cutoff`, sorted by casimir0 then label.
std::vector<Irrep> enumerate_irreps(const GroupModel& group, const Metric& g0,
                                    double cutoff);

/// Adjoint representations, one per simple ideal.
std::vector<Irrep> adjoint_irreps(const GroupModel& group);

Irrep trivial_irrep(const GroupModel& group);

/// First `count` nontrivial irreps ordered by casimir0 with respect to g0.
std::vector<Irrep> first_nontrivial_irreps(const GroupModel& group,
                                           const Metric& g0, int count);

}  // namespace liespec
