#pragma once

#include <bitset>
#include <cstdint>
#include <memory>
#include <vector>

#include "ccasim/kind.hpp"

namespace ccasim {

/// One antecedent atom: "variable IS term" or, when negated, "variable IS NOT
/// term" (degree 1 - mu).
struct RuleAtom {
  Variable var = Variable::front_gap;
  Term term = Term::very_small;
  bool negated = false;

  bool operator==(const RuleAtom&) const = default;
};

/// Mamdani rule: a conjunction of atoms, optionally AND-ed with a disjunction
/// of conjunction blocks (used by the cooperative push-from-behind rule),
/// firing a single output term.
struct FuzzyRule {
  std::vector<RuleAtom> all_of;
  std::vector<std::vector<RuleAtom>> any_of;  ///< empty -> no disjunction part
  OutTerm consequent = OutTerm::Z;

  bool operator==(const FuzzyRule&) const = default;
};

/// The two decision modules of the driver model. `primary` reacts to the
/// immediate neighbours (gap keeping, stopping, jam escape, cooperative
/// pushing); `anticipatory` brakes early for the second vehicle ahead. Their
/// crisp outputs are blended by combine_accelerations().
struct RuleBase {
  std::vector<FuzzyRule> primary;
  std::vector<FuzzyRule> anticipatory;

  bool operator==(const RuleBase&) const = default;
};

/// The built-in driver rules.
const RuleBase& default_rule_base();

/// Non-owning shared handle to the built-in rules (lets configs share
/// ownership semantics with custom rule bases loaded from files).
std::shared_ptr<const RuleBase> default_rule_base_ptr();

/// Crisp input vector with explicit presence: evaluating a rule that touches
/// an unset variable is a caller bug and throws.
class FuzzyInputs {
 public:
  void set(Variable v, double value) {
    values_[static_cast<std::size_t>(v)] = value;
    present_.set(static_cast<std::size_t>(v));
  }
  bool has(Variable v) const { return present_.test(static_cast<std::size_t>(v)); }
  double get(Variable v) const;

 private:
  double values_[kVariableCount] = {};
  std::bitset<kVariableCount> present_;
};

}  // namespace ccasim
