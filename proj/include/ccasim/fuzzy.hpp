#pragma once

#include <span>
#include <vector>

#include "ccasim/rules.hpp"

namespace ccasim {

/// Degree of membership of `value` in the kind's (variable, term) set.
/// Throws if the kind does not define that set.
double membership(const VehicleKind& k, Variable v, Term t, double value);

/// Firing weight of a rule: min over the conjunction atoms (negated atoms
/// contribute 1 - mu), AND-ed (min) with the max over any_of conjunction
/// blocks when present.
double rule_weight(const FuzzyRule& rule, const FuzzyInputs& in, const VehicleKind& k);

/// A fired rule ready for defuzzification.
struct WeightedOutput {
  double weight = 0.0;
  const MembershipFunction* output = nullptr;
};

/// Defuzzifier: the weighted average of the preimage points of each fired
/// output at its firing weight,
///   sum_j w_j * sum(preimage_j) / sum_j w_j * |preimage_j|.
/// Zero-weight entries are skipped; an empty or all-zero list yields 0.
double gwaf(std::span<const WeightedOutput> fired);

/// Runs one rule module to a crisp acceleration (m/s^2).
double eval_module(std::span<const FuzzyRule> module, const FuzzyInputs& in,
                   const VehicleKind& k);

/// Blends the primary and anticipatory module outputs: a braking primary
/// wins outright; a driving primary is averaged with a firmly braking
/// anticipatory output and otherwise stands alone.
double combine_accelerations(double primary, double anticipatory);

}  // namespace ccasim
