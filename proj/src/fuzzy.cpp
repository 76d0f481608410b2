#include "ccasim/fuzzy.hpp"

#include <algorithm>
#include <stdexcept>

namespace ccasim {

double membership(const VehicleKind& k, Variable v, Term t, double value) {
  const auto& mf = k.memberships.in(v, t);
  if (!mf) {
    throw std::domain_error(std::string("kind '") + k.id + "' has no term " +
                            std::string(to_string(t)) + " for " +
                            std::string(to_string(v)));
  }
  return (*mf)(value);
}

namespace {

double atom_degree(const RuleAtom& a, const FuzzyInputs& in, const VehicleKind& k) {
  const double mu = membership(k, a.var, a.term, in.get(a.var));
  return a.negated ? 1.0 - mu : mu;
}

double conjunction_degree(const std::vector<RuleAtom>& atoms, const FuzzyInputs& in,
                          const VehicleKind& k) {
  double w = 1.0;
  for (const RuleAtom& a : atoms) w = std::min(w, atom_degree(a, in, k));
  return w;
}

}  // namespace

double rule_weight(const FuzzyRule& rule, const FuzzyInputs& in, const VehicleKind& k) {
  double w = conjunction_degree(rule.all_of, in, k);
  if (!rule.any_of.empty()) {
    double any = 0.0;
    for (const auto& block : rule.any_of) {
      any = std::max(any, conjunction_degree(block, in, k));
    }
    w = std::min(w, any);
  }
  return w;
}

double gwaf(std::span<const WeightedOutput> fired) {
  double num = 0.0;
  double den = 0.0;
  for (const WeightedOutput& f : fired) {
    if (!(f.weight > 0.0)) continue;
    const Preimage pre = preimage(*f.output, f.weight);
    num += f.weight * pre.sum();
    den += f.weight * static_cast<double>(pre.count);
  }
  return den > 0.0 ? num / den : 0.0;
}

double eval_module(std::span<const FuzzyRule> module, const FuzzyInputs& in,
                   const VehicleKind& k) {
  // Stack buffer: module sizes are small and this runs once per vehicle-step.
  WeightedOutput fired[64];
  std::size_t n = 0;
  for (const FuzzyRule& r : module) {
    const double w = rule_weight(r, in, k);
    if (w > 0.0) {
      if (n == std::size(fired)) throw std::logic_error("rule module too large");
      fired[n++] = {w, &k.memberships.out(r.consequent)};
    }
  }
  return gwaf(std::span<const WeightedOutput>(fired, n));
}

double combine_accelerations(double primary, double anticipatory) {
  if (primary <= 0.0) return std::min(primary, anticipatory);
  if (anticipatory <= -0.25) return 0.5 * (primary + anticipatory);
  return primary;
}

}  // namespace ccasim
