#include "ccasim/rules.hpp"

#include <stdexcept>

namespace ccasim {

double FuzzyInputs::get(Variable v) const {
  if (!has(v)) {
    throw std::domain_error(std::string("fuzzy input not set: ") +
                            std::string(to_string(v)));
  }
  return values_[static_cast<std::size_t>(v)];
}

namespace {

RuleBase build_default_rule_base() {
  using V = Variable;
  using T = Term;
  RuleBase rb;

  auto rule = [](std::vector<RuleAtom> atoms, OutTerm out) {
    FuzzyRule r;
    r.all_of = std::move(atoms);
    r.consequent = out;
    return r;
  };

  // --- primary module ---------------------------------------------------
  // Core grid over (front collision time, front gap). Row order: big,
  // medium, small, very small collision time; columns big .. very small gap.
  // The two accelerating cells only apply when the driver is not crawling.
  rb.primary.push_back(rule({{V::front_time, T::big}, {V::front_gap, T::big},
                             {V::speed, T::small, true}},
                            OutTerm::PM));
  rb.primary.push_back(rule({{V::front_time, T::big}, {V::front_gap, T::medium},
                             {V::speed, T::small, true}},
                            OutTerm::PS));
  rb.primary.push_back(rule({{V::front_time, T::big}, {V::front_gap, T::small}}, OutTerm::Z));
  rb.primary.push_back(
      rule({{V::front_time, T::big}, {V::front_gap, T::very_small}}, OutTerm::Z));

  rb.primary.push_back(rule({{V::front_time, T::medium}, {V::front_gap, T::big}}, OutTerm::Z));
  rb.primary.push_back(
      rule({{V::front_time, T::medium}, {V::front_gap, T::medium}}, OutTerm::Z));
  rb.primary.push_back(
      rule({{V::front_time, T::medium}, {V::front_gap, T::small}}, OutTerm::NS));
  rb.primary.push_back(
      rule({{V::front_time, T::medium}, {V::front_gap, T::very_small}}, OutTerm::NS));

  for (Term gap : {T::big, T::medium, T::small, T::very_small}) {
    rb.primary.push_back(rule({{V::front_time, T::small}, {V::front_gap, gap}}, OutTerm::NM));
  }
  for (Term gap : {T::big, T::medium, T::small, T::very_small}) {
    rb.primary.push_back(
        rule({{V::front_time, T::very_small}, {V::front_gap, gap}}, OutTerm::NB));
  }

  // Jam escape: plenty of time but crawling -> strong drive to get going.
  rb.primary.push_back(
      rule({{V::front_time, T::big}, {V::speed, T::small}}, OutTerm::PB));

  // Stopped-traffic guard: if covering the gap at own speed is quick, brake
  // by how little room is left, regardless of relative speed.
  rb.primary.push_back(
      rule({{V::stop_time, T::small}, {V::front_gap, T::medium}}, OutTerm::NS));
  rb.primary.push_back(
      rule({{V::stop_time, T::small}, {V::front_gap, T::small}}, OutTerm::NM));
  rb.primary.push_back(
      rule({{V::stop_time, T::small}, {V::front_gap, T::very_small}}, OutTerm::NM));

  // Cooperative push: someone is right on our tail and closing fast while we
  // still have comfortable room ahead -> speed up a little.
  {
    FuzzyRule push;
    push.all_of = {{V::back_time, T::very_small}, {V::back_gap, T::very_small}};
    push.any_of = {
        {{V::front_time, T::big}, {V::front_gap, T::big}},
        {{V::front_time, T::big}, {V::front_gap, T::medium}},
        {{V::front_time, T::medium}, {V::front_gap, T::big}},
        {{V::front_time, T::medium}, {V::front_gap, T::medium}},
    };
    push.consequent = OutTerm::PS;
    rb.primary.push_back(push);
  }

  // --- anticipatory module ------------------------------------------------
  // Early braking for the second vehicle ahead; purely restraining.
  rb.anticipatory.push_back(
      rule({{V::next_time, T::very_small}, {V::next_gap, T::very_small}}, OutTerm::NB));
  rb.anticipatory.push_back(
      rule({{V::next_time, T::very_small}, {V::next_gap, T::small}}, OutTerm::NB));
  rb.anticipatory.push_back(
      rule({{V::next_time, T::very_small}, {V::next_gap, T::medium}}, OutTerm::NM));
  rb.anticipatory.push_back(
      rule({{V::next_time, T::very_small}, {V::next_gap, T::big}}, OutTerm::NM));
  rb.anticipatory.push_back(
      rule({{V::next_time, T::small}, {V::next_gap, T::very_small}}, OutTerm::NM));
  rb.anticipatory.push_back(
      rule({{V::next_time, T::small}, {V::next_gap, T::small}}, OutTerm::NM));
  rb.anticipatory.push_back(
      rule({{V::next_time, T::small}, {V::next_gap, T::medium}}, OutTerm::NS));
  rb.anticipatory.push_back(
      rule({{V::next_time, T::small}, {V::next_gap, T::big}}, OutTerm::NS));
  rb.anticipatory.push_back(
      rule({{V::next_time, T::medium}, {V::next_gap, T::very_small}}, OutTerm::NS));
  rb.anticipatory.push_back(
      rule({{V::next_time, T::big}, {V::next_gap, T::very_small}}, OutTerm::NS));

  return rb;
}

}  // namespace

const RuleBase& default_rule_base() {
  static const RuleBase rb = build_default_rule_base();
  return rb;
}

std::shared_ptr<const RuleBase> default_rule_base_ptr() {
  // Aliases the function-local static; the deleter is a no-op.
  return std::shared_ptr<const RuleBase>(&default_rule_base(), [](const RuleBase*) {});
}

}  // namespace ccasim
