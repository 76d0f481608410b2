#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "ccasim/fuzzy.hpp"
#include "ccasim/rng.hpp"

using namespace ccasim;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

FuzzyInputs make_inputs(double fd, double nd, double bd, double fct, double st,
                        double nct, double bct, double v) {
  FuzzyInputs in;
  in.set(Variable::front_gap, fd);
  in.set(Variable::next_gap, nd);
  in.set(Variable::back_gap, bd);
  in.set(Variable::front_time, fct);
  in.set(Variable::stop_time, st);
  in.set(Variable::next_time, nct);
  in.set(Variable::back_time, bct);
  in.set(Variable::speed, v);
  return in;
}

const VehicleKind& passenger() {
  static const VehicleKind k = make_passenger_kind();
  return k;
}

}  // namespace

TEST_CASE("membership resolves the kind's term set") {
  // Passenger front_gap "small" is a triangle over (5, 15, 40).
  CHECK(membership(passenger(), Variable::front_gap, Term::small, 12.5) == 0.75);
  CHECK(membership(passenger(), Variable::front_gap, Term::small, 5.0) == 0.0);
  CHECK(membership(passenger(), Variable::front_gap, Term::small, 15.0) == 1.0);
  // Speed only defines "small"; front_time "small" spans (1, 3, 6).
  CHECK(membership(passenger(), Variable::speed, Term::small, 5.5) == 0.5);
  CHECK(membership(passenger(), Variable::front_time, Term::small, 1.5) == 0.25);
}

TEST_CASE("membership of an undefined set is a caller bug") {
  VehicleKind bare;
  bare.id = "bare";
  CHECK_THROWS_AS(membership(bare, Variable::front_gap, Term::small, 1.0),
                  std::domain_error);
  CHECK_THROWS_AS(
      membership(passenger(), Variable::speed, Term::big, 1.0),
      std::domain_error);
}

TEST_CASE("unset fuzzy inputs are rejected") {
  FuzzyInputs in;
  in.set(Variable::speed, 10.0);
  CHECK(in.has(Variable::speed));
  CHECK_FALSE(in.has(Variable::front_gap));
  CHECK(in.get(Variable::speed) == 10.0);
  CHECK_THROWS_AS(in.get(Variable::front_gap), std::domain_error);
}

TEST_CASE("rule weight is the minimum over the conjunction") {
  // front_gap small at 12.5 -> 0.75; front_time small at 1.5 -> 0.25.
  const FuzzyRule rule{{{Variable::front_time, Term::small, false},
                        {Variable::front_gap, Term::small, false}},
                       {},
                       OutTerm::NS};
  const FuzzyInputs in = make_inputs(12.5, kInf, kInf, 1.5, 2.0, kInf, kInf, 20.0);
  CHECK(rule_weight(rule, in, passenger()) == 0.25);
}

TEST_CASE("negated atoms contribute one minus the degree") {
  const FuzzyRule rule{{{Variable::speed, Term::small, true}}, {}, OutTerm::PM};
  CHECK(rule_weight(rule, make_inputs(0, 0, 0, 0, 0, 0, 0, 30.0), passenger()) ==
        1.0);
  CHECK(rule_weight(rule, make_inputs(0, 0, 0, 0, 0, 0, 0, 5.5), passenger()) ==
        0.5);
  CHECK(rule_weight(rule, make_inputs(0, 0, 0, 0, 0, 0, 0, 1.0), passenger()) ==
        0.0);
}

TEST_CASE("disjunction blocks take the best alternative") {
  FuzzyRule rule;
  rule.all_of = {{Variable::back_time, Term::very_small, false}};
  rule.any_of = {
      {{Variable::front_time, Term::small, false}},   // fires at 0.25
      {{Variable::front_gap, Term::small, false}}};   // fires at 0.75
  rule.consequent = OutTerm::PS;
  // back_time very small at 0 -> 1, so the disjunction decides: max = 0.75.
  FuzzyInputs in = make_inputs(12.5, kInf, kInf, 1.5, 2.0, kInf, 0.0, 20.0);
  CHECK(rule_weight(rule, in, passenger()) == 0.75);
  // A weaker conjunction caps the result: back_time 2 -> 0.5.
  in = make_inputs(12.5, kInf, kInf, 1.5, 2.0, kInf, 2.0, 20.0);
  CHECK(rule_weight(rule, in, passenger()) == 0.5);
}

TEST_CASE("defuzzification of two symmetric sets is their weighted midpoint") {
  const auto left = MembershipFunction::triangle(-3.0, -2.0, -1.0);
  const auto right = MembershipFunction::triangle(0.0, 1.0, 2.0);
  const WeightedOutput fired[] = {{0.5, &left}, {0.5, &right}};
  CHECK(gwaf(fired) == -0.5);
}

TEST_CASE("defuzzification of one asymmetric set leans toward the long flank") {
  const auto tri = MembershipFunction::triangle(-2.0, 0.0, 1.0);
  const WeightedOutput fired[] = {{0.5, &tri}};
  CHECK(gwaf(fired) == -0.25);
}

TEST_CASE("a fully fired triangle defuzzifies to its peak") {
  const auto tri = MembershipFunction::triangle(1.0, 3.0, 6.0);
  const WeightedOutput fired[] = {{1.0, &tri}};
  CHECK(gwaf(fired) == 3.0);
}

TEST_CASE("zero and negative weights are ignored") {
  const auto a = MembershipFunction::triangle(-3.0, -2.0, -1.0);
  const auto b = MembershipFunction::triangle(0.0, 1.0, 2.0);
  const WeightedOutput fired[] = {{0.0, &a}, {1.0, &b}, {-0.25, &a}};
  CHECK(gwaf(fired) == 1.0);

  const WeightedOutput none[] = {{0.0, &a}, {0.0, &b}};
  CHECK(gwaf(none) == 0.0);
  CHECK(gwaf(std::span<const WeightedOutput>{}) == 0.0);
}

TEST_CASE("defuzzification of the built-in braking terms") {
  // Passenger NS spans (-2, -0.75, 0); Z spans (-0.75, 0, 0.75).
  const MembershipFunction& ns = passenger().memberships.out(OutTerm::NS);
  const MembershipFunction& z = passenger().memberships.out(OutTerm::Z);
  const WeightedOutput only_ns[] = {{0.5, &ns}};
  CHECK(gwaf(only_ns) == -0.875);
  const WeightedOutput both[] = {{0.5, &ns}, {0.5, &z}};
  CHECK(gwaf(both) == -0.4375);
}

TEST_CASE("symmetric firings reduce to the weighted mean of peaks") {
  rng::Stream gen(7, 0, 0, 0, rng::Purpose::stress);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<MembershipFunction> sets;
    std::vector<double> weights;
    std::vector<double> peaks;
    const int n = 1 + static_cast<int>(gen.next_unit() * 5);
    for (int j = 0; j < n; ++j) {
      const double c = -10.0 + 20.0 * gen.next_unit();
      const double h = 0.5 + 3.0 * gen.next_unit();
      sets.push_back(MembershipFunction::triangle(c - h, c, c + h));
      weights.push_back(gen.next_unit());
      peaks.push_back(c);
    }
    std::vector<WeightedOutput> fired;
    double num = 0.0;
    double den = 0.0;
    for (int j = 0; j < n; ++j) {
      fired.push_back({weights[j], &sets[j]});
      if (weights[j] > 0.0) {
        num += weights[j] * peaks[j];
        den += weights[j];
      }
    }
    const double expected = den > 0.0 ? num / den : 0.0;
    CHECK(gwaf(fired) ==
          doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("defuzzified value stays within the hull of the fired supports") {
  rng::Stream gen(8, 0, 0, 0, rng::Purpose::stress);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<MembershipFunction> sets;
    std::vector<WeightedOutput> fired;
    double lo = kInf;
    double hi = -kInf;
    const int n = 1 + static_cast<int>(gen.next_unit() * 4);
    sets.reserve(n);
    for (int j = 0; j < n; ++j) {
      const double a = -20.0 + 30.0 * gen.next_unit();
      const double p = a + 0.1 + 5.0 * gen.next_unit();
      const double b = p + 0.1 + 5.0 * gen.next_unit();
      sets.push_back(MembershipFunction::triangle(a, p, b));
      const double w = 0.05 + 0.95 * gen.next_unit();
      fired.push_back({w, &sets.back()});
      lo = std::min(lo, a);
      hi = std::max(hi, b);
    }
    const double y = gwaf(fired);
    CHECK(y >= lo);
    CHECK(y <= hi);
  }
}

TEST_CASE("cruise on an empty road eases toward the limit") {
  // Every forward measure saturates "big"; only the keep-driving rule fires.
  const FuzzyInputs in =
      make_inputs(kInf, kInf, kInf, kInf, kInf, kInf, kInf, 28.0);
  CHECK(eval_module(default_rule_base().primary, in, passenger()) == 1.75);
}

TEST_CASE("a tight but stable gap holds speed") {
  // Gap 4 m at matched speeds: headroom time 20 s ("big"), gap "very small".
  const FuzzyInputs in =
      make_inputs(4.0, kInf, kInf, 20.0, 0.16, kInf, kInf, 25.0);
  CHECK(eval_module(default_rule_base().primary, in, passenger()) == 0.0);
}

TEST_CASE("closing fast on a tight gap brakes hard") {
  // 4 m gap closing at 10 m/s: collision time 0.4 s.
  const FuzzyInputs in =
      make_inputs(4.0, kInf, kInf, 0.4, 0.16, kInf, kInf, 25.0);
  CHECK(eval_module(default_rule_base().primary, in, passenger()) == -4.0);
}

TEST_CASE("a stopped driver with open road pulls away hard") {
  const FuzzyInputs in =
      make_inputs(kInf, kInf, kInf, kInf, kInf, kInf, kInf, 0.0);
  CHECK(eval_module(default_rule_base().primary, in, passenger()) == 3.0);
}

TEST_CASE("the anticipatory module is silent without a second leader") {
  const FuzzyInputs in =
      make_inputs(kInf, kInf, kInf, kInf, kInf, kInf, kInf, 28.0);
  CHECK(eval_module(default_rule_base().anticipatory, in, passenger()) == 0.0);
}

TEST_CASE("a stalled second leader triggers early braking") {
  // next gap 10 m (fully "very small"), next collision time 2 s (half
  // "very small", half "small") -> NB and NM fire at 0.5 each.
  const FuzzyInputs in =
      make_inputs(kInf, 10.0, kInf, kInf, kInf, 2.0, kInf, 28.0);
  CHECK(eval_module(default_rule_base().anticipatory, in, passenger()) ==
        -3.09375);
}

TEST_CASE("blending lets the stronger brake win") {
  CHECK(combine_accelerations(-1.0, -2.0) == -2.0);
  CHECK(combine_accelerations(-2.0, -1.0) == -2.0);
  CHECK(combine_accelerations(0.0, -5.0) == -5.0);
  CHECK(combine_accelerations(-3.0, -3.0) == -3.0);
}

TEST_CASE("blending averages drive against a firm early brake") {
  CHECK(combine_accelerations(1.0, -0.5) == 0.25);
  CHECK(combine_accelerations(2.0, -0.25) == 0.875);
}

TEST_CASE("blending ignores a soft anticipatory touch") {
  CHECK(combine_accelerations(1.0, -0.1) == 1.0);
  CHECK(combine_accelerations(1.0, 0.0) == 1.0);
  CHECK(combine_accelerations(0.5, 0.5) == 0.5);
}

TEST_CASE("the built-in rule base has the documented shape") {
  const RuleBase& rb = default_rule_base();
  CHECK(rb.primary.size() == 21);
  CHECK(rb.anticipatory.size() == 10);

  int by_consequent[kOutTermCount] = {};
  std::size_t with_disjunction = 0;
  std::size_t with_negation = 0;
  for (const FuzzyRule& r : rb.primary) {
    ++by_consequent[static_cast<std::size_t>(r.consequent)];
    if (!r.any_of.empty()) ++with_disjunction;
    for (const RuleAtom& a : r.all_of) {
      if (a.negated) ++with_negation;
    }
  }
  CHECK(by_consequent[static_cast<std::size_t>(OutTerm::NB)] == 4);
  CHECK(by_consequent[static_cast<std::size_t>(OutTerm::NM)] == 6);
  CHECK(by_consequent[static_cast<std::size_t>(OutTerm::NS)] == 3);
  CHECK(by_consequent[static_cast<std::size_t>(OutTerm::Z)] == 4);
  CHECK(by_consequent[static_cast<std::size_t>(OutTerm::PS)] == 2);
  CHECK(by_consequent[static_cast<std::size_t>(OutTerm::PM)] == 1);
  CHECK(by_consequent[static_cast<std::size_t>(OutTerm::PB)] == 1);
  CHECK(with_disjunction == 1);  // the cooperative push rule
  CHECK(with_negation == 2);     // the two "not crawling" guards

  for (const FuzzyRule& r : rb.primary) {
    if (!r.any_of.empty()) {
      CHECK(r.any_of.size() == 4);
      REQUIRE(r.all_of.size() == 2);
      CHECK(r.all_of[0] ==
            RuleAtom{Variable::back_time, Term::very_small, false});
      CHECK(r.all_of[1] ==
            RuleAtom{Variable::back_gap, Term::very_small, false});
      CHECK(r.consequent == OutTerm::PS);
    }
  }

  int anticipatory_by_consequent[kOutTermCount] = {};
  for (const FuzzyRule& r : rb.anticipatory) {
    ++anticipatory_by_consequent[static_cast<std::size_t>(r.consequent)];
    CHECK(r.any_of.empty());
    REQUIRE(r.all_of.size() == 2);
    CHECK(r.all_of[0].var == Variable::next_time);
    CHECK(r.all_of[1].var == Variable::next_gap);
  }
  CHECK(anticipatory_by_consequent[static_cast<std::size_t>(OutTerm::NB)] == 2);
  CHECK(anticipatory_by_consequent[static_cast<std::size_t>(OutTerm::NM)] == 4);
  CHECK(anticipatory_by_consequent[static_cast<std::size_t>(OutTerm::NS)] == 4);
}

TEST_CASE("the shared rule base handle points at the built-in rules") {
  CHECK(default_rule_base_ptr().get() == &default_rule_base());
  CHECK(*default_rule_base_ptr() == default_rule_base());
}
