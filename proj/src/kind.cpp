#include "ccasim/kind.hpp"

#include <cmath>
#include <stdexcept>

namespace ccasim {

namespace {

constexpr std::string_view kVariableNames[kVariableCount] = {
    "front_gap", "next_gap", "back_gap", "front_time",
    "stop_time", "next_time", "back_time", "speed"};
constexpr std::string_view kTermNames[kTermCount] = {"very_small", "small",
                                                     "medium", "big"};
constexpr std::string_view kOutTermNames[kOutTermCount] = {"NB", "NM", "NS",
                                                           "Z", "PS", "PM", "PB"};

}  // namespace

std::string_view to_string(Variable v) {
  return kVariableNames[static_cast<std::size_t>(v)];
}
std::string_view to_string(Term t) {
  return kTermNames[static_cast<std::size_t>(t)];
}
std::string_view to_string(OutTerm t) {
  return kOutTermNames[static_cast<std::size_t>(t)];
}

std::optional<Variable> variable_from_string(std::string_view s) {
  for (std::size_t i = 0; i < kVariableCount; ++i) {
    if (s == kVariableNames[i]) return static_cast<Variable>(i);
  }
  return std::nullopt;
}
std::optional<Term> term_from_string(std::string_view s) {
  for (std::size_t i = 0; i < kTermCount; ++i) {
    if (s == kTermNames[i]) return static_cast<Term>(i);
  }
  return std::nullopt;
}
std::optional<OutTerm> out_term_from_string(std::string_view s) {
  for (std::size_t i = 0; i < kOutTermCount; ++i) {
    if (s == kOutTermNames[i]) return static_cast<OutTerm>(i);
  }
  return std::nullopt;
}

double PowerProb::operator()(double x) const {
  if (x < 0.0 || x > 1.0) throw std::domain_error("PowerProb input outside [0,1]");
  return std::pow(x, exponent);
}

void VehicleKind::validate() const {
  if (id.empty()) throw std::domain_error("kind needs an id");
  if (!(length > 0.0)) throw std::domain_error("kind length must be positive");
  if (!immobile) {
    if (!(v_opt > 0.0) || !(v_opt <= v_max)) {
      throw std::domain_error("kind needs 0 < v_opt <= v_max");
    }
    if (!(accel_noise_sd >= 0.0)) {
      throw std::domain_error("kind noise sd must be non-negative");
    }
  }
  if (!(stress_min < 0.0) || !(stress_max > 0.0)) {
    throw std::domain_error("kind needs stress_min < 0 < stress_max");
  }
  if (!(lane_left_prob.exponent > 0.0) || !(lane_right_prob.exponent > 0.0)) {
    throw std::domain_error("lane probability exponents must be positive");
  }
  if (!(plaza_service_s >= 0.0)) {
    throw std::domain_error("plaza service time must be non-negative");
  }
  for (std::size_t i = 0; i < kOutTermCount; ++i) {
    if (!memberships.output[i].is_triangle()) {
      throw std::domain_error("output memberships must be plateau-free triangles");
    }
  }
}

MembershipSet default_membership_set(double time_scale, double positive_peak_scale) {
  MembershipSet ms;
  using MF = MembershipFunction;

  // Distance vocabulary (metres). The two-ahead gap uses the same shape
  // stretched by 2: the second vehicle matters at twice the range.
  auto fill_gap = [&ms](Variable v, double k) {
    ms.in(v, Term::very_small) = MF::trapezoid(0.0, 0.0, 5.0 * k, 15.0 * k);
    ms.in(v, Term::small) = MF::triangle(5.0 * k, 15.0 * k, 40.0 * k);
    ms.in(v, Term::medium) = MF::triangle(15.0 * k, 40.0 * k, 100.0 * k);
    ms.in(v, Term::big) = MF::rising_shoulder(40.0 * k, 100.0 * k);
  };
  fill_gap(Variable::front_gap, 1.0);
  fill_gap(Variable::back_gap, 1.0);
  fill_gap(Variable::next_gap, 2.0);

  // Collision-time vocabulary (seconds), stretched per class.
  auto fill_time = [&ms, time_scale](Variable v) {
    const double k = time_scale;
    ms.in(v, Term::very_small) = MF::trapezoid(0.0, 0.0, 1.0 * k, 3.0 * k);
    ms.in(v, Term::small) = MF::triangle(1.0 * k, 3.0 * k, 6.0 * k);
    ms.in(v, Term::medium) = MF::triangle(3.0 * k, 6.0 * k, 12.0 * k);
    ms.in(v, Term::big) = MF::rising_shoulder(6.0 * k, 12.0 * k);
  };
  fill_time(Variable::front_time);
  fill_time(Variable::stop_time);
  fill_time(Variable::next_time);
  fill_time(Variable::back_time);

  // Speed carries a single "small" term (m/s).
  ms.in(Variable::speed, Term::small) = MF::trapezoid(0.0, 0.0, 3.0, 8.0);

  // Acceleration output (m/s^2): adjacent peaks double as the feet of their
  // neighbours; the outermost feet mirror the inner ones.
  const double ps = 0.75 * positive_peak_scale;
  const double pm = 1.75 * positive_peak_scale;
  const double pb = 3.0 * positive_peak_scale;
  ms.output[static_cast<std::size_t>(OutTerm::NB)] = MF::triangle(-6.0, -4.0, -2.0);
  ms.output[static_cast<std::size_t>(OutTerm::NM)] = MF::triangle(-4.0, -2.0, -0.75);
  ms.output[static_cast<std::size_t>(OutTerm::NS)] = MF::triangle(-2.0, -0.75, 0.0);
  ms.output[static_cast<std::size_t>(OutTerm::Z)] = MF::triangle(-0.75, 0.0, ps);
  ms.output[static_cast<std::size_t>(OutTerm::PS)] = MF::triangle(0.0, ps, pm);
  ms.output[static_cast<std::size_t>(OutTerm::PM)] = MF::triangle(ps, pm, pb);
  ms.output[static_cast<std::size_t>(OutTerm::PB)] =
      MF::triangle(pm, pb, pb + (pb - pm));
  return ms;
}

VehicleKind make_passenger_kind() {
  VehicleKind k;
  k.id = "passenger";
  k.v_max = 36.0;
  k.v_opt = 28.0;
  k.length = 4.0;
  k.accel_noise_sd = 0.2;
  k.stress_max = 500.0;
  k.stress_min = -450.0;
  k.lane_right_prob = {1.0};
  k.lane_left_prob = {1.0};
  k.memberships = default_membership_set(1.0, 1.0);
  k.validate();
  return k;
}

VehicleKind make_long_kind() {
  VehicleKind k;
  k.id = "long";
  k.v_max = 25.0;
  k.v_opt = 20.0;
  k.length = 9.0;
  k.accel_noise_sd = 0.1;
  k.stress_max = 300.0;
  k.stress_min = -700.0;
  k.lane_right_prob = {1.0};
  k.lane_left_prob = {1.25};
  k.memberships = default_membership_set(1.3, 0.5);
  k.validate();
  return k;
}

VehicleKind make_obstacle_kind(double length) {
  VehicleKind k;
  k.id = "obstacle";
  k.v_max = 0.0;
  k.v_opt = 0.0;
  k.length = length;
  k.accel_noise_sd = 0.0;
  k.stress_max = 1.0;
  k.stress_min = -1.0;
  k.immobile = true;
  k.memberships = default_membership_set(1.0, 1.0);
  k.validate();
  return k;
}

const VehicleKind* KindLibrary::add(VehicleKind k) {
  k.validate();
  if (find(k.id) != nullptr) {
    throw std::domain_error("duplicate kind id: " + k.id);
  }
  kinds_.push_back(std::make_unique<VehicleKind>(std::move(k)));
  return kinds_.back().get();
}

const VehicleKind* KindLibrary::find(std::string_view id) const {
  for (const auto& k : kinds_) {
    if (k->id == id) return k.get();
  }
  return nullptr;
}

std::vector<const VehicleKind*> KindLibrary::all() const {
  std::vector<const VehicleKind*> out;
  out.reserve(kinds_.size());
  for (const auto& k : kinds_) out.push_back(k.get());
  return out;
}

KindLibrary KindLibrary::defaults() {
  KindLibrary lib;
  lib.add(make_passenger_kind());
  lib.add(make_long_kind());
  return lib;
}

}  // namespace ccasim
