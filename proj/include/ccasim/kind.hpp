#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ccasim/membership.hpp"

namespace ccasim {

/// Linguistic input variables of the driver model. Gaps are bumper-to-bumper
/// distances in metres; times are collision/exposure times in seconds.
enum class Variable : std::uint8_t {
  front_gap = 0,   ///< distance to the vehicle ahead
  next_gap = 1,    ///< distance to the second vehicle ahead
  back_gap = 2,    ///< distance to the vehicle behind
  front_time = 3,  ///< perceived collision time with the vehicle ahead
  stop_time = 4,   ///< time to cover the front gap at own speed (front halts)
  next_time = 5,   ///< collision time with the second vehicle ahead
  back_time = 6,   ///< time for the vehicle behind to close on us
  speed = 7,       ///< own speed
};
inline constexpr std::size_t kVariableCount = 8;

/// Linguistic terms of the input variables. The speed variable only carries
/// a "small" term.
enum class Term : std::uint8_t { very_small = 0, small = 1, medium = 2, big = 3 };
inline constexpr std::size_t kTermCount = 4;

/// Output acceleration terms (standard fuzzy-control shorthand: negative /
/// zero / positive, big / medium / small).
enum class OutTerm : std::uint8_t { NB = 0, NM = 1, NS = 2, Z = 3, PS = 4, PM = 5, PB = 6 };
inline constexpr std::size_t kOutTermCount = 7;

std::string_view to_string(Variable v);
std::string_view to_string(Term t);
std::string_view to_string(OutTerm t);
std::optional<Variable> variable_from_string(std::string_view s);
std::optional<Term> term_from_string(std::string_view s);
std::optional<OutTerm> out_term_from_string(std::string_view s);

/// Per-class membership tables: partial grid over (variable, term) for the
/// inputs plus a full set of plateau-free triangles for the acceleration
/// output.
struct MembershipSet {
  std::optional<MembershipFunction> input[kVariableCount][kTermCount];
  MembershipFunction output[kOutTermCount];

  const std::optional<MembershipFunction>& in(Variable v, Term t) const {
    return input[static_cast<std::size_t>(v)][static_cast<std::size_t>(t)];
  }
  std::optional<MembershipFunction>& in(Variable v, Term t) {
    return input[static_cast<std::size_t>(v)][static_cast<std::size_t>(t)];
  }
  const MembershipFunction& out(OutTerm t) const {
    return output[static_cast<std::size_t>(t)];
  }

  bool operator==(const MembershipSet&) const = default;
};

/// Monotone power map [0,1] -> [0,1], x |-> x^exponent; used for the
/// stress-to-probability curves of the lane-change decision.
struct PowerProb {
  double exponent = 1.0;
  double operator()(double x) const;
  bool operator==(const PowerProb&) const = default;
};

/// A vehicle class: physical envelope, stress range, lane-change probability
/// curves and the fuzzy perception vocabulary of its drivers.
struct VehicleKind {
  std::string id;
  double v_max = 0.0;          ///< m/s
  double v_opt = 0.0;          ///< m/s, preferred cruising speed
  double length = 0.0;         ///< m
  double accel_noise_sd = 0.0; ///< m/s^2, sd of the decision perturbation
  double stress_max = 1.0;
  double stress_min = -1.0;
  PowerProb lane_right_prob;   ///< P_R: normalized stress -> probability
  PowerProb lane_left_prob;    ///< P_L
  double plaza_service_s = 2.0;///< seconds held at a toll booth
  bool immobile = false;       ///< true only for roadblock pseudo-vehicles
  MembershipSet memberships;

  /// Throws std::domain_error when any class invariant is broken.
  void validate() const;
};

/// Default membership tables. time_scale stretches the collision-time terms
/// (slower vehicle classes look further ahead in time); positive_peak_scale
/// shrinks the positive acceleration peaks (weaker drive).
MembershipSet default_membership_set(double time_scale, double positive_peak_scale);

/// Built-in classes.
VehicleKind make_passenger_kind();
VehicleKind make_long_kind();
/// Immobile pseudo-vehicle used to model a roadblock of the given length.
VehicleKind make_obstacle_kind(double length);

/// Owning registry with address-stable entries; vehicles reference kinds by
/// pointer for the lifetime of the library.
class KindLibrary {
 public:
  const VehicleKind* add(VehicleKind k);
  const VehicleKind* find(std::string_view id) const;
  std::vector<const VehicleKind*> all() const;
  std::size_t size() const { return kinds_.size(); }

  /// passenger + long, in that order.
  static KindLibrary defaults();

 private:
  std::vector<std::unique_ptr<VehicleKind>> kinds_;
};

}  // namespace ccasim
