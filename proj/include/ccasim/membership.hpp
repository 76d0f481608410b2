#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace ccasim {

/// Piecewise-linear membership function over the extended reals.
///
/// The shape is a short list of (x, mu) breakpoints with strictly increasing
/// x; left of the first breakpoint the degree saturates to left_sat(), right
/// of the last to right_sat(). Inputs of -inf / +inf evaluate to those
/// saturation degrees, which is how "no neighbor" and "no closing speed"
/// readings enter the rule base without special cases.
class MembershipFunction {
 public:
  struct Breakpoint {
    double x = 0.0;
    double mu = 0.0;

    bool operator==(const Breakpoint&) const = default;
  };

  MembershipFunction() = default;

  /// Triangle with feet a, b and peak p (a <= p <= b, a < b). A foot that
  /// coincides with the peak becomes a vertical edge.
  static MembershipFunction triangle(double a, double p, double b);

  /// Trapezoid rising over [a,b], plateau [b,c], falling over [c,d].
  /// a == b or c == d produce vertical edges.
  static MembershipFunction trapezoid(double a, double b, double c, double d);

  /// 0 before a, rising to 1 at b, saturated 1 beyond.
  static MembershipFunction rising_shoulder(double a, double b);

  /// 1 before a, falling to 0 at b, saturated 0 beyond.
  static MembershipFunction falling_shoulder(double a, double b);

  /// Exact representation (deserialisation): breakpoints with strictly
  /// increasing x plus the two saturation degrees, validated.
  static MembershipFunction from_breakpoints(const std::vector<Breakpoint>& pts,
                                             double left_sat, double right_sat);

  /// Degree of membership of x, with x = +/-inf mapped to the saturations.
  double operator()(double x) const;

  /// True when the shape is a plateau-free triangle (single peak at degree 1),
  /// the only shape the defuzzifier accepts for outputs.
  bool is_triangle() const;

  /// Peak location; requires is_triangle().
  double peak() const;

  std::size_t breakpoint_count() const { return count_; }
  const Breakpoint& breakpoint(std::size_t i) const { return points_[i]; }
  double left_sat() const { return left_sat_; }
  double right_sat() const { return right_sat_; }

  bool operator==(const MembershipFunction&) const = default;

 private:
  static MembershipFunction from_points(const Breakpoint* pts, std::size_t n);

  std::array<Breakpoint, 4> points_{};
  std::size_t count_ = 0;
  double left_sat_ = 0.0;
  double right_sat_ = 0.0;
};

/// The preimage of degree w under a triangular membership function: the set
/// of x with mu(x) == w, at most one point per flank (vertical edges
/// contribute nothing, the peak counts once when w == 1). Empty when w <= 0
/// or w > 1.
struct Preimage {
  std::array<double, 2> x{};
  std::size_t count = 0;

  double sum() const {
    double s = 0.0;
    for (std::size_t i = 0; i < count; ++i) s += x[i];
    return s;
  }
};

Preimage preimage(const MembershipFunction& mf, double w);

}  // namespace ccasim
