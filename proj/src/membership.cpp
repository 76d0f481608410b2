#include "ccasim/membership.hpp"

#include <cmath>
#include <stdexcept>

namespace ccasim {

MembershipFunction MembershipFunction::from_points(const Breakpoint* pts,
                                                   std::size_t n) {
  MembershipFunction mf;
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0 && !(pts[i].x > pts[i - 1].x)) {
      throw std::domain_error("membership breakpoints must strictly increase");
    }
    mf.points_[mf.count_++] = pts[i];
  }
  if (mf.count_ == 0) throw std::domain_error("membership needs breakpoints");
  mf.left_sat_ = 0.0;
  mf.right_sat_ = 0.0;
  return mf;
}

MembershipFunction MembershipFunction::triangle(double a, double p, double b) {
  if (!(a <= p && p <= b) || !(a < b)) {
    throw std::domain_error("triangle needs a <= p <= b with a < b");
  }
  Breakpoint pts[3];
  std::size_t n = 0;
  if (a < p) pts[n++] = {a, 0.0};
  pts[n++] = {p, 1.0};
  if (b > p) pts[n++] = {b, 0.0};
  return from_points(pts, n);
}

MembershipFunction MembershipFunction::trapezoid(double a, double b, double c,
                                                 double d) {
  if (!(a <= b && b <= c && c <= d) || !(a < d) || !(b < c)) {
    throw std::domain_error("trapezoid needs a <= b < c <= d");
  }
  Breakpoint pts[4];
  std::size_t n = 0;
  if (a < b) pts[n++] = {a, 0.0};
  pts[n++] = {b, 1.0};
  pts[n++] = {c, 1.0};
  if (d > c) pts[n++] = {d, 0.0};
  return from_points(pts, n);
}

MembershipFunction MembershipFunction::from_breakpoints(
    const std::vector<Breakpoint>& pts, double left_sat, double right_sat) {
  if (pts.empty() || pts.size() > 4) {
    throw std::domain_error("membership needs 1 to 4 breakpoints");
  }
  for (const Breakpoint& p : pts) {
    if (!(p.mu >= 0.0) || !(p.mu <= 1.0)) {
      throw std::domain_error("membership degrees must lie in [0,1]");
    }
  }
  if (!(left_sat >= 0.0) || !(left_sat <= 1.0) || !(right_sat >= 0.0) ||
      !(right_sat <= 1.0)) {
    throw std::domain_error("saturation degrees must lie in [0,1]");
  }
  MembershipFunction mf = from_points(pts.data(), pts.size());
  mf.left_sat_ = left_sat;
  mf.right_sat_ = right_sat;
  return mf;
}

MembershipFunction MembershipFunction::rising_shoulder(double a, double b) {
  if (!(a < b)) throw std::domain_error("shoulder needs a < b");
  Breakpoint pts[2] = {{a, 0.0}, {b, 1.0}};
  MembershipFunction mf = from_points(pts, 2);
  mf.right_sat_ = 1.0;
  return mf;
}

MembershipFunction MembershipFunction::falling_shoulder(double a, double b) {
  if (!(a < b)) throw std::domain_error("shoulder needs a < b");
  Breakpoint pts[2] = {{a, 1.0}, {b, 0.0}};
  MembershipFunction mf = from_points(pts, 2);
  mf.left_sat_ = 1.0;
  return mf;
}

double MembershipFunction::operator()(double x) const {
  if (std::isnan(x)) throw std::domain_error("membership of NaN");
  if (x < points_[0].x) return left_sat_;  // includes -inf
  const Breakpoint& last = points_[count_ - 1];
  if (x > last.x) return right_sat_;  // includes +inf
  for (std::size_t i = 0; i < count_; ++i) {
    if (x == points_[i].x) return points_[i].mu;
    if (i + 1 < count_ && x < points_[i + 1].x) {
      const Breakpoint& l = points_[i];
      const Breakpoint& r = points_[i + 1];
      return l.mu + (r.mu - l.mu) * (x - l.x) / (r.x - l.x);
    }
  }
  return last.mu;
}

bool MembershipFunction::is_triangle() const {
  if (left_sat_ != 0.0 || right_sat_ != 0.0) return false;
  std::size_t peaks = 0;
  for (std::size_t i = 0; i < count_; ++i) {
    if (points_[i].mu == 1.0) ++peaks;
    else if (points_[i].mu != 0.0) return false;
  }
  return peaks == 1;
}

double MembershipFunction::peak() const {
  if (!is_triangle()) throw std::domain_error("peak() needs a triangle");
  for (std::size_t i = 0; i < count_; ++i) {
    if (points_[i].mu == 1.0) return points_[i].x;
  }
  throw std::logic_error("triangle without peak");
}

Preimage preimage(const MembershipFunction& mf, double w) {
  Preimage pre;
  if (!mf.is_triangle()) {
    throw std::domain_error("preimage defined for triangular outputs only");
  }
  if (!(w > 0.0) || w > 1.0) return pre;  // empty set
  const double p = mf.peak();
  if (w == 1.0) {
    pre.x[pre.count++] = p;
    return pre;
  }
  // Locate the feet, if any (a vertical edge has no foot on that side).
  const std::size_t n = mf.breakpoint_count();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const auto& l = mf.breakpoint(i);
    const auto& r = mf.breakpoint(i + 1);
    if (l.mu == 0.0 && r.mu == 1.0) {
      pre.x[pre.count++] = l.x + w * (r.x - l.x);  // rising flank
    } else if (l.mu == 1.0 && r.mu == 0.0) {
      pre.x[pre.count++] = r.x - w * (r.x - l.x);  // falling flank
    }
  }
  return pre;
}

}  // namespace ccasim
