#include "ccasim/vehicle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ccasim {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

std::string_view to_string(Dir d) {
  switch (d) {
    case Dir::none: return "none";
    case Dir::left: return "left";
    case Dir::right: return "right";
  }
  return "?";
}

std::optional<std::size_t> Lane::insertion_index(double x) const {
  const auto it = std::lower_bound(
      cells_.begin(), cells_.end(), x,
      [](const VehicleState& s, double value) { return s.x < value; });
  if (it != cells_.end() && it->x == x) return std::nullopt;  // occupied slot
  return static_cast<std::size_t>(it - cells_.begin());
}

void Lane::insert(std::size_t n, const VehicleState& s) {
  if (n > cells_.size()) throw std::domain_error("insert position out of range");
  if (s.kind == nullptr) throw std::domain_error("vehicle without a kind");
  if (n > 0) {
    const VehicleState& rear = cells_[n - 1];
    if (!(rear.x < s.x)) throw std::domain_error("insert breaks lane ordering");
    if (s.x - rear.x < 0.5 * (rear.kind->length + s.kind->length)) {
      throw std::domain_error("insert overlaps the vehicle behind");
    }
  }
  if (n < cells_.size()) {
    const VehicleState& front = cells_[n];
    if (!(s.x < front.x)) throw std::domain_error("insert breaks lane ordering");
    if (front.x - s.x < 0.5 * (front.kind->length + s.kind->length)) {
      throw std::domain_error("insert overlaps the vehicle ahead");
    }
  }
  cells_.insert(cells_.begin() + static_cast<std::ptrdiff_t>(n), s);
}

void Lane::erase(std::size_t n) {
  if (n >= cells_.size()) throw std::domain_error("erase position out of range");
  cells_.erase(cells_.begin() + static_cast<std::ptrdiff_t>(n));
}

double Lane::gap_ahead(std::size_t i) const {
  if (i + 1 >= cells_.size()) return kInf;
  const VehicleState& self = cells_[i];
  const VehicleState& front = cells_[i + 1];
  return front.x - self.x - 0.5 * (front.kind->length + self.kind->length);
}

bool Lane::is_physical(double tol) const {
  for (std::size_t i = 0; i + 1 < cells_.size(); ++i) {
    if (!(cells_[i].x < cells_[i + 1].x)) return false;
    if (gap_ahead(i) < -tol) return false;
  }
  return true;
}

std::optional<std::size_t> Lane::index_of_vid(std::uint64_t vid) const {
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    if (cells_[i].vid == vid) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> index_of(const VehicleState& s, const Lane& c) {
  return c.insertion_index(s.x);
}

Lane insert_at(std::size_t n, const VehicleState& s, const Lane& c) {
  Lane out = c;
  out.insert(n, s);
  return out;
}

Lane delete_at(std::size_t n, const Lane& c) {
  Lane out = c;
  out.erase(n);
  return out;
}

BlockerOverlay BlockerOverlay::wall(double x, double perception_radius) {
  if (!(perception_radius >= 0.0)) {
    throw std::domain_error("wall perception radius must be non-negative");
  }
  BlockerOverlay o;
  o.active_ = true;
  o.x_ = x;
  o.radius_ = perception_radius;
  return o;
}

std::optional<VirtualNeighbor> BlockerOverlay::perceived_ahead(const VehicleState& s) const {
  if (!active_) return std::nullopt;
  const double gap = x_ - s.front_bumper();
  if (gap < 0.0 || gap > radius_) return std::nullopt;
  return VirtualNeighbor{x_, 0.0, 0.0};
}

double BlockerOverlay::clamp_gap(const VehicleState& s) const {
  if (!active_) return kInf;
  return x_ - s.front_bumper();
}

namespace {

/// Signed time for `self` to close a gap on something moving at other_v:
/// gap / (v_self - v_other); +inf when the closing speed is exactly zero.
double closing_time(double gap, double v_self, double v_other) {
  const double closing = v_self - v_other;
  if (closing == 0.0) return kInf;
  return gap / closing;
}

}  // namespace

Perception compute_perception(const Lane& c, std::size_t i, const BlockerOverlay& overlay) {
  if (i >= c.size()) throw std::domain_error("perception index out of range");
  const VehicleState& self = c.at(i);

  // Forward view: up to two real neighbours merged with the overlay wall,
  // ordered by position.
  VirtualNeighbor ahead[3];
  std::size_t n_ahead = 0;
  for (std::size_t j = i + 1; j < c.size() && n_ahead < 2; ++j) {
    ahead[n_ahead++] = {c.at(j).x, c.at(j).kind->length, c.at(j).v};
  }
  if (const auto wall = overlay.perceived_ahead(self)) {
    // Insert the wall into the (already sorted) real neighbours; after any
    // real body at the same position.
    std::size_t pos = n_ahead;
    while (pos > 0 && wall->x < ahead[pos - 1].x) --pos;
    for (std::size_t k = n_ahead; k > pos; --k) ahead[k] = ahead[k - 1];
    ahead[pos] = *wall;
    n_ahead = std::min<std::size_t>(n_ahead + 1, 2);
  }

  Perception p;
  auto gap_to = [&self](const VirtualNeighbor& n) {
    return n.x - self.x - 0.5 * (n.length + self.kind->length);
  };

  p.front_gap = n_ahead > 0 ? gap_to(ahead[0]) : kInf;
  p.next_gap = n_ahead > 1 ? gap_to(ahead[1]) : kInf;
  p.front_time_raw =
      n_ahead > 0 ? closing_time(p.front_gap, self.v, ahead[0].v) : kInf;
  p.next_time = n_ahead > 1 ? closing_time(p.next_gap, self.v, ahead[1].v) : kInf;

  if (i > 0) {
    const VehicleState& back = c.at(i - 1);
    p.back_gap = self.x - back.x - 0.5 * (back.kind->length + self.kind->length);
    p.back_time = closing_time(p.back_gap, back.v, self.v);
  } else {
    p.back_gap = kInf;
    p.back_time = kInf;
  }

  p.headroom_time =
      self.v > 0.0 ? (self.kind->stress_max - self.stress) / self.v : kInf;
  p.stop_time = self.v > 0.0 ? p.front_gap / self.v : kInf;
  p.front_time = p.front_time_raw < 0.0 ? p.headroom_time
                                        : std::min(p.headroom_time, p.front_time_raw);
  return p;
}

}  // namespace ccasim
