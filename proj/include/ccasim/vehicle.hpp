#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ccasim/kind.hpp"

namespace ccasim {

/// Lateral intent: which neighbouring lane a driver wants, or none.
enum class Dir : std::uint8_t { none = 0, left = 1, right = 2 };

std::string_view to_string(Dir d);

/// One automaton cell: in this model the cells are the vehicles themselves,
/// ordered along the lane, not fixed road segments.
struct VehicleState {
  const VehicleKind* kind = nullptr;
  double x = 0.0;       ///< midpoint position (m)
  double v = 0.0;       ///< speed (m/s)
  double stress = 0.0;  ///< accumulated deviation from the preferred speed (m)
  Dir desire = Dir::none;           ///< lane the driver wants to move to
  Dir transfer_origin = Dir::none;  ///< side this cell arrived from this step
  std::uint64_t vid = 0;            ///< stable identity across lane changes
  std::uint64_t entry_time = 0;     ///< step at which the vehicle entered

  double front_bumper() const { return x + 0.5 * kind->length; }
  double rear_bumper() const { return x - 0.5 * kind->length; }
};

/// A lane: vehicles strictly ordered by position with non-overlapping
/// bodies, plus flags telling drivers whether neighbouring lanes exist.
class Lane {
 public:
  Lane() = default;
  Lane(bool left_exists, bool right_exists)
      : left_exists_(left_exists), right_exists_(right_exists) {}

  std::size_t size() const { return cells_.size(); }
  bool empty() const { return cells_.empty(); }
  const VehicleState& at(std::size_t i) const { return cells_[i]; }
  VehicleState& at(std::size_t i) { return cells_[i]; }
  std::span<const VehicleState> vehicles() const { return cells_; }

  bool left_exists() const { return left_exists_; }
  bool right_exists() const { return right_exists_; }

  /// Ordered position at which a vehicle with midpoint x would sit; nullopt
  /// when some resident already has exactly that midpoint (the caller must
  /// treat the slot as unavailable).
  std::optional<std::size_t> insertion_index(double x) const;

  /// Inserts at ordered position n; throws std::domain_error when the result
  /// would break ordering or overlap bodies.
  void insert(std::size_t n, const VehicleState& s);

  /// Removes the vehicle at position n; throws std::domain_error when out of
  /// range.
  void erase(std::size_t n);

  void push_back_unchecked(const VehicleState& s) { cells_.push_back(s); }
  void clear() { cells_.clear(); }
  void reserve(std::size_t n) { cells_.reserve(n); }

  /// Bumper-to-bumper distance to the vehicle ahead; +inf for the leader.
  double gap_ahead(std::size_t i) const;

  /// Geometry invariant: strictly increasing midpoints and gaps >= -tol.
  bool is_physical(double tol = 1e-9) const;

  std::optional<std::size_t> index_of_vid(std::uint64_t vid) const;

 private:
  std::vector<VehicleState> cells_;
  bool left_exists_ = false;
  bool right_exists_ = false;
};

/// Functional forms of the single-lane editing operations (the simulator
/// mutates in place; these are convenient for tests and composition).
std::optional<std::size_t> index_of(const VehicleState& s, const Lane& c);
Lane insert_at(std::size_t n, const VehicleState& s, const Lane& c);
Lane delete_at(std::size_t n, const Lane& c);

/// A stationary virtual object merged into a driver's forward view.
struct VirtualNeighbor {
  double x = 0.0;
  double length = 0.0;
  double v = 0.0;
};

/// Forward-view overlay: a stationary wall (e.g. a closed toll barrier) that
/// drivers perceive once they are within its influence radius. Independently
/// of perception, the wall always bounds kinematics: the distance to it is
/// returned by clamp_gap() at any range so no vehicle can cross it between
/// two steps, even from outside the radius.
class BlockerOverlay {
 public:
  static BlockerOverlay none() { return BlockerOverlay(); }
  static BlockerOverlay wall(double x, double perception_radius);

  bool active() const { return active_; }

  /// The wall as a virtual front neighbour, when within the radius.
  std::optional<VirtualNeighbor> perceived_ahead(const VehicleState& s) const;

  /// Bumper distance to the wall regardless of radius; +inf when inactive.
  double clamp_gap(const VehicleState& s) const;

 private:
  bool active_ = false;
  double x_ = 0.0;
  double radius_ = 0.0;
};

/// What a driver knows about the neighbourhood (vehicle behind, self, two
/// ahead). Distances in metres, times in seconds; +inf encodes "no such
/// neighbour" or "no closing speed", and raw collision times keep their sign
/// when the gap is opening.
struct Perception {
  double front_gap = 0.0;
  double next_gap = 0.0;
  double back_gap = 0.0;
  double front_time_raw = 0.0;  ///< signed gap / closing-speed ratio
  double front_time = 0.0;      ///< raw time capped by the stress headroom
  double stop_time = 0.0;       ///< front gap covered at own speed
  double next_time = 0.0;       ///< signed, for the second vehicle ahead
  double back_time = 0.0;       ///< signed, for the vehicle behind
  double headroom_time = 0.0;   ///< (stress_max - stress) / v
};

/// Perception of vehicle i in lane c with the given forward overlay.
Perception compute_perception(const Lane& c, std::size_t i, const BlockerOverlay& overlay);

}  // namespace ccasim
