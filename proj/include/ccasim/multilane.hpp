#pragma once

#include <optional>
#include <vector>

#include "ccasim/lane_dynamics.hpp"

namespace ccasim {

/// A road: lanes indexed left to right, each knowing whether a neighbour
/// lane exists on its side.
struct Road {
  std::vector<Lane> lanes;

  /// M empty lanes with position-correct neighbour flags (lane 0 is the
  /// left-most).
  static Road empty(std::size_t m);

  std::size_t lane_count() const { return lanes.size(); }

  /// Vehicles on the road, optionally counting immobile pseudo-vehicles.
  std::size_t vehicle_count(bool include_immobile = false) const;

  bool is_physical(double tol = 1e-9) const;

  /// True when no vehicle identity appears twice across the road.
  bool vids_unique() const;
};

/// The state a vehicle carries into the target lane: stress cut to a fifth
/// (lane-change relief, suppresses ping-pong) and the origin side recorded
/// so the matching original can be erased. Requires desire in {left, right}
/// and no transfer yet this step.
VehicleState sigma_cp(const VehicleState& s);

/// Whether s may move into lane c towards `dir`, and where: requires the
/// matching desire, no prior transfer this step, a free slot (no resident at
/// exactly the same midpoint), and the two safety gaps against the would-be
/// back and front neighbours. Returns the insertion index on success.
std::optional<std::size_t> trans_check(const VehicleState& s, const Lane& c, Dir dir);

/// Single-vehicle copy: inserts sigma_cp(s) into target when trans_check
/// passes. Returns true when the insertion happened.
bool copy_into(const VehicleState& s, Lane& target, Dir dir);

/// Single-cell erase: removes from `candidates` the original matching the
/// already-copied cell omega (same identity and kind, same position and
/// speed, stress/5 bit-equal to omega's, matching desire, not itself a
/// copy). Returns true when a cell was removed.
bool erase_matching(Lane& candidates, const VehicleState& omega);

/// Folded forms over whole configurations, ascending cell order.
void copy_all(const Lane& source, Lane& target, Dir dir);
void erase_all(Lane& candidates, const Lane& reference);

/// One second of the multi-lane model: left-to-right lane scan moving
/// vehicles to adjacent lanes (left precedence first on interior lanes),
/// then the synchronous single-lane update of each lane. Throws
/// std::logic_error if a vehicle identity ends up duplicated.
Road update_multilane(const Road& r, const BlockerOverlay& overlay,
                      const StepContext& ctx);

/// The same second computed as 2M synchronous applications of a
/// one-dimensional automaton over lattice cells (lane configuration, phase,
/// lane count, lane index, phase counter). Restructures the control flow
/// completely while producing bit-identical results to update_multilane;
/// used as a cross-check oracle.
Road meta_cca_step(const Road& r, const BlockerOverlay& overlay, const StepContext& ctx);

}  // namespace ccasim
