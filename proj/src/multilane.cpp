#include "ccasim/multilane.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ccasim {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

Road Road::empty(std::size_t m) {
  if (m == 0) throw std::domain_error("a road needs at least one lane");
  Road r;
  r.lanes.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    r.lanes.emplace_back(/*left_exists=*/i > 0, /*right_exists=*/i + 1 < m);
  }
  return r;
}

std::size_t Road::vehicle_count(bool include_immobile) const {
  std::size_t n = 0;
  for (const Lane& lane : lanes) {
    for (const VehicleState& s : lane.vehicles()) {
      if (include_immobile || !s.kind->immobile) ++n;
    }
  }
  return n;
}

bool Road::is_physical(double tol) const {
  for (const Lane& lane : lanes) {
    if (!lane.is_physical(tol)) return false;
  }
  return true;
}

bool Road::vids_unique() const {
  std::vector<std::uint64_t> vids;
  for (const Lane& lane : lanes) {
    for (const VehicleState& s : lane.vehicles()) vids.push_back(s.vid);
  }
  std::sort(vids.begin(), vids.end());
  return std::adjacent_find(vids.begin(), vids.end()) == vids.end();
}

VehicleState sigma_cp(const VehicleState& s) {
  if (s.desire == Dir::none || s.transfer_origin != Dir::none) {
    throw std::domain_error("sigma_cp needs a lane-changing original");
  }
  VehicleState cp = s;
  cp.stress = s.stress / 5.0;
  cp.transfer_origin = s.desire == Dir::left ? Dir::right : Dir::left;
  return cp;
}

std::optional<std::size_t> trans_check(const VehicleState& s, const Lane& c, Dir dir) {
  if (dir == Dir::none) throw std::domain_error("trans_check needs a direction");
  if (s.desire != dir || s.transfer_origin != Dir::none) return std::nullopt;

  const auto slot = c.insertion_index(s.x);
  if (!slot) return std::nullopt;  // a resident sits at exactly this midpoint
  const std::size_t j = *slot;

  // Safety gaps against the would-be back (j-1) and front (j) neighbours.
  double back_gap = kInf;
  double back_threshold = 0.0;
  if (j > 0) {
    const VehicleState& back = c.at(j - 1);
    back_gap = s.x - back.x - 0.5 * (back.kind->length + s.kind->length);
    back_threshold = std::max(
        0.0, std::pow(back.v, 1.2) - s.v + std::abs(back.v - s.v) + 3.0);
  }
  double front_gap = kInf;
  double front_threshold = 0.0;
  if (j < c.size()) {
    const VehicleState& front = c.at(j);
    front_gap = front.x - s.x - 0.5 * (front.kind->length + s.kind->length);
    front_threshold = std::max(0.0, std::pow(s.v, 1.25) - front.v + 3.0);
  }
  if (!(back_gap > back_threshold)) return std::nullopt;
  if (!(front_gap > front_threshold)) return std::nullopt;
  return j;
}

bool copy_into(const VehicleState& s, Lane& target, Dir dir) {
  const auto j = trans_check(s, target, dir);
  if (!j) return false;
  target.insert(*j, sigma_cp(s));
  return true;
}

bool erase_matching(Lane& candidates, const VehicleState& omega) {
  if (omega.transfer_origin == Dir::none) return false;  // not a copy
  if (omega.desire != Dir::left && omega.desire != Dir::right) return false;
  // A copy records the side it came from as the opposite of its desire.
  const Dir expected_origin =
      omega.desire == Dir::left ? Dir::right : Dir::left;
  if (omega.transfer_origin != expected_origin) return false;

  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const VehicleState& cell = candidates.at(i);
    if (cell.x < omega.x) continue;
    if (cell.x > omega.x) break;  // cells are ordered; no match possible
    const bool match = cell.vid == omega.vid && cell.kind == omega.kind &&
                       cell.v == omega.v && cell.desire == omega.desire &&
                       cell.transfer_origin == Dir::none &&
                       cell.stress / 5.0 == omega.stress;
    if (match) {
      candidates.erase(i);
      return true;
    }
  }
  return false;
}

void copy_all(const Lane& source, Lane& target, Dir dir) {
  for (std::size_t i = 0; i < source.size(); ++i) {
    copy_into(source.at(i), target, dir);
  }
}

void erase_all(Lane& candidates, const Lane& reference) {
  for (std::size_t i = 0; i < reference.size(); ++i) {
    erase_matching(candidates, reference.at(i));
  }
}

namespace {

/// Moves eligible vehicles of lanes[src] into lanes[dst]: copy fold over the
/// source, then erase fold over the updated target. Computing the target
/// once is sound because re-running the copy fold against it would refuse
/// every insertion (each copy occupies its original's midpoint).
void transfer(Road& r, std::size_t src, std::size_t dst, Dir dir) {
  copy_all(r.lanes[src], r.lanes[dst], dir);
  erase_all(r.lanes[src], r.lanes[dst]);
}

}  // namespace

Road update_multilane(const Road& road, const BlockerOverlay& overlay,
                      const StepContext& ctx) {
  Road r = road;
  const std::size_t m = r.lanes.size();
  if (m == 0) throw std::domain_error("empty road");
  if (m == 1) {
    r.lanes[0] = step_lane(r.lanes[0], overlay, ctx);
    return r;
  }

  for (std::size_t i = 0; i < m; ++i) {
    if (i == 0) {
      transfer(r, 0, 1, Dir::right);
    }
    if (i > 0 && i + 1 < m) {
      transfer(r, i, i - 1, Dir::left);
      transfer(r, i, i + 1, Dir::right);
      r.lanes[i - 1] = step_lane(r.lanes[i - 1], overlay, ctx);
    }
    if (i == m - 1) {
      transfer(r, m - 1, m - 2, Dir::left);
      r.lanes[m - 2] = step_lane(r.lanes[m - 2], overlay, ctx);
      r.lanes[m - 1] = step_lane(r.lanes[m - 1], overlay, ctx);
    }
  }

  if (!r.vids_unique()) {
    throw std::logic_error("vehicle identity duplicated by the lane scan");
  }
  return r;
}

namespace {

enum class MetaPhase : std::uint8_t { copy, erase };

struct MetaCell {
  Lane config;
  MetaPhase phase = MetaPhase::copy;
  std::size_t m = 0;  ///< lane count
  std::size_t p = 0;  ///< lane index (static)
  std::size_t k = 0;  ///< phase counter, advanced on every erase phase
};

/// The local rule: the new value of cell `self` given the previous values of
/// its von Neumann neighbourhood (null = no lane there).
MetaCell meta_delta(const MetaCell* left, const MetaCell& self, const MetaCell* right,
                    const BlockerOverlay& overlay, const StepContext& ctx) {
  MetaCell next = self;
  const std::size_t k = self.k;

  if (self.phase == MetaPhase::copy) {
    // Pull phase: the lanes adjacent to lane k take its movers.
    if (k == 0) {
      if (self.p == k + 1) {
        if (!left) throw std::logic_error("meta cell expects a left neighbour");
        copy_all(left->config, next.config, Dir::right);
      }
    } else if (k < self.m - 1) {
      if (self.p == k - 1) {
        if (!right) throw std::logic_error("meta cell expects a right neighbour");
        copy_all(right->config, next.config, Dir::left);
      }
      if (self.p == k + 1) {
        if (!left) throw std::logic_error("meta cell expects a left neighbour");
        copy_all(left->config, next.config, Dir::right);
      }
    } else {  // k == m - 1
      if (self.p == k - 1) {
        if (!right) throw std::logic_error("meta cell expects a right neighbour");
        copy_all(right->config, next.config, Dir::left);
      }
    }
    next.phase = MetaPhase::erase;
    return next;
  }

  // Erase phase: lane k drops the originals its neighbours now carry; the
  // final phase also runs every lane's synchronous update.
  if (k == 0) {
    if (self.p == k) {
      if (!right) throw std::logic_error("meta cell expects a right neighbour");
      erase_all(next.config, right->config);
    }
  } else if (k < self.m - 1) {
    if (self.p == k) {
      if (!left) throw std::logic_error("meta cell expects a left neighbour");
      erase_all(next.config, left->config);
      if (!right) throw std::logic_error("meta cell expects a right neighbour");
      erase_all(next.config, right->config);
    }
  } else {  // k == m - 1
    if (self.p == k) {
      if (!left) throw std::logic_error("meta cell expects a left neighbour");
      erase_all(next.config, left->config);
    }
    next.config = step_lane(next.config, overlay, ctx);
  }
  next.k = (k + 1) % self.m;
  next.phase = MetaPhase::copy;
  return next;
}

}  // namespace

Road meta_cca_step(const Road& road, const BlockerOverlay& overlay,
                   const StepContext& ctx) {
  const std::size_t m = road.lanes.size();
  if (m == 0) throw std::domain_error("empty road");
  if (m == 1) {
    Road r = road;
    r.lanes[0] = step_lane(r.lanes[0], overlay, ctx);
    return r;
  }

  std::vector<MetaCell> cells(m);
  for (std::size_t i = 0; i < m; ++i) {
    cells[i] = MetaCell{road.lanes[i], MetaPhase::copy, m, i, 0};
  }

  for (std::size_t round = 0; round < 2 * m; ++round) {
    const std::vector<MetaCell> old = cells;
    for (std::size_t i = 0; i < m; ++i) {
      const MetaCell* left = i > 0 ? &old[i - 1] : nullptr;
      const MetaCell* right = i + 1 < m ? &old[i + 1] : nullptr;
      cells[i] = meta_delta(left, old[i], right, overlay, ctx);
    }
  }

  Road out = road;
  for (std::size_t i = 0; i < m; ++i) {
    if (cells[i].phase != MetaPhase::copy || cells[i].k != 0) {
      throw std::logic_error("meta lattice did not return to its rest phase");
    }
    out.lanes[i] = std::move(cells[i].config);
  }
  return out;
}

}  // namespace ccasim
