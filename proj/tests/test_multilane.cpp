#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "ccasim/multilane.hpp"

using namespace ccasim;

namespace {

const VehicleKind& passenger() {
  static const VehicleKind k = make_passenger_kind();
  return k;
}

VehicleState car(double x, double v, double stress = 0.0, std::uint64_t vid = 1,
                 Dir desire = Dir::none) {
  VehicleState s;
  s.kind = &passenger();
  s.x = x;
  s.v = v;
  s.stress = stress;
  s.vid = vid;
  s.desire = desire;
  return s;
}

bool cells_equal(const VehicleState& a, const VehicleState& b) {
  return a.kind == b.kind && a.x == b.x && a.v == b.v && a.stress == b.stress &&
         a.desire == b.desire && a.transfer_origin == b.transfer_origin &&
         a.vid == b.vid && a.entry_time == b.entry_time;
}

bool lanes_equal(const Lane& a, const Lane& b) {
  if (a.size() != b.size() || a.left_exists() != b.left_exists() ||
      a.right_exists() != b.right_exists()) {
    return false;
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!cells_equal(a.at(i), b.at(i))) return false;
  }
  return true;
}

bool roads_equal(const Road& a, const Road& b) {
  if (a.lane_count() != b.lane_count()) return false;
  for (std::size_t i = 0; i < a.lane_count(); ++i) {
    if (!lanes_equal(a.lanes[i], b.lanes[i])) return false;
  }
  return true;
}

Road random_road(rng::Stream& gen, std::size_t m) {
  Road r = Road::empty(m);
  std::uint64_t vid = 1;
  for (Lane& lane : r.lanes) {
    double x = 5.0;
    const int n = static_cast<int>(gen.next_unit() * 9.0);
    for (int j = 0; j < n; ++j) {
      VehicleState s = car(x, 36.0 * gen.next_unit(),
                           -440.0 + 930.0 * gen.next_unit(), vid++);
      const double pick = gen.next_unit();
      if (pick < 0.25) s.desire = Dir::left;
      else if (pick < 0.5) s.desire = Dir::right;
      lane.insert(j, s);
      x += 4.5 + 50.0 * gen.next_unit();
    }
  }
  return r;
}

}  // namespace

TEST_CASE("an empty road knows its lane geometry") {
  const Road three = Road::empty(3);
  REQUIRE(three.lane_count() == 3);
  CHECK_FALSE(three.lanes[0].left_exists());
  CHECK(three.lanes[0].right_exists());
  CHECK(three.lanes[1].left_exists());
  CHECK(three.lanes[1].right_exists());
  CHECK(three.lanes[2].left_exists());
  CHECK_FALSE(three.lanes[2].right_exists());

  const Road two = Road::empty(2);
  CHECK_FALSE(two.lanes[0].left_exists());
  CHECK(two.lanes[0].right_exists());
  CHECK(two.lanes[1].left_exists());
  CHECK_FALSE(two.lanes[1].right_exists());

  const Road one = Road::empty(1);
  CHECK_FALSE(one.lanes[0].left_exists());
  CHECK_FALSE(one.lanes[0].right_exists());
}

TEST_CASE("vehicle counting can skip immobile pseudo-vehicles") {
  static const VehicleKind obstacle = make_obstacle_kind(100.0);
  Road r = Road::empty(2);
  r.lanes[0].insert(0, car(10, 20, 0, 1));
  VehicleState block;
  block.kind = &obstacle;
  block.x = 200.0;
  block.vid = 0;
  r.lanes[1].insert(0, block);

  CHECK(r.vehicle_count() == 1);
  CHECK(r.vehicle_count(true) == 2);
  CHECK(r.vids_unique());

  r.lanes[1].insert(1, car(400, 20, 0, 1));  // duplicate vid across lanes
  CHECK_FALSE(r.vids_unique());
}

TEST_CASE("the transfer copy relieves stress and records the origin side") {
  VehicleState s = car(100, 25, 10.0, 7, Dir::left);
  const VehicleState cp = sigma_cp(s);
  CHECK(cp.stress == 2.0);
  CHECK(cp.desire == Dir::left);
  CHECK(cp.transfer_origin == Dir::right);
  CHECK(cp.x == 100.0);
  CHECK(cp.v == 25.0);
  CHECK(cp.vid == 7);

  VehicleState t = car(50, 20, -50.0, 8, Dir::right);
  const VehicleState cp2 = sigma_cp(t);
  CHECK(cp2.stress == -10.0);
  CHECK(cp2.transfer_origin == Dir::left);
}

TEST_CASE("only vehicles that want a lane can be copied") {
  CHECK_THROWS_AS(sigma_cp(car(100, 25, 10, 7, Dir::none)), std::domain_error);
  VehicleState already = car(100, 25, 10, 7, Dir::left);
  already.transfer_origin = Dir::right;
  CHECK_THROWS_AS(sigma_cp(already), std::domain_error);
}

TEST_CASE("lane entry requires matching desire and no prior transfer") {
  const Lane empty(true, true);
  CHECK(trans_check(car(100, 25, 0, 1, Dir::left), empty, Dir::left) == 0);
  CHECK(trans_check(car(100, 25, 0, 1, Dir::right), empty, Dir::left) ==
        std::nullopt);
  CHECK(trans_check(car(100, 25, 0, 1, Dir::none), empty, Dir::left) ==
        std::nullopt);

  VehicleState moved = car(100, 25, 0, 1, Dir::left);
  moved.transfer_origin = Dir::right;
  CHECK(trans_check(moved, empty, Dir::left) == std::nullopt);
}

TEST_CASE("lane entry refuses an exact midpoint tie") {
  Lane c(true, true);
  c.insert(0, car(100, 20, 0, 2));
  CHECK(trans_check(car(100, 25, 0, 1, Dir::left), c, Dir::left) ==
        std::nullopt);
}

TEST_CASE("the rear safety gap scales with the follower's speed") {
  // Follower at 20 m/s against a 25 m/s mover: threshold ~19.41 m.
  const double threshold = std::pow(20.0, 1.2) - 25.0 + 5.0 + 3.0;
  const VehicleState s = car(100, 25, 0, 1, Dir::left);

  Lane tight(true, true);
  tight.insert(0, car(96.0 - (threshold - 1e-6), 20, 0, 2));
  CHECK(trans_check(s, tight, Dir::left) == std::nullopt);

  Lane roomy(true, true);
  roomy.insert(0, car(96.0 - (threshold + 1e-6), 20, 0, 2));
  CHECK(trans_check(s, roomy, Dir::left) == 1);
}

TEST_CASE("a slow follower needs almost no rear gap") {
  // Threshold collapses to max(0, 0 - 25 + 25 + 3) = 3 m.
  const VehicleState s = car(100, 25, 0, 1, Dir::left);
  Lane c(true, true);
  c.insert(0, car(96.0 - 3.5, 0, 0, 2));
  CHECK(trans_check(s, c, Dir::left) == 1);
  Lane tight(true, true);
  tight.insert(0, car(96.0 - 2.5, 0, 0, 2));
  CHECK(trans_check(s, tight, Dir::left) == std::nullopt);
  // The gap must clear the threshold strictly: exactly 3 m refuses.
  Lane exact(true, true);
  exact.insert(0, car(93.0, 0, 0, 2));
  CHECK(trans_check(s, exact, Dir::left) == std::nullopt);
}

TEST_CASE("the forward safety gap scales with the mover's speed") {
  // 25 m/s mover behind a 25 m/s leader: threshold ~33.90 m.
  const double threshold = std::pow(25.0, 1.25) - 25.0 + 3.0;
  const VehicleState s = car(100, 25, 0, 1, Dir::left);

  Lane tight(true, true);
  tight.insert(0, car(104.0 + (threshold - 1e-6), 25, 0, 2));
  CHECK(trans_check(s, tight, Dir::left) == std::nullopt);

  Lane roomy(true, true);
  roomy.insert(0, car(104.0 + (threshold + 1e-6), 25, 0, 2));
  CHECK(trans_check(s, roomy, Dir::left) == 0);
}

TEST_CASE("lane entry checks both neighbours at once") {
  const double back_threshold = std::pow(20.0, 1.2) - 25.0 + 5.0 + 3.0;
  const double front_threshold = std::pow(25.0, 1.25) - 25.0 + 3.0;
  const VehicleState s = car(100, 25, 0, 1, Dir::right);

  Lane c(true, true);
  c.insert(0, car(96.0 - (back_threshold + 1e-6), 20, 0, 2));
  c.insert(1, car(104.0 + (front_threshold + 1e-6), 25, 0, 3));
  CHECK(trans_check(s, c, Dir::right) == 1);

  Lane blocked(true, true);
  blocked.insert(0, car(96.0 - (back_threshold + 1e-6), 20, 0, 2));
  blocked.insert(1, car(104.0 + (front_threshold - 1e-6), 25, 0, 3));
  CHECK(trans_check(s, blocked, Dir::right) == std::nullopt);
}

TEST_CASE("direction none is a caller bug") {
  const Lane empty(true, true);
  CHECK_THROWS_AS(trans_check(car(100, 25, 0, 1, Dir::left), empty, Dir::none),
                  std::domain_error);
}

TEST_CASE("copy_into inserts the relieved copy when the move is legal") {
  Lane target(true, true);
  const VehicleState s = car(100, 25, 10.0, 7, Dir::left);
  CHECK(copy_into(s, target, Dir::left));
  REQUIRE(target.size() == 1);
  CHECK(target.at(0).stress == 2.0);
  CHECK(target.at(0).transfer_origin == Dir::right);

  // Re-running the copy fold refuses: the copy occupies the midpoint.
  Lane unchanged = target;
  CHECK_FALSE(copy_into(s, target, Dir::left));
  CHECK(lanes_equal(target, unchanged));

  Lane wrong_way(true, true);
  CHECK_FALSE(copy_into(car(50, 20, 4, 9, Dir::right), wrong_way, Dir::left));
  CHECK(wrong_way.empty());
}

TEST_CASE("erase_matching removes exactly the transferred original") {
  Lane source(true, true);
  source.insert(0, car(100, 25, 10.0, 7, Dir::left));

  VehicleState omega = car(100, 25, 2.0, 7, Dir::left);
  omega.transfer_origin = Dir::right;

  Lane work = source;
  CHECK(erase_matching(work, omega));
  CHECK(work.empty());
}

TEST_CASE("erase_matching leaves near-misses alone") {
  Lane source(true, true);
  source.insert(0, car(100, 25, 11.0, 7, Dir::left));  // stress mismatch

  VehicleState omega = car(100, 25, 2.0, 7, Dir::left);
  omega.transfer_origin = Dir::right;
  Lane work = source;
  CHECK_FALSE(erase_matching(work, omega));
  CHECK(lanes_equal(work, source));

  Lane other_vid(true, true);
  other_vid.insert(0, car(100, 25, 10.0, 8, Dir::left));
  work = other_vid;
  CHECK_FALSE(erase_matching(work, omega));
  CHECK(lanes_equal(work, other_vid));

  // A native (non-copy) reference never erases anything.
  Lane native_ref(true, true);
  native_ref.insert(0, car(100, 25, 10.0, 7, Dir::left));
  work = native_ref;
  CHECK_FALSE(erase_matching(work, car(100, 25, 2.0, 7, Dir::left)));
  CHECK(lanes_equal(work, native_ref));
}

TEST_CASE("the copy and erase folds move a whole platoon") {
  Lane source(false, true);
  source.insert(0, car(50, 20, 100.0, 1, Dir::right));
  source.insert(1, car(200, 25, 50.0, 2, Dir::right));
  source.insert(2, car(400, 30, 0.0, 3, Dir::none));
  Lane target(true, false);

  copy_all(source, target, Dir::right);
  REQUIRE(target.size() == 2);
  CHECK(target.at(0).vid == 1);
  CHECK(target.at(0).stress == 20.0);
  CHECK(target.at(1).vid == 2);
  CHECK(target.at(1).stress == 10.0);

  erase_all(source, target);
  REQUIRE(source.size() == 1);
  CHECK(source.at(0).vid == 3);
}

TEST_CASE("an empty road updates to an empty road") {
  StepContext ctx;
  ctx.seed = 1;
  const Road r = Road::empty(3);
  const Road after = update_multilane(r, BlockerOverlay::none(), ctx);
  CHECK(roads_equal(after, r));
}

TEST_CASE("without desires the update is lane-by-lane") {
  StepContext ctx;
  ctx.seed = 77;
  ctx.noise_enabled = false;

  Road r = Road::empty(2);
  r.lanes[0].insert(0, car(10, 20, 5.0, 1));
  r.lanes[0].insert(1, car(60, 25, -30.0, 2));
  r.lanes[1].insert(0, car(35, 30, 0.0, 3));

  const Road after = update_multilane(r, BlockerOverlay::none(), ctx);
  CHECK(lanes_equal(after.lanes[0],
                    step_lane(r.lanes[0], BlockerOverlay::none(), ctx)));
  CHECK(lanes_equal(after.lanes[1],
                    step_lane(r.lanes[1], BlockerOverlay::none(), ctx)));
}

TEST_CASE("a lone mover lands in the target lane with relieved stress") {
  StepContext ctx;
  ctx.seed = 5;
  ctx.noise_enabled = false;

  Road r = Road::empty(2);
  r.lanes[1].insert(0, car(100, 25, -50.0, 9, Dir::left));

  // Trace: the copy (stress -10, origin right) lands in lane 0, the original
  // is erased, and both lanes then update synchronously.
  Lane staged(false, true);
  staged.insert(0, sigma_cp(r.lanes[1].at(0)));
  const Lane expected0 = step_lane(staged, BlockerOverlay::none(), ctx);

  const Road after = update_multilane(r, BlockerOverlay::none(), ctx);
  CHECK(after.lanes[1].empty());
  CHECK(lanes_equal(after.lanes[0], expected0));
  CHECK(after.vehicle_count() == 1);
}

TEST_CASE("a blocked mover stays and updates in place") {
  StepContext ctx;
  ctx.seed = 6;
  ctx.noise_enabled = false;

  Road r = Road::empty(2);
  r.lanes[1].insert(0, car(100, 25, -50.0, 9, Dir::left));
  r.lanes[0].insert(0, car(100, 25, 0.0, 4));  // exact midpoint tie blocks

  const Road after = update_multilane(r, BlockerOverlay::none(), ctx);
  CHECK(after.lanes[1].size() == 1);
  CHECK(after.lanes[1].at(0).vid == 9);
  CHECK(after.lanes[0].size() == 1);
  CHECK(after.lanes[0].at(0).vid == 4);
}

TEST_CASE("identities are conserved across the update") {
  rng::Stream gen(41, 0, 0, 0, rng::Purpose::stress);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t m = 2 + static_cast<std::size_t>(gen.next_unit() * 3.0);
    const Road r = random_road(gen, m);
    StepContext ctx;
    ctx.seed = 3000 + trial;
    const Road after = update_multilane(r, BlockerOverlay::none(), ctx);
    CHECK(after.vehicle_count(true) == r.vehicle_count(true));
    CHECK(after.vids_unique());
    CHECK(after.is_physical());
  }
}

TEST_CASE("pre-existing duplicate identities are rejected") {
  StepContext ctx;
  ctx.seed = 8;
  Road r = Road::empty(2);
  r.lanes[0].insert(0, car(10, 20, 0, 5));
  r.lanes[1].insert(0, car(300, 20, 0, 5));
  CHECK_THROWS_AS(update_multilane(r, BlockerOverlay::none(), ctx),
                  std::logic_error);
}

TEST_CASE("the lattice reformulation reproduces the direct update") {
  rng::Stream gen(43, 0, 0, 0, rng::Purpose::stress);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = 1 + static_cast<std::size_t>(gen.next_unit() * 4.0);
    const Road r = random_road(gen, m);
    StepContext ctx;
    ctx.seed = 4000 + trial;
    ctx.t = trial;
    const Road direct = update_multilane(r, BlockerOverlay::none(), ctx);
    const Road lattice = meta_cca_step(r, BlockerOverlay::none(), ctx);
    CHECK(roads_equal(direct, lattice));
  }
}

TEST_CASE("the lattice reformulation agrees under a wall overlay") {
  rng::Stream gen(47, 0, 0, 0, rng::Purpose::stress);
  const BlockerOverlay wall = BlockerOverlay::wall(500.0, 10.0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t m = 2 + static_cast<std::size_t>(gen.next_unit() * 2.0);
    const Road r = random_road(gen, m);
    StepContext ctx;
    ctx.seed = 5000 + trial;
    const Road direct = update_multilane(r, wall, ctx);
    const Road lattice = meta_cca_step(r, wall, ctx);
    CHECK(roads_equal(direct, lattice));
  }
}

TEST_CASE("multi-step evolution keeps the road physical") {
  rng::Stream gen(53, 0, 0, 0, rng::Purpose::stress);
  Road r = random_road(gen, 3);
  for (std::uint64_t t = 0; t < 30; ++t) {
    StepContext ctx;
    ctx.seed = 99;
    ctx.t = t;
    r = update_multilane(r, BlockerOverlay::none(), ctx);
    REQUIRE(r.is_physical());
    REQUIRE(r.vids_unique());
  }
}
