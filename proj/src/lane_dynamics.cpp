#include "ccasim/lane_dynamics.hpp"

#include <algorithm>
#include <thread>
#include <vector>

namespace ccasim {

double acceleration(const Perception& p, double v, const VehicleKind& k,
                    const RuleBase& rules) {
  FuzzyInputs in;
  in.set(Variable::front_gap, p.front_gap);
  in.set(Variable::next_gap, p.next_gap);
  in.set(Variable::back_gap, p.back_gap);
  in.set(Variable::front_time, p.front_time);
  in.set(Variable::stop_time, p.stop_time);
  in.set(Variable::next_time, p.next_time);
  in.set(Variable::back_time, p.back_time);
  in.set(Variable::speed, v);
  const double primary = eval_module(rules.primary, in, k);
  const double anticipatory = eval_module(rules.anticipatory, in, k);
  return combine_accelerations(primary, anticipatory);
}

double update_velocity(double v, double a, double front_gap, double v_max) {
  return std::min(std::min(v_max, front_gap), std::max(0.0, v + a));
}

double update_position(double x, double v_next) { return x + v_next; }

double phi(const Perception& p, const VehicleKind& k) {
  const double t_vs =
      membership(k, Variable::front_time, Term::very_small, p.front_time);
  const double t_s = membership(k, Variable::front_time, Term::small, p.front_time);
  const double g_s = membership(k, Variable::front_gap, Term::small, p.front_gap);
  const double g_m = membership(k, Variable::front_gap, Term::medium, p.front_gap);
  return std::max(std::max(std::min(t_vs, g_m), std::min(t_vs, g_s)),
                  std::max(std::min(t_s, g_m), std::min(t_s, g_s)));
}

double update_stress(double s, double v_next, const VehicleKind& k,
                     double front_time_raw, double phi_value, rng::Stream& u) {
  double s_acc = s + (v_next - k.v_opt) * u.next_unit();
  if (s_acc < 0.0 && s_acc > 0.5 * k.stress_min) {
    if (front_time_raw < 0.0) {
      s_acc *= 0.5;  // gap opening: queue is moving, relax
    } else {
      s_acc *= 1.0 + phi_value;  // closing on a slow leader: agitate
    }
  }
  return std::clamp(s_acc, k.stress_min, k.stress_max);
}

Dir eval_lane_desire(const VehicleKind& k, double v, double s, bool left_exists,
                     bool right_exists, const rng::StepRng& step,
                     std::uint64_t vid) {
  if (s >= 0.0) {
    const double ns = s / k.stress_max;
    auto right = step.stream(vid, rng::Purpose::lane_right);
    return right.bernoulli(k.lane_right_prob(ns)) ? Dir::right : Dir::none;
  }
  const double ns = s / k.stress_min;
  auto left = step.stream(vid, rng::Purpose::lane_left);
  if (!left.bernoulli(k.lane_left_prob(ns))) return Dir::none;
  auto jam = step.stream(vid, rng::Purpose::lane_jam);
  const double crawling = membership(k, Variable::speed, Term::small, v);
  if (!jam.bernoulli(crawling)) return Dir::left;
  // Jammed: aim for whichever side exists; mid-road drivers favour the left.
  if (!right_exists) return Dir::left;
  if (!left_exists) return Dir::right;
  auto side = step.stream(vid, rng::Purpose::lane_side);
  return side.bernoulli(0.7) ? Dir::left : Dir::right;
}

VehicleState updated_vehicle(const Lane& c, std::size_t i,
                             const BlockerOverlay& overlay, const StepContext& ctx) {
  const VehicleState& cur = c.at(i);
  const VehicleKind& k = *cur.kind;
  if (k.immobile) return cur;

  const Perception p = compute_perception(c, i, overlay);
  double a = ctx.accel_override ? *ctx.accel_override
                                : acceleration(p, cur.v, k, *ctx.rules);
  if (ctx.noise_enabled && k.accel_noise_sd > 0.0) {
    auto noise = ctx.step_rng().stream(cur.vid, rng::Purpose::accel_noise);
    a += noise.gaussian(k.accel_noise_sd);
  }

  // The wall bounds motion from any distance; perception already folds it in
  // once inside the influence radius.
  const double room = std::min(p.front_gap, overlay.clamp_gap(cur));

  VehicleState next = cur;
  next.v = update_velocity(cur.v, a, room, k.v_max);
  next.x = update_position(cur.x, next.v);
  auto u = ctx.step_rng().stream(cur.vid, rng::Purpose::stress);
  next.stress = update_stress(cur.stress, next.v, k, p.front_time_raw, phi(p, k), u);
  next.desire = eval_lane_desire(k, cur.v, next.stress, c.left_exists(),
                                 c.right_exists(), ctx.step_rng(), cur.vid);
  next.transfer_origin = Dir::none;
  return next;
}

Lane step_lane(const Lane& c, const BlockerOverlay& overlay, const StepContext& ctx) {
  Lane out(c.left_exists(), c.right_exists());
  out.reserve(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    out.push_back_unchecked(updated_vehicle(c, i, overlay, ctx));
  }
  return out;
}

Lane step_lane_parallel(const Lane& c, const BlockerOverlay& overlay,
                        const StepContext& ctx, unsigned threads) {
  if (threads <= 1 || c.size() < 2) return step_lane(c, overlay, ctx);
  const std::size_t n = c.size();
  std::vector<VehicleState> cells(n);
  const unsigned workers = std::min<unsigned>(threads, static_cast<unsigned>(n));
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t lo = n * w / workers;
    const std::size_t hi = n * (w + 1) / workers;
    pool.emplace_back([&, lo, hi] {
      for (std::size_t i = lo; i < hi; ++i) {
        cells[i] = updated_vehicle(c, i, overlay, ctx);
      }
    });
  }
  for (auto& th : pool) th.join();
  Lane out(c.left_exists(), c.right_exists());
  out.reserve(n);
  for (const VehicleState& s : cells) out.push_back_unchecked(s);
  return out;
}

}  // namespace ccasim
