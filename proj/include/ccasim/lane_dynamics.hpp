#pragma once

#include <optional>

#include "ccasim/fuzzy.hpp"
#include "ccasim/rng.hpp"
#include "ccasim/vehicle.hpp"

namespace ccasim {

/// Everything a synchronous update step needs besides the configuration
/// itself. The RNG key material (seed, repetition, t) fully determines every
/// draw, so two updates with equal contexts and configurations are
/// bit-identical regardless of execution order or threading.
struct StepContext {
  const RuleBase* rules = &default_rule_base();
  std::uint64_t seed = 0;
  std::uint64_t repetition = 0;
  std::uint64_t t = 0;
  bool noise_enabled = true;
  /// Fixed acceleration decision replacing the fuzzy pipeline (reduction /
  /// calibration runs); noise still applies when enabled.
  std::optional<double> accel_override;

  rng::StepRng step_rng() const { return {seed, repetition, t}; }
};

/// Crisp acceleration decision for one driver: primary module on the
/// immediate neighbourhood blended with the anticipatory module on the
/// second vehicle ahead.
double acceleration(const Perception& p, double v, const VehicleKind& k,
                    const RuleBase& rules);

/// Kinematics: next speed is capped by the speed limit and by the room
/// ahead, and never negative.
double update_velocity(double v, double a, double front_gap, double v_max);
double update_position(double x, double v_next);

/// Degree to which the front vehicle is "close and slower": max over the
/// four (front_time in {very_small, small}) x (front_gap in {small, medium})
/// conjunctions. Feeds the stress amplification.
double phi(const Perception& p, const VehicleKind& k);

/// Stress accumulation: s + (v_next - v_opt) * U[0,1), then — only while the
/// result sits in (stress_min/2, 0) — halved when the front gap is opening
/// (front_time_raw < 0) or amplified by (1 + phi) when it is not, and
/// finally clamped to [stress_min, stress_max].
double update_stress(double s, double v_next, const VehicleKind& k,
                     double front_time_raw, double phi_value, rng::Stream& u);

/// Lane-change desire (stochastic): positive stress pushes right with
/// probability P_R(ns), negative stress pushes left with probability
/// P_L(ns); a driver who wants left and is crawling (jam trial on the
/// "speed small" degree) flips to the forced side on edge lanes or picks
/// left with probability 0.7 otherwise.
Dir eval_lane_desire(const VehicleKind& k, double v, double s, bool left_exists,
                     bool right_exists, const rng::StepRng& step,
                     std::uint64_t vid);

/// The synchronous single-lane update: every vehicle advances from the old
/// configuration (perception -> acceleration [+noise] -> velocity ->
/// position -> stress -> desire, transfer marker cleared). Immobile cells
/// are copied untouched. The overlay contributes both perception and the
/// hard kinematic bound.
Lane step_lane(const Lane& c, const BlockerOverlay& overlay, const StepContext& ctx);

/// Same result computed with `threads` workers over index chunks
/// (bit-identical to step_lane by construction).
Lane step_lane_parallel(const Lane& c, const BlockerOverlay& overlay,
                        const StepContext& ctx, unsigned threads);

/// The per-vehicle core shared by the sequential and parallel drivers.
VehicleState updated_vehicle(const Lane& c, std::size_t i,
                             const BlockerOverlay& overlay, const StepContext& ctx);

}  // namespace ccasim
