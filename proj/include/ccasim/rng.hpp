#pragma once

#include <cstdint>

namespace ccasim::rng {

/// Labels for independent random streams. Every stochastic decision in the
/// model draws from a stream keyed by (seed, repetition, time step, entity,
/// purpose), so the value of a draw never depends on evaluation order. This is
/// what makes sequential, parallel and restructured (single-lattice) updates
/// produce byte-identical trajectories.
enum class Purpose : std::uint64_t {
  accel_noise = 1,   ///< Gaussian perturbation of the acceleration decision
  stress = 2,        ///< uniform factor in the stress accumulation step
  lane_right = 3,    ///< Bernoulli draw for the rightward lane desire
  lane_left = 4,     ///< Bernoulli draw for the leftward lane desire
  lane_jam = 5,      ///< Bernoulli draw for the jam-escape desire
  lane_side = 6,     ///< side pick (left vs right) when jammed mid-road
  emit = 7,          ///< per-lane arrival draw (entity = lane index)
  emit_kind = 8,     ///< vehicle-class pick for an arrival (entity = lane index)
};

/// Deterministic counter-based stream: a SplitMix64 walk whose origin is a
/// hash of the full key. Draw i is a pure function of (key, i).
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t repetition, std::uint64_t t,
         std::uint64_t entity, Purpose purpose);

  std::uint64_t next_u64();

  /// Uniform double in [0, 1).
  double next_unit();

  /// True with probability p; p <= 0 never fires, p >= 1 always fires.
  bool bernoulli(double p);

  /// Zero-mean Gaussian with the given standard deviation (Box-Muller,
  /// consumes two uniforms; hand-rolled so results are platform-stable).
  double gaussian(double sigma);

 private:
  std::uint64_t base_;
  std::uint64_t n_ = 0;
};

/// Binds the per-step part of the key; entities (vehicles, lanes) then open
/// purpose-labelled streams for this time step.
struct StepRng {
  std::uint64_t seed = 0;
  std::uint64_t repetition = 0;
  std::uint64_t t = 0;

  Stream stream(std::uint64_t entity, Purpose purpose) const {
    return Stream(seed, repetition, t, entity, purpose);
  }
};

}  // namespace ccasim::rng
