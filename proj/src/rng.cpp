#include "ccasim/rng.hpp"

#include <cmath>
#include <numbers>

namespace ccasim::rng {

namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

/// SplitMix64 finalizer: a strong 64-bit mixing permutation.
constexpr std::uint64_t mix(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

}  // namespace

Stream::Stream(std::uint64_t seed, std::uint64_t repetition, std::uint64_t t,
               std::uint64_t entity, Purpose purpose) {
  std::uint64_t h = mix(seed + kGamma);
  h = mix(h ^ (repetition + kGamma));
  h = mix(h ^ (t + kGamma));
  h = mix(h ^ (entity + kGamma));
  h = mix(h ^ (static_cast<std::uint64_t>(purpose) + kGamma));
  base_ = h;
}

std::uint64_t Stream::next_u64() {
  n_ += 1;
  return mix(base_ + n_ * kGamma);
}

double Stream::next_unit() {
  // 53 high-quality bits -> [0, 1) on the usual dyadic grid.
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

bool Stream::bernoulli(double p) { return next_unit() < p; }

double Stream::gaussian(double sigma) {
  const double u1 = next_unit();
  const double u2 = next_unit();
  // 1 - u1 lies in (0, 1], so the log is finite.
  const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
  return sigma * r * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace ccasim::rng
