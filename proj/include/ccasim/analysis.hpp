#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ccasim/multilane.hpp"

namespace ccasim {

/// One exit event: a vehicle left the road (served at the toll plaza or past
/// the open end).
struct ExitRecord {
  std::uint64_t t = 0;      ///< step at which the vehicle left
  std::uint64_t entry = 0;  ///< step at which it had entered
  std::uint64_t vid = 0;

  std::uint64_t latency() const { return t - entry; }
};

/// Macroscopic reading after one step. Throughput and latency refer to the
/// last completed 10 s window: exit count per window and mean time spent on
/// the road by those exits (0 while no window has completed or none exited).
struct MetricsSample {
  std::uint64_t t = 0;
  std::size_t n = 0;        ///< vehicles on the road (immobile blocks excluded)
  double density = 0.0;     ///< N / L, vehicles per metre over all lanes
  double v_av = 0.0;        ///< mean speed, 0 on an empty road
  double flow = 0.0;        ///< q = density * v_av
  double throughput10 = 0.0;///< exits in the last completed 10 s window
  double latency10 = 0.0;   ///< mean latency of those exits, seconds
};

/// Instantaneous part of the sample (window fields are left at 0; the
/// simulation loop fills them from its exit ledger).
MetricsSample sample(const Road& r, std::uint64_t t, double road_length);

/// One repetition's outcome.
struct RepetitionResult {
  std::uint32_t repetition = 0;
  std::vector<MetricsSample> series;
  std::uint64_t attempted = 0;  ///< arrival draws that fired
  std::uint64_t entered = 0;    ///< arrivals actually placed
  std::uint64_t dropped = 0;    ///< arrivals refused (no safe slot)
  std::uint64_t processed = 0;  ///< vehicles that left the road
};

/// Ensemble cross-covariance of flow and density: the Pearson correlation of
/// (q_r(t), D_r(t)) across repetitions r, per time step. Undefined entries
/// (fewer than two repetitions, or either sample deviation below
/// 1e-12 * (1 + |mean|)) are nullopt.
std::vector<std::optional<double>> cross_covariance(
    std::span<const RepetitionResult> ensemble);

/// One pooled (repetition, step) observation for diagram binning.
struct DiagramSample {
  double density = 0.0;  ///< total vehicles per metre (all lanes)
  double flow = 0.0;
  std::optional<double> cc;  ///< ensemble cross-covariance at that step
};

/// One density bin of the fundamental diagram.
struct DiagramBin {
  double density = 0.0;  ///< bin centre, total vehicles per metre
  double flow_mean = 0.0;
  std::optional<double> cc_mean;  ///< over samples with a defined cc
  std::size_t count = 0;
};

/// Bins pooled samples by per-lane density (bin width in vehicles per metre
/// per lane). Sample order never changes the result: bins accumulate in
/// value-sorted order, so the means are bit-identical under permutation.
std::vector<DiagramBin> fundamental_diagram(std::span<const DiagramSample> samples,
                                            std::size_t lanes,
                                            double bin_width_per_lane = 0.005);

/// Pools an ensemble (with its cc series) into diagram samples.
std::vector<DiagramSample> pool_diagram_samples(
    std::span<const RepetitionResult> ensemble);

}  // namespace ccasim
