#pragma once

#include <memory>
#include <unordered_map>

#include "ccasim/analysis.hpp"

namespace ccasim {

/// Off-ramp toll plaza behaviour constants (metres, m/s, seconds): a vehicle
/// counts as "at a booth" while it is essentially stopped with its front
/// bumper within the approach distance of the barrier.
inline constexpr double kPlazaHoldSpeed = 0.5;
inline constexpr double kPlazaApproachDistance = 2.0;

/// A motorway experiment: open road of a given length and lane count, Poisson
/// arrivals at the upstream end split over the lanes, optional toll plaza at
/// the downstream end and optional mid-road obstacle.
struct ExperimentConfig {
  double road_length = 5000.0;   ///< L in metres
  std::size_t lanes = 3;         ///< M
  std::uint64_t steps = 1000;    ///< simulated seconds per repetition
  std::uint32_t repetitions = 100;
  std::uint64_t seed = 0;
  double arrival_rate = 1.0;     ///< lambda, vehicles per second over all lanes
  double long_fraction = 0.0;    ///< share of long vehicles among arrivals
  /// Toll-plaza perception radius in metres; negative = open tolling (no
  /// barrier, vehicles leave past the end of the road).
  double plaza_radius = -1.0;
  /// When set, a roadblock of length 2L/5 centred at L/2 occupies this lane.
  std::optional<std::size_t> obstacle_lane;
  bool noise_enabled = true;

  /// Vehicle classes; must contain "passenger" and, when long_fraction > 0,
  /// "long". Shared so copies of the config stay cheap and kind pointers
  /// stable.
  std::shared_ptr<const KindLibrary> kinds;
  std::shared_ptr<const RuleBase> rules = default_rule_base_ptr();

  /// Provenance tags used by the JSON round trip: "default" or the path the
  /// tables were loaded from.
  std::string kinds_source = "default";
  std::string rules_source = "default";

  void validate() const;

  /// Convenience: defaults plus the built-in kind library.
  static ExperimentConfig with_default_kinds();

  /// Probability that a given lane receives an arrival in one second:
  /// 1 - exp(-lambda / M) (a per-lane Poisson thinned to at most one entry
  /// per lane and second).
  double per_lane_emission_probability() const;
};

/// Outcome of one arrival draw on one lane.
enum class EmitOutcome { none, entered, dropped };

/// Tries to emit one step's arrivals into the road (lane by lane, left to
/// right): entry at x = length/2 with v = min(v_opt, front gap), zero stress
/// and no lane intent. An arrival is dropped when the entry slot is taken,
/// bodies would overlap, or the front safety gap fails. Returns per-lane
/// outcomes via the counters.
struct EmitCounters {
  std::uint64_t attempted = 0;
  std::uint64_t entered = 0;
  std::uint64_t dropped = 0;
};
EmitCounters emit(Road& r, const ExperimentConfig& cfg, std::uint64_t t,
                  std::uint32_t repetition, std::uint64_t& next_vid);

/// Places the roadblock pseudo-vehicle (immobile, centred at road_length/2)
/// into the given lane. The kind object must be immobile and outlive the
/// road. Throws when the block cannot be placed without overlap.
void obstacle_install(Road& r, std::size_t lane, const VehicleKind* obstacle,
                      double road_length);

/// Drives one repetition step by step; exposes the road so invariants can
/// be checked externally between steps.
class Simulation {
 public:
  Simulation(const ExperimentConfig& cfg, std::uint32_t repetition);

  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  /// Advances one second: arrivals, the multi-lane update, exits (toll
  /// service or past-the-end), then the metrics sample.
  void step();

  /// Runs the configured number of steps.
  void run_to_end();

  const Road& road() const { return road_; }
  std::uint64_t now() const { return t_; }
  const std::vector<MetricsSample>& series() const { return series_; }
  const std::vector<ExitRecord>& exits() const { return exits_; }

  std::uint64_t attempted() const { return attempted_; }
  std::uint64_t entered() const { return entered_; }
  std::uint64_t dropped() const { return dropped_; }
  std::uint64_t processed() const { return processed_; }

  RepetitionResult result() const;

 private:
  void process_exits();
  void push_sample();

  ExperimentConfig cfg_;
  std::uint32_t repetition_ = 0;
  Road road_;
  BlockerOverlay overlay_;
  std::unique_ptr<VehicleKind> obstacle_kind_;
  std::unordered_map<std::uint64_t, double> plaza_hold_;
  std::vector<MetricsSample> series_;
  std::vector<ExitRecord> exits_;
  std::uint64_t t_ = 0;
  std::uint64_t next_vid_ = 1;  ///< vid 0 is reserved for the roadblock
  std::uint64_t attempted_ = 0;
  std::uint64_t entered_ = 0;
  std::uint64_t dropped_ = 0;
  std::uint64_t processed_ = 0;
};

/// One full repetition (pure function of config and repetition index).
RepetitionResult run_repetition(const ExperimentConfig& cfg, std::uint32_t repetition);

/// All repetitions, optionally on several worker threads. The result is
/// byte-identical for any thread count.
struct RunResult {
  ExperimentConfig cfg;
  std::vector<RepetitionResult> repetitions;
};
RunResult run_experiment(const ExperimentConfig& cfg, unsigned threads = 1);

}  // namespace ccasim
