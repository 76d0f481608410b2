#include "ccasim/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace ccasim {

void ExperimentConfig::validate() const {
  if (!(road_length > 0.0)) throw std::domain_error("road length must be positive");
  if (lanes == 0) throw std::domain_error("at least one lane required");
  if (steps == 0) throw std::domain_error("at least one step required");
  if (repetitions == 0) throw std::domain_error("at least one repetition required");
  if (!(arrival_rate >= 0.0)) throw std::domain_error("arrival rate must be >= 0");
  if (!(long_fraction >= 0.0) || !(long_fraction <= 1.0)) {
    throw std::domain_error("long fraction must lie in [0,1]");
  }
  if (obstacle_lane && *obstacle_lane >= lanes) {
    throw std::domain_error("obstacle lane out of range");
  }
  if (!kinds) throw std::domain_error("config needs a kind library");
  if (kinds->find("passenger") == nullptr) {
    throw std::domain_error("kind library needs a 'passenger' class");
  }
  if (long_fraction > 0.0 && kinds->find("long") == nullptr) {
    throw std::domain_error("kind library needs a 'long' class");
  }
  if (rules == nullptr) throw std::domain_error("config needs a rule base");
}

ExperimentConfig ExperimentConfig::with_default_kinds() {
  ExperimentConfig cfg;
  cfg.kinds = std::make_shared<const KindLibrary>(KindLibrary::defaults());
  return cfg;
}

double ExperimentConfig::per_lane_emission_probability() const {
  return 1.0 - std::exp(-arrival_rate / static_cast<double>(lanes));
}

EmitCounters emit(Road& r, const ExperimentConfig& cfg, std::uint64_t t,
                  std::uint32_t repetition, std::uint64_t& next_vid) {
  EmitCounters counters;
  const double p = cfg.per_lane_emission_probability();
  const rng::StepRng step{cfg.seed, repetition, t};
  const VehicleKind* passenger = cfg.kinds->find("passenger");
  const VehicleKind* longk =
      cfg.long_fraction > 0.0 ? cfg.kinds->find("long") : nullptr;

  for (std::size_t lane_idx = 0; lane_idx < r.lanes.size(); ++lane_idx) {
    auto arrival = step.stream(lane_idx, rng::Purpose::emit);
    if (!arrival.bernoulli(p)) continue;
    ++counters.attempted;

    const VehicleKind* kind = passenger;
    if (longk != nullptr) {
      auto pick = step.stream(lane_idx, rng::Purpose::emit_kind);
      if (pick.bernoulli(cfg.long_fraction)) kind = longk;
    }

    Lane& lane = r.lanes[lane_idx];
    VehicleState s;
    s.kind = kind;
    s.x = 0.5 * kind->length;  // rear bumper at the road start
    s.stress = 0.0;
    s.desire = Dir::none;
    s.transfer_origin = Dir::none;
    s.entry_time = t;

    const auto slot = lane.insertion_index(s.x);
    bool ok = slot.has_value();
    double front_gap = std::numeric_limits<double>::infinity();
    double front_v = 0.0;
    if (ok && *slot > 0) {
      // Some slow straggler still overlaps the entry point.
      const VehicleState& back = lane.at(*slot - 1);
      ok = s.x - back.x >= 0.5 * (back.kind->length + kind->length);
    }
    if (ok && *slot < lane.size()) {
      const VehicleState& front = lane.at(*slot);
      front_gap = front.x - s.x - 0.5 * (front.kind->length + kind->length);
      front_v = front.v;
      ok = front_gap >= 0.0;
    }
    if (ok) {
      s.v = std::min(kind->v_opt, front_gap);
      const double threshold =
          std::max(0.0, std::pow(s.v, 1.25) - front_v + 3.0);
      if (std::isfinite(front_gap) && !(front_gap > threshold)) ok = false;
    }
    if (!ok) {
      ++counters.dropped;
      continue;
    }
    s.vid = next_vid++;
    lane.insert(*slot, s);
    ++counters.entered;
  }
  return counters;
}

void obstacle_install(Road& r, std::size_t lane, const VehicleKind* obstacle,
                      double road_length) {
  if (lane >= r.lanes.size()) throw std::domain_error("obstacle lane out of range");
  if (obstacle == nullptr || !obstacle->immobile) {
    throw std::domain_error("obstacle kind must be immobile");
  }
  VehicleState s;
  s.kind = obstacle;
  s.x = 0.5 * road_length;
  s.v = 0.0;
  s.stress = 0.0;
  s.vid = 0;  // reserved identity
  Lane& target = r.lanes[lane];
  const auto slot = target.insertion_index(s.x);
  if (!slot) throw std::domain_error("obstacle midpoint already occupied");
  target.insert(*slot, s);
}

Simulation::Simulation(const ExperimentConfig& cfg, std::uint32_t repetition)
    : cfg_(cfg), repetition_(repetition) {
  cfg_.validate();
  road_ = Road::empty(cfg_.lanes);
  overlay_ = cfg_.plaza_radius >= 0.0
                 ? BlockerOverlay::wall(cfg_.road_length, cfg_.plaza_radius)
                 : BlockerOverlay::none();
  if (cfg_.obstacle_lane) {
    obstacle_kind_ = std::make_unique<VehicleKind>(
        make_obstacle_kind(0.4 * cfg_.road_length));
    obstacle_install(road_, *cfg_.obstacle_lane, obstacle_kind_.get(),
                     cfg_.road_length);
  }
  series_.reserve(cfg_.steps);
}

void Simulation::step() {
  t_ += 1;

  const EmitCounters c = emit(road_, cfg_, t_, repetition_, next_vid_);
  attempted_ += c.attempted;
  entered_ += c.entered;
  dropped_ += c.dropped;

  StepContext ctx;
  ctx.rules = cfg_.rules.get();
  ctx.seed = cfg_.seed;
  ctx.repetition = repetition_;
  ctx.t = t_;
  ctx.noise_enabled = cfg_.noise_enabled;
  road_ = update_multilane(road_, overlay_, ctx);

  process_exits();
  push_sample();
}

void Simulation::run_to_end() {
  while (t_ < cfg_.steps) step();
}

void Simulation::process_exits() {
  if (cfg_.plaza_radius >= 0.0) {
    // Closed end: essentially-stopped vehicles at the barrier accumulate
    // service time and leave once served.
    const double barrier = cfg_.road_length;
    for (Lane& lane : road_.lanes) {
      for (std::size_t i = lane.size(); i-- > 0;) {
        const VehicleState& s = lane.at(i);
        if (s.kind->immobile) continue;
        if (s.v >= kPlazaHoldSpeed) continue;
        if (barrier - s.front_bumper() > kPlazaApproachDistance) continue;
        double& held = plaza_hold_[s.vid];
        held += 1.0;
        if (held >= s.kind->plaza_service_s) {
          exits_.push_back({t_, s.entry_time, s.vid});
          ++processed_;
          plaza_hold_.erase(s.vid);
          lane.erase(i);
        }
      }
    }
  } else {
    // Open end: gone once the whole body has passed the end of the road.
    for (Lane& lane : road_.lanes) {
      for (std::size_t i = lane.size(); i-- > 0;) {
        const VehicleState& s = lane.at(i);
        if (s.kind->immobile) continue;
        if (s.rear_bumper() > cfg_.road_length) {
          exits_.push_back({t_, s.entry_time, s.vid});
          ++processed_;
          lane.erase(i);
        }
      }
    }
  }
}

void Simulation::push_sample() {
  MetricsSample m = sample(road_, t_, cfg_.road_length);

  // Fill the 10 s window fields from the exit ledger: the last completed
  // window [10(w-1), 10w) with w = floor(t/10).
  const std::uint64_t w = t_ / 10;
  if (w >= 1) {
    const std::uint64_t lo = (w - 1) * 10;
    const std::uint64_t hi = w * 10;
    std::uint64_t count = 0;
    double latency_sum = 0.0;
    for (auto it = exits_.rbegin(); it != exits_.rend(); ++it) {
      if (it->t >= hi) continue;
      if (it->t < lo) break;  // exits are recorded in step order
      ++count;
      latency_sum += static_cast<double>(it->latency());
    }
    m.throughput10 = static_cast<double>(count);
    m.latency10 = count > 0 ? latency_sum / static_cast<double>(count) : 0.0;
  }
  series_.push_back(m);
}

RepetitionResult Simulation::result() const {
  RepetitionResult r;
  r.repetition = repetition_;
  r.series = series_;
  r.attempted = attempted_;
  r.entered = entered_;
  r.dropped = dropped_;
  r.processed = processed_;
  return r;
}

RepetitionResult run_repetition(const ExperimentConfig& cfg, std::uint32_t repetition) {
  Simulation sim(cfg, repetition);
  sim.run_to_end();
  return sim.result();
}

RunResult run_experiment(const ExperimentConfig& cfg, unsigned threads) {
  cfg.validate();
  RunResult out;
  out.cfg = cfg;
  out.repetitions.resize(cfg.repetitions);

  if (threads <= 1 || cfg.repetitions == 1) {
    for (std::uint32_t rep = 0; rep < cfg.repetitions; ++rep) {
      out.repetitions[rep] = run_repetition(cfg, rep);
    }
    return out;
  }

  std::atomic<std::uint32_t> next{0};
  const unsigned workers = std::min<unsigned>(threads, cfg.repetitions);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (true) {
        const std::uint32_t rep = next.fetch_add(1);
        if (rep >= cfg.repetitions) return;
        out.repetitions[rep] = run_repetition(cfg, rep);
      }
    });
  }
  for (auto& th : pool) th.join();
  return out;
}

}  // namespace ccasim
