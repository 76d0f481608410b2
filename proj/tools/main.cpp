// Command-line front end: run experiments, sweep scenario grids, verify the
// engine's structural guarantees, re-render plots and write starter configs.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "ccasim/analysis.hpp"
#include "ccasim/config_io.hpp"
#include "ccasim/fuzzy.hpp"
#include "ccasim/multilane.hpp"
#include "ccasim/outputs.hpp"
#include "ccasim/scenario.hpp"
#include "ccasim/svg.hpp"

namespace fs = std::filesystem;
using namespace ccasim;

namespace {

unsigned default_threads() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

// ---------------------------------------------------------------------------
// run

int cmd_run(const std::string& config_path, const std::string& out_dir,
            unsigned threads, std::optional<std::uint64_t> seed,
            std::optional<std::uint64_t> steps, std::optional<std::uint32_t> reps) {
  ExperimentConfig cfg = load_experiment(config_path);
  if (seed) cfg.seed = *seed;
  if (steps) cfg.steps = *steps;
  if (reps) cfg.repetitions = *reps;
  cfg.validate();

  std::cout << "running " << cfg.repetitions << " repetition(s) x " << cfg.steps
            << " step(s) on " << cfg.lanes << " lane(s), lambda=" << cfg.arrival_rate
            << ", threads=" << threads << "\n";

  const RunResult result = run_experiment(cfg, threads);
  emit_outputs(result, out_dir);

  std::uint64_t entered = 0, dropped = 0, processed = 0;
  for (const auto& rep : result.repetitions) {
    entered += rep.entered;
    dropped += rep.dropped;
    processed += rep.processed;
  }
  std::cout << "entered=" << entered << " dropped=" << dropped
            << " processed=" << processed << "\n"
            << "wrote " << out_dir << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepRow {
  double lambda = 0.0;
  double long_fraction = 0.0;
  double plaza_radius = -1.0;
  bool obstacle = false;
  double peak_flow = 0.0;
  double peak_density = 0.0;
  double throughput_mean = 0.0;
  double drop_rate = 0.0;
};

int cmd_sweep(const std::string& out_dir, unsigned threads,
              std::vector<double> lambdas, std::vector<double> long_fractions,
              std::vector<double> plaza_radii, std::vector<int> obstacle_flags,
              std::uint64_t steps, std::uint32_t reps, double road_length,
              std::size_t lanes, std::uint64_t seed) {
  fs::create_directories(out_dir);
  std::vector<SweepRow> rows;
  std::uint64_t combo = 0;

  for (double lambda : lambdas) {
    for (double pf : long_fractions) {
      for (double rho : plaza_radii) {
        for (int obs : obstacle_flags) {
          ExperimentConfig cfg = ExperimentConfig::with_default_kinds();
          cfg.road_length = road_length;
          cfg.lanes = lanes;
          cfg.steps = steps;
          cfg.repetitions = reps;
          cfg.seed = seed + combo;
          cfg.arrival_rate = lambda;
          cfg.long_fraction = pf;
          cfg.plaza_radius = rho;
          if (obs != 0) cfg.obstacle_lane = lanes / 2;
          cfg.validate();

          std::ostringstream name;
          name << "lambda" << lambda << "_long" << pf << "_plaza"
               << (rho < 0 ? std::string("open") : std::to_string(static_cast<int>(rho)))
               << (obs ? "_obstacle" : "");
          const fs::path combo_dir = fs::path(out_dir) / name.str();
          std::cout << "[" << ++combo << "] " << name.str() << "\n";

          const RunResult result = run_experiment(cfg, threads);
          emit_outputs(result, combo_dir);

          SweepRow row;
          row.lambda = lambda;
          row.long_fraction = pf;
          row.plaza_radius = rho;
          row.obstacle = obs != 0;

          const auto samples = pool_diagram_samples(result.repetitions);
          for (const DiagramBin& b : fundamental_diagram(samples, cfg.lanes)) {
            if (b.flow_mean > row.peak_flow) {
              row.peak_flow = b.flow_mean;
              row.peak_density = b.density;
            }
          }
          double tp_sum = 0.0;
          std::uint64_t tp_n = 0, attempted = 0, dropped = 0;
          for (const auto& rep : result.repetitions) {
            attempted += rep.attempted;
            dropped += rep.dropped;
            for (const MetricsSample& s : rep.series) {
              if (s.t > steps / 2) {
                tp_sum += s.throughput10;
                ++tp_n;
              }
            }
          }
          row.throughput_mean = tp_n ? tp_sum / static_cast<double>(tp_n) : 0.0;
          row.drop_rate =
              attempted ? static_cast<double>(dropped) / static_cast<double>(attempted) : 0.0;
          rows.push_back(row);
        }
      }
    }
  }

  std::ofstream summary(fs::path(out_dir) / "summary.csv", std::ios::binary);
  summary << "lambda,long_fraction,plaza_radius,obstacle,peak_flow,peak_density,"
             "throughput_mean,drop_rate\n";
  for (const SweepRow& r : rows) {
    summary << format_double(r.lambda) << ',' << format_double(r.long_fraction) << ','
            << format_double(r.plaza_radius) << ',' << (r.obstacle ? 1 : 0) << ','
            << format_double(r.peak_flow) << ',' << format_double(r.peak_density) << ','
            << format_double(r.throughput_mean) << ',' << format_double(r.drop_rate)
            << '\n';
  }
  std::cout << "wrote " << (fs::path(out_dir) / "summary.csv").string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// verify

/// Random road with physically valid geometry and unique vids; exercises
/// mixed kinds, stress-driven desires and occasional blocked lanes.
Road random_road(std::mt19937_64& g, const KindLibrary& kinds,
                 const VehicleKind& obstacle_kind) {
  std::uniform_int_distribution<std::size_t> lanes_d(2, 4);
  std::uniform_int_distribution<int> count_d(0, 12);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const std::size_t m = lanes_d(g);
  Road r = Road::empty(m);
  std::uint64_t vid = 1;

  const bool with_obstacle = unit(g) < 0.25;
  if (with_obstacle) {
    obstacle_install(r, g() % m, &obstacle_kind, 600.0);
  }

  const auto all = kinds.all();
  for (std::size_t li = 0; li < m; ++li) {
    const int n = count_d(g);
    double x = 5.0 + 40.0 * unit(g);
    for (int k = 0; k < n; ++k) {
      const VehicleKind* kind = all[g() % all.size()];
      VehicleState s;
      s.kind = kind;
      s.x = x;
      s.v = kind->v_max * unit(g);
      s.stress = kind->stress_min + (kind->stress_max - kind->stress_min) * unit(g);
      const double d = unit(g);
      s.desire = d < 0.4 ? Dir::none : (d < 0.7 ? Dir::left : Dir::right);
      s.vid = vid++;
      const auto slot = r.lanes[li].insertion_index(s.x);
      if (slot) {
        try {
          r.lanes[li].insert(*slot, s);
        } catch (const std::domain_error&) {
          // too close to the roadblock; skip this draw
        }
      }
      x += kind->length + 0.5 + 30.0 * unit(g);
    }
  }
  return r;
}

bool roads_identical(const Road& a, const Road& b) {
  if (a.lane_count() != b.lane_count()) return false;
  for (std::size_t li = 0; li < a.lane_count(); ++li) {
    const Lane& la = a.lanes[li];
    const Lane& lb = b.lanes[li];
    if (la.size() != lb.size()) return false;
    for (std::size_t i = 0; i < la.size(); ++i) {
      const VehicleState& sa = la.at(i);
      const VehicleState& sb = lb.at(i);
      if (sa.kind != sb.kind || sa.x != sb.x || sa.v != sb.v ||
          sa.stress != sb.stress || sa.desire != sb.desire ||
          sa.transfer_origin != sb.transfer_origin || sa.vid != sb.vid) {
        return false;
      }
    }
  }
  return true;
}

bool verify_collision_freedom() {
  ExperimentConfig cfg = ExperimentConfig::with_default_kinds();
  cfg.road_length = 2000.0;
  cfg.lanes = 3;
  cfg.steps = 400;
  cfg.repetitions = 1;
  cfg.seed = 11;
  cfg.arrival_rate = 2.0;
  cfg.long_fraction = 0.2;
  cfg.plaza_radius = 10.0;
  cfg.validate();
  Simulation sim(cfg, 0);
  for (std::uint64_t t = 0; t < cfg.steps; ++t) {
    sim.step();
    if (!sim.road().is_physical() || !sim.road().vids_unique()) return false;
  }
  return true;
}

bool verify_transfer_equivalence(std::uint64_t cases, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  const KindLibrary kinds = KindLibrary::defaults();
  const VehicleKind obstacle = make_obstacle_kind(240.0);
  for (std::uint64_t i = 0; i < cases; ++i) {
    const Road r = random_road(g, kinds, obstacle);
    BlockerOverlay overlay;
    if (g() % 2) overlay = BlockerOverlay::wall(600.0, 5.0 + 45.0 * (g() % 10));
    StepContext ctx;
    ctx.seed = g();
    ctx.repetition = g() % 100;
    ctx.t = g() % 1000;
    const Road direct = update_multilane(r, overlay, ctx);
    const Road meta = meta_cca_step(r, overlay, ctx);
    if (!roads_identical(direct, meta)) return false;
    if (!direct.is_physical() || !direct.vids_unique()) return false;
  }
  return true;
}

bool verify_defuzzifier(std::uint64_t cases, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::uint64_t i = 0; i < cases; ++i) {
    // A symmetric pair of triangles with equal weights must defuzzify to the
    // midpoint of the peaks, and a single fully-fired triangle to its peak.
    const double c = -10.0 + 20.0 * unit(g);
    const double off = 0.5 + 5.0 * unit(g);
    const double half = 0.2 + 2.0 * unit(g);
    const MembershipFunction left =
        MembershipFunction::triangle(c - off - half, c - off, c - off + half);
    const MembershipFunction right =
        MembershipFunction::triangle(c + off - half, c + off, c + off + half);
    const double w = 0.05 + 0.95 * unit(g);
    const WeightedOutput pair[] = {{w, &left}, {w, &right}};
    const double mid = gwaf(pair);
    if (std::abs(mid - c) > 1e-9 * (1.0 + std::abs(c))) return false;

    const WeightedOutput full[] = {{1.0, &left}};
    if (std::abs(gwaf(full) - (c - off)) > 1e-9 * (1.0 + std::abs(c - off))) return false;
  }
  return true;
}

bool verify_determinism(unsigned max_threads) {
  for (std::uint64_t variant = 0; variant < 2; ++variant) {
    ExperimentConfig cfg = ExperimentConfig::with_default_kinds();
    cfg.road_length = 1500.0;
    cfg.lanes = variant == 0 ? 2 : 3;
    cfg.steps = 120;
    cfg.repetitions = 6;
    cfg.seed = 77 + variant;
    cfg.arrival_rate = 1.5;
    cfg.long_fraction = variant == 0 ? 0.0 : 0.3;
    cfg.plaza_radius = variant == 0 ? -1.0 : 25.0;
    cfg.validate();

    const RunResult a = run_experiment(cfg, 1);
    const RunResult b = run_experiment(cfg, std::max(2u, max_threads));
    if (a.repetitions.size() != b.repetitions.size()) return false;
    for (std::size_t i = 0; i < a.repetitions.size(); ++i) {
      if (metrics_csv(a.repetitions[i]) != metrics_csv(b.repetitions[i])) return false;
    }
    const auto cc_a = cross_covariance(a.repetitions);
    const auto cc_b = cross_covariance(b.repetitions);
    if (cross_covariance_csv(cc_a) != cross_covariance_csv(cc_b)) return false;
  }
  return true;
}

bool verify_conservation() {
  ExperimentConfig cfg = ExperimentConfig::with_default_kinds();
  cfg.road_length = 1000.0;
  cfg.lanes = 2;
  cfg.steps = 300;
  cfg.repetitions = 3;
  cfg.seed = 5;
  cfg.arrival_rate = 1.0;
  cfg.plaza_radius = 10.0;
  cfg.validate();
  for (std::uint32_t rep = 0; rep < cfg.repetitions; ++rep) {
    Simulation sim(cfg, rep);
    sim.run_to_end();
    const std::uint64_t on_road = sim.road().vehicle_count(false);
    if (sim.entered() != sim.processed() + on_road) return false;
    if (sim.attempted() != sim.entered() + sim.dropped()) return false;
  }
  return true;
}

int cmd_verify(std::uint64_t cases, std::uint64_t seed) {
  struct Check {
    const char* name;
    bool ok;
  };
  std::vector<Check> checks;
  checks.push_back({"collision-freedom", verify_collision_freedom()});
  checks.push_back({"transfer-equivalence", verify_transfer_equivalence(cases, seed)});
  checks.push_back({"defuzzifier-identities", verify_defuzzifier(5000, seed + 1)});
  checks.push_back({"byte-determinism", verify_determinism(default_threads())});
  checks.push_back({"conservation", verify_conservation()});

  bool all = true;
  for (const Check& c : checks) {
    std::string dots(24 - std::min<std::size_t>(22, std::string(c.name).size()), '.');
    std::cout << c.name << ' ' << dots << ' ' << (c.ok ? "PASS" : "FAIL") << "\n";
    all = all && c.ok;
  }
  std::cout << "overall .................. " << (all ? "PASS" : "FAIL") << "\n";
  return all ? 0 : 1;
}

// ---------------------------------------------------------------------------
// plot

int cmd_plot(const std::string& dir, const std::string& title) {
  const auto bins = read_fundamental_diagram_csv(fs::path(dir) / "fundamental_diagram.csv");
  const std::string svg = render_diagram_svg(bins, title);
  std::ofstream f(fs::path(dir) / "diagram.svg", std::ios::binary);
  f << svg;
  std::cout << "wrote " << (fs::path(dir) / "diagram.svg").string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// init

int cmd_init(const std::string& dir) {
  fs::create_directories(dir);
  const fs::path base(dir);

  save_kinds(KindLibrary::defaults(), base / "kinds_default.json");
  save_rules(default_rule_base(), base / "rules_default.json");

  {
    ExperimentConfig cfg = ExperimentConfig::with_default_kinds();
    cfg.road_length = 5000.0;
    cfg.lanes = 3;
    cfg.steps = 1000;
    cfg.repetitions = 50;
    cfg.seed = 1;
    cfg.arrival_rate = 0.25;
    cfg.plaza_radius = -1.0;
    save_experiment(cfg, base / "free_flow.json");
  }
  {
    ExperimentConfig cfg = ExperimentConfig::with_default_kinds();
    cfg.road_length = 5000.0;
    cfg.lanes = 3;
    cfg.steps = 1000;
    cfg.repetitions = 50;
    cfg.seed = 2;
    cfg.arrival_rate = 1.5;
    cfg.plaza_radius = 10.0;
    save_experiment(cfg, base / "toll_plaza.json");
  }
  {
    ExperimentConfig cfg = ExperimentConfig::with_default_kinds();
    cfg.road_length = 5000.0;
    cfg.lanes = 3;
    cfg.steps = 800;
    cfg.repetitions = 30;
    cfg.seed = 3;
    cfg.arrival_rate = 1.0;
    cfg.plaza_radius = 10.0;
    cfg.obstacle_lane = 1;
    save_experiment(cfg, base / "obstacle.json");
  }
  {
    ExperimentConfig cfg = ExperimentConfig::with_default_kinds();
    cfg.road_length = 5000.0;
    cfg.lanes = 3;
    cfg.steps = 1000;
    cfg.repetitions = 50;
    cfg.seed = 4;
    cfg.arrival_rate = 1.0;
    cfg.long_fraction = 0.2;
    cfg.plaza_radius = 10.0;
    cfg.kinds_source = "kinds_default.json";
    cfg.rules_source = "rules_default.json";
    save_experiment(cfg, base / "mixed_traffic.json");
  }
  std::cout << "wrote starter configs into " << dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ccasim: multi-lane traffic simulator with fuzzy-logic drivers"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Run one experiment and write CSV/SVG outputs");
  std::string run_config, run_out = "out";
  unsigned run_threads = default_threads();
  std::optional<std::uint64_t> run_seed, run_steps;
  std::optional<std::uint32_t> run_reps;
  run->add_option("--config", run_config, "Experiment JSON")->required()->check(CLI::ExistingFile);
  run->add_option("--out", run_out, "Output directory");
  run->add_option("--threads", run_threads, "Worker threads over repetitions");
  run->add_option("--seed", run_seed, "Override the config seed");
  run->add_option("--steps", run_steps, "Override the step count");
  run->add_option("--reps", run_reps, "Override the repetition count");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Run a scenario grid and write a summary table");
  std::string sweep_out = "sweep";
  unsigned sweep_threads = default_threads();
  std::vector<double> sw_lambda{0.25, 1.0, 2.0};
  std::vector<double> sw_long{0.0, 0.2};
  std::vector<double> sw_plaza{10.0, -1.0};
  std::vector<int> sw_obstacle{0};
  std::uint64_t sw_steps = 600, sw_seed = 1000;
  std::uint32_t sw_reps = 10;
  double sw_length = 5000.0;
  std::size_t sw_lanes = 3;
  sweep->add_option("--out", sweep_out, "Output directory");
  sweep->add_option("--threads", sweep_threads, "Worker threads over repetitions");
  sweep->add_option("--lambda", sw_lambda, "Arrival rates")->delimiter(',');
  sweep->add_option("--long-fraction", sw_long, "Long-vehicle shares")->delimiter(',');
  sweep->add_option("--plaza", sw_plaza, "Plaza radii (negative = open)")->delimiter(',');
  sweep->add_option("--obstacle", sw_obstacle, "0 and/or 1")->delimiter(',');
  sweep->add_option("--steps", sw_steps, "Steps per repetition");
  sweep->add_option("--reps", sw_reps, "Repetitions per combination");
  sweep->add_option("--road-length", sw_length, "Road length (m)");
  sweep->add_option("--lanes", sw_lanes, "Lane count");
  sweep->add_option("--seed", sw_seed, "Base seed (incremented per combination)");

  // verify
  auto* verify = app.add_subcommand("verify", "Self-check structural guarantees");
  std::uint64_t vf_cases = 300, vf_seed = 2024;
  verify->add_option("--cases", vf_cases, "Random configurations for the equivalence check");
  verify->add_option("--seed", vf_seed, "Generator seed");

  // plot
  auto* plot = app.add_subcommand("plot", "Re-render diagram.svg from a run directory");
  std::string plot_dir, plot_title = "fundamental diagram";
  plot->add_option("--dir", plot_dir, "Run output directory")->required()->check(CLI::ExistingDirectory);
  plot->add_option("--title", plot_title, "Plot title");

  // init
  auto* init = app.add_subcommand("init", "Write starter config files");
  std::string init_dir = "configs";
  init->add_option("--dir", init_dir, "Target directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      return cmd_run(run_config, run_out, std::max(1u, run_threads), run_seed, run_steps,
                     run_reps);
    }
    if (sweep->parsed()) {
      return cmd_sweep(sweep_out, std::max(1u, sweep_threads), sw_lambda, sw_long, sw_plaza,
                       sw_obstacle, sw_steps, sw_reps, sw_length, sw_lanes, sw_seed);
    }
    if (verify->parsed()) return cmd_verify(vf_cases, vf_seed);
    if (plot->parsed()) return cmd_plot(plot_dir, plot_title);
    if (init->parsed()) return cmd_init(init_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
