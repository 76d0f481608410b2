#include "ccasim/config_io.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace ccasim {

namespace {

using Json = nlohmann::ordered_json;

Json mf_to_json(const MembershipFunction& mf) {
  Json j;
  Json pts = Json::array();
  for (std::size_t i = 0; i < mf.breakpoint_count(); ++i) {
    pts.push_back({mf.breakpoint(i).x, mf.breakpoint(i).mu});
  }
  j["points"] = std::move(pts);
  j["left_sat"] = mf.left_sat();
  j["right_sat"] = mf.right_sat();
  return j;
}

MembershipFunction mf_from_json(const Json& j) {
  std::vector<MembershipFunction::Breakpoint> pts;
  for (const auto& p : j.at("points")) {
    if (!p.is_array() || p.size() != 2) {
      throw std::domain_error("membership point must be [x, mu]");
    }
    pts.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  return MembershipFunction::from_breakpoints(pts, j.at("left_sat").get<double>(),
                                              j.at("right_sat").get<double>());
}

Json kind_to_json(const VehicleKind& k) {
  Json j;
  j["id"] = k.id;
  j["v_max"] = k.v_max;
  j["v_opt"] = k.v_opt;
  j["length"] = k.length;
  j["accel_noise_sd"] = k.accel_noise_sd;
  j["stress_max"] = k.stress_max;
  j["stress_min"] = k.stress_min;
  j["lane_right_exponent"] = k.lane_right_prob.exponent;
  j["lane_left_exponent"] = k.lane_left_prob.exponent;
  j["plaza_service_s"] = k.plaza_service_s;
  j["immobile"] = k.immobile;

  Json inputs = Json::object();
  for (std::size_t v = 0; v < kVariableCount; ++v) {
    Json terms = Json::object();
    for (std::size_t t = 0; t < kTermCount; ++t) {
      const auto& mf = k.memberships.input[v][t];
      if (mf) terms[std::string(to_string(static_cast<Term>(t)))] = mf_to_json(*mf);
    }
    if (!terms.empty()) {
      inputs[std::string(to_string(static_cast<Variable>(v)))] = std::move(terms);
    }
  }
  Json output = Json::object();
  for (std::size_t t = 0; t < kOutTermCount; ++t) {
    output[std::string(to_string(static_cast<OutTerm>(t)))] =
        mf_to_json(k.memberships.output[t]);
  }
  j["memberships"] = {{"inputs", std::move(inputs)}, {"output", std::move(output)}};
  return j;
}

VehicleKind kind_from_json(const Json& j) {
  VehicleKind k;
  k.id = j.at("id").get<std::string>();
  k.v_max = j.at("v_max").get<double>();
  k.v_opt = j.at("v_opt").get<double>();
  k.length = j.at("length").get<double>();
  k.accel_noise_sd = j.at("accel_noise_sd").get<double>();
  k.stress_max = j.at("stress_max").get<double>();
  k.stress_min = j.at("stress_min").get<double>();
  k.lane_right_prob.exponent = j.at("lane_right_exponent").get<double>();
  k.lane_left_prob.exponent = j.at("lane_left_exponent").get<double>();
  k.plaza_service_s = j.value("plaza_service_s", 2.0);
  k.immobile = j.value("immobile", false);

  const Json& ms = j.at("memberships");
  for (const auto& [var_name, terms] : ms.at("inputs").items()) {
    const auto var = variable_from_string(var_name);
    if (!var) throw std::domain_error("unknown input variable: " + var_name);
    for (const auto& [term_name, mf] : terms.items()) {
      const auto term = term_from_string(term_name);
      if (!term) throw std::domain_error("unknown term: " + term_name);
      k.memberships.in(*var, *term) = mf_from_json(mf);
    }
  }
  for (const auto& [out_name, mf] : ms.at("output").items()) {
    const auto out = out_term_from_string(out_name);
    if (!out) throw std::domain_error("unknown output term: " + out_name);
    k.memberships.output[static_cast<std::size_t>(*out)] = mf_from_json(mf);
  }
  k.validate();
  return k;
}

Json atom_to_json(const RuleAtom& a) {
  return Json::array({std::string(to_string(a.var)), std::string(to_string(a.term)),
                      a.negated});
}

RuleAtom atom_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 3) {
    throw std::domain_error("rule atom must be [variable, term, negated]");
  }
  const auto var = variable_from_string(j[0].get<std::string>());
  const auto term = term_from_string(j[1].get<std::string>());
  if (!var || !term) throw std::domain_error("unknown atom name in rule");
  return RuleAtom{*var, *term, j[2].get<bool>()};
}

Json rule_to_json(const FuzzyRule& r) {
  Json j;
  Json all = Json::array();
  for (const RuleAtom& a : r.all_of) all.push_back(atom_to_json(a));
  j["all_of"] = std::move(all);
  if (!r.any_of.empty()) {
    Json any = Json::array();
    for (const auto& block : r.any_of) {
      Json b = Json::array();
      for (const RuleAtom& a : block) b.push_back(atom_to_json(a));
      any.push_back(std::move(b));
    }
    j["any_of"] = std::move(any);
  }
  j["then"] = std::string(to_string(r.consequent));
  return j;
}

FuzzyRule rule_from_json(const Json& j) {
  FuzzyRule r;
  for (const auto& a : j.at("all_of")) r.all_of.push_back(atom_from_json(a));
  if (j.contains("any_of")) {
    for (const auto& block : j.at("any_of")) {
      std::vector<RuleAtom> atoms;
      for (const auto& a : block) atoms.push_back(atom_from_json(a));
      r.any_of.push_back(std::move(atoms));
    }
  }
  const auto out = out_term_from_string(j.at("then").get<std::string>());
  if (!out) throw std::domain_error("unknown rule consequent");
  r.consequent = *out;
  return r;
}

std::string read_file(const std::filesystem::path& file) {
  std::ifstream f(file, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + file.string());
  std::string text((std::istreambuf_iterator<char>(f)),
                   std::istreambuf_iterator<char>());
  return text;
}

void write_file(const std::filesystem::path& file, const std::string& text) {
  std::ofstream f(file, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + file.string());
  f << text;
}

}  // namespace

std::string kinds_to_json(const KindLibrary& lib) {
  Json j;
  Json kinds = Json::array();
  for (const VehicleKind* k : lib.all()) kinds.push_back(kind_to_json(*k));
  j["kinds"] = std::move(kinds);
  return j.dump(2) + "\n";
}

KindLibrary kinds_from_json(const std::string& text) {
  const Json j = Json::parse(text);
  KindLibrary lib;
  for (const auto& k : j.at("kinds")) lib.add(kind_from_json(k));
  return lib;
}

void save_kinds(const KindLibrary& lib, const std::filesystem::path& file) {
  write_file(file, kinds_to_json(lib));
}

KindLibrary load_kinds(const std::filesystem::path& file) {
  return kinds_from_json(read_file(file));
}

std::string rules_to_json(const RuleBase& rb) {
  Json j;
  Json primary = Json::array();
  for (const FuzzyRule& r : rb.primary) primary.push_back(rule_to_json(r));
  Json anticipatory = Json::array();
  for (const FuzzyRule& r : rb.anticipatory) anticipatory.push_back(rule_to_json(r));
  j["primary"] = std::move(primary);
  j["anticipatory"] = std::move(anticipatory);
  return j.dump(2) + "\n";
}

RuleBase rules_from_json(const std::string& text) {
  const Json j = Json::parse(text);
  RuleBase rb;
  for (const auto& r : j.at("primary")) rb.primary.push_back(rule_from_json(r));
  for (const auto& r : j.at("anticipatory")) {
    rb.anticipatory.push_back(rule_from_json(r));
  }
  return rb;
}

void save_rules(const RuleBase& rb, const std::filesystem::path& file) {
  write_file(file, rules_to_json(rb));
}

RuleBase load_rules(const std::filesystem::path& file) {
  return rules_from_json(read_file(file));
}

std::string experiment_to_json(const ExperimentConfig& cfg) {
  Json j;
  j["road_length"] = cfg.road_length;
  j["lanes"] = cfg.lanes;
  j["steps"] = cfg.steps;
  j["repetitions"] = cfg.repetitions;
  j["seed"] = cfg.seed;
  j["arrival_rate"] = cfg.arrival_rate;
  j["long_fraction"] = cfg.long_fraction;
  j["plaza_radius"] = cfg.plaza_radius;
  if (cfg.obstacle_lane) {
    j["obstacle_lane"] = *cfg.obstacle_lane;
  } else {
    j["obstacle_lane"] = nullptr;
  }
  j["noise_enabled"] = cfg.noise_enabled;
  j["kinds"] = cfg.kinds_source;
  j["rules"] = cfg.rules_source;
  return j.dump(2) + "\n";
}

ExperimentConfig experiment_from_json(const std::string& text,
                                      const std::filesystem::path& base_dir) {
  const Json j = Json::parse(text);
  ExperimentConfig cfg;
  cfg.road_length = j.at("road_length").get<double>();
  cfg.lanes = j.at("lanes").get<std::size_t>();
  cfg.steps = j.at("steps").get<std::uint64_t>();
  cfg.repetitions = j.at("repetitions").get<std::uint32_t>();
  cfg.seed = j.value("seed", std::uint64_t{0});
  cfg.arrival_rate = j.at("arrival_rate").get<double>();
  cfg.long_fraction = j.value("long_fraction", 0.0);
  cfg.plaza_radius = j.value("plaza_radius", -1.0);
  if (j.contains("obstacle_lane") && !j.at("obstacle_lane").is_null()) {
    cfg.obstacle_lane = j.at("obstacle_lane").get<std::size_t>();
  }
  cfg.noise_enabled = j.value("noise_enabled", true);

  cfg.kinds_source = j.value("kinds", std::string("default"));
  if (cfg.kinds_source == "default") {
    cfg.kinds = std::make_shared<const KindLibrary>(KindLibrary::defaults());
  } else {
    cfg.kinds = std::make_shared<const KindLibrary>(
        load_kinds(base_dir / cfg.kinds_source));
  }
  cfg.rules_source = j.value("rules", std::string("default"));
  if (cfg.rules_source == "default") {
    cfg.rules = default_rule_base_ptr();
  } else {
    cfg.rules =
        std::make_shared<const RuleBase>(load_rules(base_dir / cfg.rules_source));
  }
  cfg.validate();
  return cfg;
}

void save_experiment(const ExperimentConfig& cfg, const std::filesystem::path& file) {
  write_file(file, experiment_to_json(cfg));
}

ExperimentConfig load_experiment(const std::filesystem::path& file) {
  return experiment_from_json(read_file(file), file.parent_path());
}

}  // namespace ccasim
