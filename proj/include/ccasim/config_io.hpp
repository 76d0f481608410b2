#pragma once

#include <filesystem>
#include <string>

#include "ccasim/scenario.hpp"

namespace ccasim {

/// JSON (de)serialisation of the tunable surfaces: vehicle classes with
/// their membership tables, rule bases, and experiment setups. Numbers are
/// written with shortest round-trip precision, so save(load(x)) == x byte
/// for byte and load(save(v)) reproduces every double bit for bit.

std::string kinds_to_json(const KindLibrary& lib);
KindLibrary kinds_from_json(const std::string& text);
void save_kinds(const KindLibrary& lib, const std::filesystem::path& file);
KindLibrary load_kinds(const std::filesystem::path& file);

std::string rules_to_json(const RuleBase& rb);
RuleBase rules_from_json(const std::string& text);
void save_rules(const RuleBase& rb, const std::filesystem::path& file);
RuleBase load_rules(const std::filesystem::path& file);

/// Experiment configs reference kinds by file ("kinds": path or "default");
/// the loader owns the library via the returned config's shared pointer.
std::string experiment_to_json(const ExperimentConfig& cfg);
ExperimentConfig experiment_from_json(const std::string& text,
                                      const std::filesystem::path& base_dir);
void save_experiment(const ExperimentConfig& cfg, const std::filesystem::path& file);
ExperimentConfig load_experiment(const std::filesystem::path& file);

}  // namespace ccasim
