#pragma once

#include <filesystem>
#include <string>

#include "ccasim/analysis.hpp"
#include "ccasim/scenario.hpp"

namespace ccasim {

/// Shortest decimal string that parses back to exactly the same double
/// (std::to_chars); the basis of byte-reproducible outputs.
std::string format_double(double v);

/// In-memory CSV renderings (also what the files contain, byte for byte).
std::string metrics_csv(const RepetitionResult& rep);
std::string cross_covariance_csv(std::span<const std::optional<double>> cc);
std::string fundamental_diagram_csv(std::span<const DiagramBin> bins);
std::string audit_csv(std::span<const RepetitionResult> reps);

/// Writes the full artefact set for a run into out_dir (created if needed):
///   rep_NNN.csv            one per repetition ("t,N,D,v_av,q,throughput10,latency")
///   cross_covariance.csv   "t,cc" (cc empty when undefined)
///   fundamental_diagram.csv"D_bin,q_mean,cc_mean,n"
///   audit.csv              arrival/exit accounting per repetition
///   diagram.svg            flow over density with the cc overlay
/// Degenerate runs (single repetition, empty series) produce header-only
/// files rather than errors.
void emit_outputs(const RunResult& result, const std::filesystem::path& out_dir);

/// Parsers for the two analysis CSVs (used by the offline plot command).
std::vector<DiagramBin> read_fundamental_diagram_csv(const std::filesystem::path& file);
std::vector<std::optional<double>> read_cross_covariance_csv(
    const std::filesystem::path& file);

}  // namespace ccasim
