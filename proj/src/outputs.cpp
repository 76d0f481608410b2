#include "ccasim/outputs.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ccasim/svg.hpp"

namespace ccasim {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string metrics_csv(const RepetitionResult& rep) {
  std::string out = "t,N,D,v_av,q,throughput10,latency\n";
  for (const MetricsSample& m : rep.series) {
    out += std::to_string(m.t);
    out += ',';
    out += std::to_string(m.n);
    out += ',';
    out += format_double(m.density);
    out += ',';
    out += format_double(m.v_av);
    out += ',';
    out += format_double(m.flow);
    out += ',';
    out += format_double(m.throughput10);
    out += ',';
    out += format_double(m.latency10);
    out += '\n';
  }
  return out;
}

std::string cross_covariance_csv(std::span<const std::optional<double>> cc) {
  std::string out = "t,cc\n";
  for (std::size_t i = 0; i < cc.size(); ++i) {
    out += std::to_string(i + 1);
    out += ',';
    if (cc[i]) out += format_double(*cc[i]);
    out += '\n';
  }
  return out;
}

std::string fundamental_diagram_csv(std::span<const DiagramBin> bins) {
  std::string out = "D_bin,q_mean,cc_mean,n\n";
  for (const DiagramBin& b : bins) {
    out += format_double(b.density);
    out += ',';
    out += format_double(b.flow_mean);
    out += ',';
    if (b.cc_mean) out += format_double(*b.cc_mean);
    out += ',';
    out += std::to_string(b.count);
    out += '\n';
  }
  return out;
}

std::string audit_csv(std::span<const RepetitionResult> reps) {
  std::string out = "rep,attempted,entered,dropped,processed\n";
  for (const RepetitionResult& r : reps) {
    out += std::to_string(r.repetition);
    out += ',';
    out += std::to_string(r.attempted);
    out += ',';
    out += std::to_string(r.entered);
    out += ',';
    out += std::to_string(r.dropped);
    out += ',';
    out += std::to_string(r.processed);
    out += '\n';
  }
  return out;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << content;
}

}  // namespace

void emit_outputs(const RunResult& result, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);

  for (const RepetitionResult& rep : result.repetitions) {
    char name[32];
    std::snprintf(name, sizeof(name), "rep_%03u.csv", rep.repetition);
    write_file(out_dir / name, metrics_csv(rep));
  }

  std::vector<std::optional<double>> cc;
  if (result.repetitions.size() >= 2) {
    cc = cross_covariance(result.repetitions);
  } else if (!result.repetitions.empty()) {
    cc.assign(result.repetitions[0].series.size(), std::nullopt);
  }
  write_file(out_dir / "cross_covariance.csv", cross_covariance_csv(cc));

  std::vector<DiagramSample> samples;
  for (const RepetitionResult& rep : result.repetitions) {
    for (std::size_t i = 0; i < rep.series.size(); ++i) {
      samples.push_back({rep.series[i].density, rep.series[i].flow,
                         i < cc.size() ? cc[i] : std::nullopt});
    }
  }
  std::vector<DiagramBin> bins;
  if (!samples.empty()) {
    bins = fundamental_diagram(samples, result.cfg.lanes == 0 ? 1 : result.cfg.lanes);
  }
  write_file(out_dir / "fundamental_diagram.csv", fundamental_diagram_csv(bins));
  write_file(out_dir / "audit.csv", audit_csv(result.repetitions));
  write_file(out_dir / "diagram.svg", render_diagram_svg(bins, "flow over density"));
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      cells.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  cells.push_back(cur);
  return cells;
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{}) throw std::runtime_error("bad number in CSV: " + s);
  return v;
}

}  // namespace

std::vector<DiagramBin> read_fundamental_diagram_csv(const std::filesystem::path& file) {
  std::ifstream f(file);
  if (!f) throw std::runtime_error("cannot read " + file.string());
  std::string line;
  if (!std::getline(f, line)) throw std::runtime_error("empty CSV: " + file.string());
  std::vector<DiagramBin> bins;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != 4) throw std::runtime_error("bad diagram row: " + line);
    DiagramBin b;
    b.density = parse_double(cells[0]);
    b.flow_mean = parse_double(cells[1]);
    if (!cells[2].empty()) b.cc_mean = parse_double(cells[2]);
    b.count = static_cast<std::size_t>(parse_double(cells[3]));
    bins.push_back(b);
  }
  return bins;
}

std::vector<std::optional<double>> read_cross_covariance_csv(
    const std::filesystem::path& file) {
  std::ifstream f(file);
  if (!f) throw std::runtime_error("cannot read " + file.string());
  std::string line;
  if (!std::getline(f, line)) throw std::runtime_error("empty CSV: " + file.string());
  std::vector<std::optional<double>> cc;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != 2) throw std::runtime_error("bad cc row: " + line);
    if (cells[1].empty()) {
      cc.push_back(std::nullopt);
    } else {
      cc.push_back(parse_double(cells[1]));
    }
  }
  return cc;
}

}  // namespace ccasim
