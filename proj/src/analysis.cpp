#include "ccasim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace ccasim {

MetricsSample sample(const Road& r, std::uint64_t t, double road_length) {
  if (!(road_length > 0.0)) throw std::domain_error("road length must be positive");
  MetricsSample m;
  m.t = t;
  double v_sum = 0.0;
  for (const Lane& lane : r.lanes) {
    for (const VehicleState& s : lane.vehicles()) {
      if (s.kind->immobile) continue;
      ++m.n;
      v_sum += s.v;
    }
  }
  m.density = static_cast<double>(m.n) / road_length;
  m.v_av = m.n > 0 ? v_sum / static_cast<double>(m.n) : 0.0;
  m.flow = m.density * m.v_av;
  return m;
}

std::vector<std::optional<double>> cross_covariance(
    std::span<const RepetitionResult> ensemble) {
  if (ensemble.size() < 2) {
    throw std::domain_error("cross-covariance needs at least two repetitions");
  }
  const std::size_t steps = ensemble[0].series.size();
  for (const RepetitionResult& rep : ensemble) {
    if (rep.series.size() != steps) {
      throw std::domain_error("repetitions must share the same step count");
    }
  }

  const double n = static_cast<double>(ensemble.size());
  std::vector<std::optional<double>> cc(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    double mean_q = 0.0;
    double mean_d = 0.0;
    for (const RepetitionResult& rep : ensemble) {
      mean_q += rep.series[i].flow;
      mean_d += rep.series[i].density;
    }
    mean_q /= n;
    mean_d /= n;

    double cov = 0.0;
    double var_q = 0.0;
    double var_d = 0.0;
    for (const RepetitionResult& rep : ensemble) {
      const double dq = rep.series[i].flow - mean_q;
      const double dd = rep.series[i].density - mean_d;
      cov += dq * dd;
      var_q += dq * dq;
      var_d += dd * dd;
    }
    const double sd_q = std::sqrt(var_q / n);
    const double sd_d = std::sqrt(var_d / n);
    // Degenerate (constant) series have no defined correlation; the floor is
    // relative because exact zero is not IEEE-robust.
    if (sd_q <= 1e-12 * (1.0 + std::abs(mean_q)) ||
        sd_d <= 1e-12 * (1.0 + std::abs(mean_d))) {
      cc[i] = std::nullopt;
    } else {
      cc[i] = (cov / n) / (sd_q * sd_d);
    }
  }
  return cc;
}

std::vector<DiagramSample> pool_diagram_samples(
    std::span<const RepetitionResult> ensemble) {
  const auto cc = cross_covariance(ensemble);
  std::vector<DiagramSample> out;
  out.reserve(ensemble.size() * cc.size());
  for (const RepetitionResult& rep : ensemble) {
    for (std::size_t i = 0; i < rep.series.size(); ++i) {
      out.push_back({rep.series[i].density, rep.series[i].flow, cc[i]});
    }
  }
  return out;
}

std::vector<DiagramBin> fundamental_diagram(std::span<const DiagramSample> samples,
                                            std::size_t lanes,
                                            double bin_width_per_lane) {
  if (lanes == 0) throw std::domain_error("diagram needs at least one lane");
  if (!(bin_width_per_lane > 0.0)) {
    throw std::domain_error("bin width must be positive");
  }

  struct BinAcc {
    std::vector<double> flows;
    std::vector<double> ccs;
    std::size_t count = 0;
  };
  std::map<std::int64_t, BinAcc> bins;
  const double m = static_cast<double>(lanes);
  for (const DiagramSample& s : samples) {
    const double per_lane = s.density / m;
    const auto idx = static_cast<std::int64_t>(std::floor(per_lane / bin_width_per_lane));
    BinAcc& acc = bins[idx];
    acc.flows.push_back(s.flow);
    if (s.cc) acc.ccs.push_back(*s.cc);
    ++acc.count;
  }

  std::vector<DiagramBin> out;
  out.reserve(bins.size());
  for (auto& [idx, acc] : bins) {
    // Value-sorted accumulation makes the sums independent of input order.
    std::sort(acc.flows.begin(), acc.flows.end());
    std::sort(acc.ccs.begin(), acc.ccs.end());
    DiagramBin bin;
    bin.density = (static_cast<double>(idx) + 0.5) * bin_width_per_lane * m;
    double q_sum = 0.0;
    for (double q : acc.flows) q_sum += q;
    bin.flow_mean = q_sum / static_cast<double>(acc.flows.size());
    if (!acc.ccs.empty()) {
      double c_sum = 0.0;
      for (double c : acc.ccs) c_sum += c;
      bin.cc_mean = c_sum / static_cast<double>(acc.ccs.size());
    }
    bin.count = acc.count;
    out.push_back(bin);
  }
  return out;
}

}  // namespace ccasim
