#include "ccasim/svg.hpp"

#include <algorithm>
#include <cmath>

#include "ccasim/outputs.hpp"

namespace ccasim {

namespace {

// Canvas geometry (pixels).
constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 650.0;
constexpr double kTop = 50.0;
constexpr double kBottom = 420.0;

std::string px(double v) {
  // Two decimals are plenty for pixel coordinates and keep files small.
  const double r = std::round(v * 100.0) / 100.0;
  std::string s = format_double(r);
  return s;
}

/// A readable tick spacing of the form {1,2,5}*10^k covering `span`.
double nice_step(double span, int target_ticks) {
  if (!(span > 0.0)) return 1.0;
  const double raw = span / std::max(1, target_ticks);
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (raw <= m * mag) return m * mag;
  }
  return 10.0 * mag;
}

}  // namespace

std::string render_diagram_svg(std::span<const DiagramBin> bins, std::string_view title) {
  double d_max = 0.0;
  double q_max = 0.0;
  bool any_cc = false;
  for (const DiagramBin& b : bins) {
    d_max = std::max(d_max, b.density);
    q_max = std::max(q_max, b.flow_mean);
    any_cc = any_cc || b.cc_mean.has_value();
  }
  if (d_max <= 0.0) d_max = 1.0;
  if (q_max <= 0.0) q_max = 1.0;
  d_max *= 1.05;
  q_max *= 1.1;

  auto sx = [&](double d) { return kLeft + (d / d_max) * (kRight - kLeft); };
  auto sy = [&](double q) { return kBottom - (q / q_max) * (kBottom - kTop); };
  auto sy_cc = [&](double c) {
    return kBottom - ((c + 1.0) / 2.0) * (kBottom - kTop);
  };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + px(kWidth) +
         "\" height=\"" + px(kHeight) + "\" viewBox=\"0 0 " + px(kWidth) + " " +
         px(kHeight) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + px((kLeft + kRight) / 2) + "\" y=\"24\" font-size=\"16\" "
         "text-anchor=\"middle\" font-family=\"sans-serif\">" +
         std::string(title) + "</text>\n";

  // Axes.
  svg += "<line x1=\"" + px(kLeft) + "\" y1=\"" + px(kBottom) + "\" x2=\"" +
         px(kRight) + "\" y2=\"" + px(kBottom) + "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + px(kLeft) + "\" y1=\"" + px(kTop) + "\" x2=\"" + px(kLeft) +
         "\" y2=\"" + px(kBottom) + "\" stroke=\"black\"/>\n";
  if (any_cc) {
    svg += "<line x1=\"" + px(kRight) + "\" y1=\"" + px(kTop) + "\" x2=\"" +
           px(kRight) + "\" y2=\"" + px(kBottom) + "\" stroke=\"#888\"/>\n";
  }

  // Ticks and labels.
  const double dx = nice_step(d_max, 8);
  for (double d = 0.0; d <= d_max + 1e-12; d += dx) {
    svg += "<line x1=\"" + px(sx(d)) + "\" y1=\"" + px(kBottom) + "\" x2=\"" +
           px(sx(d)) + "\" y2=\"" + px(kBottom + 5) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + px(sx(d)) + "\" y=\"" + px(kBottom + 20) +
           "\" font-size=\"11\" text-anchor=\"middle\" font-family=\"sans-serif\">" +
           format_double(std::round(d * 1e6) / 1e6) + "</text>\n";
  }
  const double dq = nice_step(q_max, 6);
  for (double q = 0.0; q <= q_max + 1e-12; q += dq) {
    svg += "<line x1=\"" + px(kLeft - 5) + "\" y1=\"" + px(sy(q)) + "\" x2=\"" +
           px(kLeft) + "\" y2=\"" + px(sy(q)) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + px(kLeft - 8) + "\" y=\"" + px(sy(q) + 4) +
           "\" font-size=\"11\" text-anchor=\"end\" font-family=\"sans-serif\">" +
           format_double(std::round(q * 1e6) / 1e6) + "</text>\n";
  }
  if (any_cc) {
    for (double c = -1.0; c <= 1.0 + 1e-12; c += 0.5) {
      svg += "<line x1=\"" + px(kRight) + "\" y1=\"" + px(sy_cc(c)) + "\" x2=\"" +
             px(kRight + 5) + "\" y2=\"" + px(sy_cc(c)) + "\" stroke=\"#888\"/>\n";
      svg += "<text x=\"" + px(kRight + 8) + "\" y=\"" + px(sy_cc(c) + 4) +
             "\" font-size=\"11\" text-anchor=\"start\" fill=\"#555\" "
             "font-family=\"sans-serif\">" + format_double(c) + "</text>\n";
    }
  }

  // Axis titles.
  svg += "<text x=\"" + px((kLeft + kRight) / 2) + "\" y=\"" + px(kBottom + 42) +
         "\" font-size=\"13\" text-anchor=\"middle\" font-family=\"sans-serif\">"
         "density (veh/m)</text>\n";
  svg += "<text x=\"18\" y=\"" + px((kTop + kBottom) / 2) +
         "\" font-size=\"13\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "transform=\"rotate(-90 18 " + px((kTop + kBottom) / 2) + ")\">"
         "flow (veh/s)</text>\n";
  if (any_cc) {
    svg += "<text x=\"" + px(kWidth - 14) + "\" y=\"" + px((kTop + kBottom) / 2) +
           "\" font-size=\"13\" text-anchor=\"middle\" fill=\"#555\" "
           "font-family=\"sans-serif\" transform=\"rotate(90 " + px(kWidth - 14) +
           " " + px((kTop + kBottom) / 2) + ")\">flow-density correlation</text>\n";
  }

  // Flow series.
  if (!bins.empty()) {
    std::string pts;
    for (const DiagramBin& b : bins) {
      pts += px(sx(b.density)) + "," + px(sy(b.flow_mean)) + " ";
    }
    svg += "<polyline fill=\"none\" stroke=\"#1f6fb2\" stroke-width=\"1.5\" "
           "points=\"" + pts + "\"/>\n";
    for (const DiagramBin& b : bins) {
      svg += "<circle cx=\"" + px(sx(b.density)) + "\" cy=\"" + px(sy(b.flow_mean)) +
             "\" r=\"2.5\" fill=\"#1f6fb2\"/>\n";
    }
  }

  // Correlation overlay.
  if (any_cc) {
    std::string pts;
    for (const DiagramBin& b : bins) {
      if (!b.cc_mean) continue;
      pts += px(sx(b.density)) + "," + px(sy_cc(*b.cc_mean)) + " ";
    }
    svg += "<polyline fill=\"none\" stroke=\"#c44e52\" stroke-width=\"1.5\" "
           "stroke-dasharray=\"5 3\" points=\"" + pts + "\"/>\n";
  }

  // Legend.
  svg += "<rect x=\"" + px(kLeft + 10) + "\" y=\"" + px(kTop + 6) +
         "\" width=\"190\" height=\"" + (any_cc ? std::string("38") : std::string("22")) +
         "\" fill=\"white\" stroke=\"#ccc\"/>\n";
  svg += "<line x1=\"" + px(kLeft + 18) + "\" y1=\"" + px(kTop + 18) + "\" x2=\"" +
         px(kLeft + 46) + "\" y2=\"" + px(kTop + 18) +
         "\" stroke=\"#1f6fb2\" stroke-width=\"1.5\"/>\n";
  svg += "<text x=\"" + px(kLeft + 52) + "\" y=\"" + px(kTop + 22) +
         "\" font-size=\"11\" font-family=\"sans-serif\">mean flow per bin</text>\n";
  if (any_cc) {
    svg += "<line x1=\"" + px(kLeft + 18) + "\" y1=\"" + px(kTop + 34) + "\" x2=\"" +
           px(kLeft + 46) + "\" y2=\"" + px(kTop + 34) +
           "\" stroke=\"#c44e52\" stroke-width=\"1.5\" stroke-dasharray=\"5 3\"/>\n";
    svg += "<text x=\"" + px(kLeft + 52) + "\" y=\"" + px(kTop + 38) +
           "\" font-size=\"11\" font-family=\"sans-serif\">mean correlation per bin"
           "</text>\n";
  }

  svg += "</svg>\n";
  return svg;
}

}  // namespace ccasim
