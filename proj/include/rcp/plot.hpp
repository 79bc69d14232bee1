#pragma once

#include <algorithm>
#include <cstdarg>
#include <cstdio>
#include <fstream>
#include <limits>
#include <string>

#include "rcp/trace.hpp"

// Static SVG rendering of run traces: controller trajectories, tracking
// error, delay cost, and per-step wall-time quartiles. Output is plain
// SVG 1.1 text, byte-deterministic for identical inputs.

namespace rcp {

namespace plotdetail {

inline constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                           "#9467bd", "#ff7f0e", "#8c564b"};
inline constexpr std::size_t kPaletteSize = 6;

inline void appendf(std::string& out, const char* fmt, ...) {
  char buf[256];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof(buf), fmt, args);
  va_end(args);
  out += buf;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void expand(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad() {
    if (lo > hi) {
      lo = 0.0;
      hi = 1.0;
    }
    if (hi <= lo) {
      lo -= 0.5;
      hi += 0.5;
    }
    const double margin = 0.05 * (hi - lo);
    lo -= margin;
    hi += margin;
  }
};

// Maps data coordinates into a pixel rectangle (SVG y grows downward).
struct Panel {
  double px = 0.0, py = 0.0, pw = 1.0, ph = 1.0;
  Range x, y;

  double map_x(double v) const { return px + (v - x.lo) / (x.hi - x.lo) * pw; }
  double map_y(double v) const { return py + ph - (v - y.lo) / (y.hi - y.lo) * ph; }

  void frame(std::string& out, const std::string& title) const {
    appendf(out,
            "<rect x=\"%.3f\" y=\"%.3f\" width=\"%.3f\" height=\"%.3f\" "
            "fill=\"none\" stroke=\"#444444\" stroke-width=\"1\"/>\n",
            px, py, pw, ph);
    appendf(out,
            "<text x=\"%.3f\" y=\"%.3f\" font-size=\"14\" font-family=\"sans-serif\" "
            "fill=\"#222222\">%s</text>\n",
            px, py - 8.0, title.c_str());
    appendf(out,
            "<text x=\"%.3f\" y=\"%.3f\" font-size=\"10\" font-family=\"sans-serif\" "
            "fill=\"#666666\">%.3g</text>\n",
            px - 4.0, py + ph + 12.0, x.lo);
    appendf(out,
            "<text x=\"%.3f\" y=\"%.3f\" font-size=\"10\" font-family=\"sans-serif\" "
            "fill=\"#666666\" text-anchor=\"end\">%.3g</text>\n",
            px + pw, py + ph + 12.0, x.hi);
    appendf(out,
            "<text x=\"%.3f\" y=\"%.3f\" font-size=\"10\" font-family=\"sans-serif\" "
            "fill=\"#666666\" text-anchor=\"end\">%.3g</text>\n",
            px - 4.0, py + ph, y.lo);
    appendf(out,
            "<text x=\"%.3f\" y=\"%.3f\" font-size=\"10\" font-family=\"sans-serif\" "
            "fill=\"#666666\" text-anchor=\"end\">%.3g</text>\n",
            px - 4.0, py + 10.0, y.hi);
  }

  void polyline(std::string& out, const std::vector<double>& xs, const std::vector<double>& ys,
                const char* color) const {
    if (xs.empty()) return;
    out += "<polyline fill=\"none\" stroke=\"";
    out += color;
    out += "\" stroke-width=\"1.2\" points=\"";
    for (std::size_t i = 0; i < xs.size(); ++i) {
      appendf(out, "%s%.3f,%.3f", i == 0 ? "" : " ", map_x(xs[i]), map_y(ys[i]));
    }
    out += "\"/>\n";
  }

  void dot(std::string& out, double vx, double vy, double r, const char* color) const {
    appendf(out, "<circle cx=\"%.3f\" cy=\"%.3f\" r=\"%.2f\" fill=\"%s\"/>\n", map_x(vx),
            map_y(vy), r, color);
  }
};

inline double quantile_sorted(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) return 0.0;
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

}  // namespace plotdetail

inline std::string render_plot(const std::vector<RunTrace>& traces,
                               const std::vector<std::string>& labels) {
  using plotdetail::Panel;
  using plotdetail::appendf;
  using plotdetail::kPalette;
  using plotdetail::kPaletteSize;

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg +=
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"1000\" height=\"800\" "
      "viewBox=\"0 0 1000 800\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"1000\" height=\"800\" fill=\"#ffffff\"/>\n";

  Panel traj{70, 50, 380, 280, {}, {}};
  Panel err{570, 50, 380, 280, {}, {}};
  Panel delay{70, 440, 380, 280, {}, {}};
  Panel timing{570, 440, 380, 280, {}, {}};

  for (const RunTrace& tr : traces) {
    for (const TraceRow& row : tr.rows) {
      err.x.expand(row.t);
      err.y.expand(row.tracking_error);
      delay.x.expand(row.t);
      delay.y.expand(row.d1);
      timing.y.expand(static_cast<double>(row.wall_us) / 1000.0);
      const bool planar = tr.dimension >= 2;
      for (std::size_t j = 0; j < tr.num_controllers; ++j) {
        const double cx = row.controllers[j * tr.dimension + 0];
        const double cy = planar ? row.controllers[j * tr.dimension + 1] : row.t;
        traj.x.expand(cx);
        traj.y.expand(cy);
      }
    }
  }
  traj.x.pad();
  traj.y.pad();
  err.x.pad();
  err.y.pad();
  delay.x.pad();
  delay.y.pad();
  timing.x.expand(0.0);
  timing.x.expand(static_cast<double>(std::max<std::size_t>(traces.size(), 1)));
  timing.y.pad();

  traj.frame(svg, "controller trajectories");
  err.frame(svg, "tracking error vs t");
  delay.frame(svg, "delay cost vs t");
  timing.frame(svg, "step time quartiles (ms)");

  for (std::size_t ti = 0; ti < traces.size(); ++ti) {
    const RunTrace& tr = traces[ti];
    const char* color = kPalette[ti % kPaletteSize];
    const std::string label = ti < labels.size() ? labels[ti] : "trace " + std::to_string(ti);

    appendf(svg, "<rect x=\"%.3f\" y=\"%.3f\" width=\"10\" height=\"10\" fill=\"%s\"/>\n",
            70.0 + 220.0 * static_cast<double>(ti), 760.0, color);
    appendf(svg,
            "<text x=\"%.3f\" y=\"%.3f\" font-size=\"12\" font-family=\"sans-serif\" "
            "fill=\"#222222\">%s</text>\n",
            86.0 + 220.0 * static_cast<double>(ti), 769.0, label.c_str());

    std::vector<double> ts, errs, delays;
    ts.reserve(tr.rows.size());
    for (const TraceRow& row : tr.rows) {
      ts.push_back(row.t);
      errs.push_back(row.tracking_error);
      delays.push_back(row.d1);
    }
    err.polyline(svg, ts, errs, color);
    delay.polyline(svg, ts, delays, color);

    for (std::size_t j = 0; j < tr.num_controllers; ++j) {
      std::vector<double> xs, ys;
      xs.reserve(tr.rows.size());
      ys.reserve(tr.rows.size());
      for (const TraceRow& row : tr.rows) {
        xs.push_back(row.controllers[j * tr.dimension + 0]);
        ys.push_back(tr.dimension >= 2 ? row.controllers[j * tr.dimension + 1] : row.t);
      }
      traj.polyline(svg, xs, ys, color);
      if (!xs.empty()) {
        traj.dot(svg, xs.front(), ys.front(), 2.5, "#999999");
        traj.dot(svg, xs.back(), ys.back(), 3.0, color);
      }
    }

    // Quartile box of the per-step wall times.
    std::vector<double> ms;
    ms.reserve(tr.rows.size());
    for (const TraceRow& row : tr.rows) ms.push_back(static_cast<double>(row.wall_us) / 1000.0);
    std::sort(ms.begin(), ms.end());
    if (!ms.empty()) {
      const double cx = static_cast<double>(ti) + 0.5;
      const double q0 = ms.front();
      const double q25 = plotdetail::quantile_sorted(ms, 0.25);
      const double q50 = plotdetail::quantile_sorted(ms, 0.50);
      const double q75 = plotdetail::quantile_sorted(ms, 0.75);
      const double q100 = ms.back();
      const double half = 0.18;
      appendf(svg,
              "<line x1=\"%.3f\" y1=\"%.3f\" x2=\"%.3f\" y2=\"%.3f\" stroke=\"%s\" "
              "stroke-width=\"1\"/>\n",
              timing.map_x(cx), timing.map_y(q0), timing.map_x(cx), timing.map_y(q100), color);
      appendf(svg,
              "<rect x=\"%.3f\" y=\"%.3f\" width=\"%.3f\" height=\"%.3f\" fill=\"%s\" "
              "fill-opacity=\"0.35\" stroke=\"%s\"/>\n",
              timing.map_x(cx - half), timing.map_y(q75),
              timing.map_x(cx + half) - timing.map_x(cx - half),
              timing.map_y(q25) - timing.map_y(q75), color, color);
      appendf(svg,
              "<line x1=\"%.3f\" y1=\"%.3f\" x2=\"%.3f\" y2=\"%.3f\" stroke=\"%s\" "
              "stroke-width=\"2\"/>\n",
              timing.map_x(cx - half), timing.map_y(q50), timing.map_x(cx + half),
              timing.map_y(q50), color);
    }
  }

  svg += "</svg>\n";
  return svg;
}

inline void emit_plot(const std::vector<RunTrace>& traces, const std::vector<std::string>& labels,
                      const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  const std::string text = render_plot(traces, labels);
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace rcp
