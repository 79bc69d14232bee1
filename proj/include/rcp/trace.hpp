#pragma once

#include <algorithm>
#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "rcp/params.hpp"
#include "rcp/vec.hpp"

namespace rcp {

// One record per simulation step. `controllers` is the placement in effect
// at time t (before that step's update), flattened controller-major, and all
// cost terms are evaluated at that same configuration.
struct TraceRow {
  std::uint64_t step = 0;
  double t = 0.0;
  double temperature = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double entropy = 0.0;
  double free_energy = 0.0;
  double tracking_error = 0.0;
  std::uint64_t wall_us = 0;
  std::vector<double> controllers;
};

// Configuration echo carried with every trace for reproducibility.
struct RunHeader {
  std::string algo;
  Scenario scenario;
  ControllerGains gains;
  AnnealSchedule schedule;
  FrameSolverConfig frame;
};

struct RunTrace {
  RunHeader header;
  std::size_t num_controllers = 0;
  std::size_t dimension = 0;
  std::vector<TraceRow> rows;
};

namespace detail {

inline void append_double(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

}  // namespace detail

inline std::string csv_header(std::size_t num_controllers, std::size_t dimension) {
  std::string h = "step,t,temperature,d1,d2,entropy,free_energy,tracking_error,wall_us";
  for (std::size_t j = 0; j < num_controllers; ++j) {
    for (std::size_t k = 0; k < dimension; ++k) {
      h += ",y" + std::to_string(j) + "_" + std::to_string(k);
    }
  }
  return h;
}

// Render the trace as CSV text: one header line then one line per row,
// doubles at 17 significant digits, '\n' line endings. With zero_walltime
// the wall_us column is written as 0 so outputs are byte-comparable.
inline std::string to_csv(const RunTrace& trace, bool zero_walltime = false) {
  std::string out = csv_header(trace.num_controllers, trace.dimension);
  out += '\n';
  char buf[48];
  for (const TraceRow& row : trace.rows) {
    std::snprintf(buf, sizeof(buf), "%" PRIu64, row.step);
    out += buf;
    out += ',';
    detail::append_double(out, row.t);
    out += ',';
    detail::append_double(out, row.temperature);
    out += ',';
    detail::append_double(out, row.d1);
    out += ',';
    detail::append_double(out, row.d2);
    out += ',';
    detail::append_double(out, row.entropy);
    out += ',';
    detail::append_double(out, row.free_energy);
    out += ',';
    detail::append_double(out, row.tracking_error);
    out += ',';
    std::snprintf(buf, sizeof(buf), "%" PRIu64, zero_walltime ? 0 : row.wall_us);
    out += buf;
    for (double c : row.controllers) {
      out += ',';
      detail::append_double(out, c);
    }
    out += '\n';
  }
  return out;
}

inline void emit_csv(const RunTrace& trace, const std::string& path, bool zero_walltime = false) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  const std::string text = to_csv(trace, zero_walltime);
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!f) throw std::runtime_error("write failed: " + path);
}

// Parse a trace CSV produced by emit_csv. The configuration header is not
// part of the file format, so the returned trace carries geometry only.
inline RunTrace parse_csv_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty trace file");
  RunTrace trace;
  {
    // Column count past the nine fixed columns determines M and d.
    std::size_t commas = 0;
    for (char c : line) commas += (c == ',');
    const std::size_t coord_cols = commas >= 8 ? commas - 8 : 0;
    std::size_t m = 0;
    std::size_t d = 0;
    std::size_t pos = 0;
    std::size_t field = 0;
    while (pos <= line.size()) {
      std::size_t next = line.find(',', pos);
      if (next == std::string::npos) next = line.size();
      const std::string name = line.substr(pos, next - pos);
      if (field >= 9) {
        std::size_t j = 0, k = 0;
        if (std::sscanf(name.c_str(), "y%zu_%zu", &j, &k) != 2) {
          throw std::runtime_error("unexpected trace column: " + name);
        }
        m = std::max(m, j + 1);
        d = std::max(d, k + 1);
      }
      ++field;
      pos = next + 1;
    }
    if (m * d != coord_cols) throw std::runtime_error("inconsistent controller columns");
    trace.num_controllers = m;
    trace.dimension = d;
    if (line != csv_header(m, d)) throw std::runtime_error("unexpected trace header");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    TraceRow row;
    const char* p = line.c_str();
    char* end = nullptr;
    auto next_field = [&]() {
      if (*p == ',') ++p;
    };
    row.step = std::strtoull(p, &end, 10);
    p = end;
    next_field();
    row.t = std::strtod(p, &end);
    p = end;
    next_field();
    row.temperature = std::strtod(p, &end);
    p = end;
    next_field();
    row.d1 = std::strtod(p, &end);
    p = end;
    next_field();
    row.d2 = std::strtod(p, &end);
    p = end;
    next_field();
    row.entropy = std::strtod(p, &end);
    p = end;
    next_field();
    row.free_energy = std::strtod(p, &end);
    p = end;
    next_field();
    row.tracking_error = std::strtod(p, &end);
    p = end;
    next_field();
    row.wall_us = std::strtoull(p, &end, 10);
    p = end;
    row.controllers.reserve(trace.num_controllers * trace.dimension);
    for (std::size_t c = 0; c < trace.num_controllers * trace.dimension; ++c) {
      next_field();
      row.controllers.push_back(std::strtod(p, &end));
      if (p == end) throw std::runtime_error("short trace row");
      p = end;
    }
    trace.rows.push_back(std::move(row));
  }
  return trace;
}

inline RunTrace parse_csv(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_csv_text(ss.str());
}

// Controller coordinates of a row as a list of points.
inline std::vector<Vec> row_controllers(const RunTrace& trace, const TraceRow& row) {
  std::vector<Vec> out(trace.num_controllers, Vec(trace.dimension));
  for (std::size_t j = 0; j < trace.num_controllers; ++j) {
    for (std::size_t k = 0; k < trace.dimension; ++k) {
      out[j][k] = row.controllers[j * trace.dimension + k];
    }
  }
  return out;
}

}  // namespace rcp
