#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "rcp/scenario.hpp"

namespace rcp {

namespace detail {

inline double get_number(const nlohmann::json& j, const char* field, const char* where) {
  if (!j.contains(field)) {
    throw std::invalid_argument(std::string("missing field \"") + field + "\" in " + where);
  }
  const nlohmann::json& v = j.at(field);
  if (!v.is_number()) {
    throw std::invalid_argument(std::string("field \"") + field + "\" in " + where +
                                " must be a number");
  }
  return v.get<double>();
}

inline std::uint64_t get_unsigned(const nlohmann::json& j, const char* field,
                                  const char* where) {
  if (!j.contains(field)) {
    throw std::invalid_argument(std::string("missing field \"") + field + "\" in " + where);
  }
  const nlohmann::json& v = j.at(field);
  if (!(v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0))) {
    throw std::invalid_argument(std::string("field \"") + field + "\" in " + where +
                                " must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

inline Vec get_point(const nlohmann::json& j, const char* field, std::size_t dimension,
                     const char* where) {
  if (!j.contains(field)) {
    throw std::invalid_argument(std::string("missing field \"") + field + "\" in " + where);
  }
  const nlohmann::json& v = j.at(field);
  if (!v.is_array() || v.size() != dimension) {
    throw std::invalid_argument(std::string("field \"") + field + "\" in " + where +
                                " must be an array of " + std::to_string(dimension) +
                                " numbers");
  }
  Vec p;
  p.reserve(dimension);
  for (const nlohmann::json& c : v) {
    if (!c.is_number()) {
      throw std::invalid_argument(std::string("field \"") + field + "\" in " + where +
                                  " must contain numbers only");
    }
    p.push_back(c.get<double>());
  }
  return p;
}

inline void reject_unknown(const nlohmann::json& j,
                           std::initializer_list<const char*> known, const char* where) {
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* k : known) {
      if (item.key() == k) {
        ok = true;
        break;
      }
    }
    if (!ok) {
      throw std::invalid_argument("unknown field \"" + item.key() + "\" in " + where);
    }
  }
}

}  // namespace detail

inline nlohmann::json scenario_to_json(const Scenario& s) {
  nlohmann::json j;
  j["dimension"] = s.mobility.dimension;
  nlohmann::json nodes = nlohmann::json::array();
  for (const NodeMotion& n : s.mobility.nodes) {
    nlohmann::json e;
    e["start"] = n.start;
    e["end"] = n.end;
    e["rate"] = n.rate;
    nodes.push_back(std::move(e));
  }
  j["nodes"] = std::move(nodes);
  j["num_controllers"] = s.num_controllers;
  j["gamma"] = s.gamma;
  j["k0"] = s.k0;
  j["t0_temperature"] = s.t0_temperature;
  j["alpha"] = s.alpha;
  j["horizon"] = s.horizon;
  j["steps"] = s.steps;
  j["seed"] = s.seed;
  return j;
}

// Strict scenario parse: every field name is part of the contract and
// unknown fields are rejected by name.
inline Scenario scenario_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("scenario file must be a JSON object");
  detail::reject_unknown(j,
                         {"dimension", "nodes", "num_controllers", "gamma", "k0",
                          "t0_temperature", "alpha", "horizon", "steps", "seed"},
                         "scenario file");
  Scenario s;
  s.mobility.dimension =
      static_cast<std::size_t>(detail::get_unsigned(j, "dimension", "scenario file"));
  if (!j.contains("nodes") || !j.at("nodes").is_array()) {
    throw std::invalid_argument("missing field \"nodes\" in scenario file");
  }
  for (const nlohmann::json& e : j.at("nodes")) {
    if (!e.is_object()) throw std::invalid_argument("node entries must be JSON objects");
    detail::reject_unknown(e, {"start", "end", "rate"}, "node entry");
    NodeMotion n;
    n.start = detail::get_point(e, "start", s.mobility.dimension, "node entry");
    n.end = detail::get_point(e, "end", s.mobility.dimension, "node entry");
    n.rate = detail::get_number(e, "rate", "node entry");
    s.mobility.nodes.push_back(std::move(n));
  }
  s.num_controllers =
      static_cast<std::size_t>(detail::get_unsigned(j, "num_controllers", "scenario file"));
  s.gamma = detail::get_number(j, "gamma", "scenario file");
  s.k0 = detail::get_number(j, "k0", "scenario file");
  s.t0_temperature = detail::get_number(j, "t0_temperature", "scenario file");
  s.alpha = detail::get_number(j, "alpha", "scenario file");
  s.horizon = detail::get_number(j, "horizon", "scenario file");
  s.steps = static_cast<std::size_t>(detail::get_unsigned(j, "steps", "scenario file"));
  s.seed = detail::get_unsigned(j, "seed", "scenario file");
  validate(s);
  return s;
}

inline void save_scenario(const Scenario& s, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  const std::string text = scenario_to_json(s).dump(2) + "\n";
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!f) throw std::runtime_error("write failed: " + path);
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for reading: " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(f);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument("invalid JSON in " + path + ": " + e.what());
  }
  return scenario_from_json(j);
}

}  // namespace rcp
