#pragma once

// Scenario files (JSON). Key grammar:
//   init.s, init.i
//   schedule[k].t, schedule[k].beta, schedule[k].gamma
//   run[k].method, run[k].formulation, run[k].dt, run[k].t_end,
//   run[k].newton_tol, run[k].newton_max_iter, run[k].constraint_tol, run[k].name
//   tolerance.h_drift, tolerance.population, tolerance.constraint,
//   tolerance.equivalence, tolerance.equivalence_tau
//   output.stride

#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sirmech/core_types.hpp"
#include "sirmech/integrate.hpp"

namespace sirmech::io {

struct Tolerances {
  double h_drift = 1e-6;
  double population = 1e-12;
  double constraint = 1e-8;
  double equivalence = 1e-5;      // pairs of ordinary-time runs
  double equivalence_tau = 1e-4;  // pairs involving a rescaled-time run
};

struct NamedRun {
  std::string name;
  RunSpec spec;
  nlohmann::json source;  // the run entry as written, for hashing
};

struct OutputOptions {
  int stride = 1;
};

struct Scenario {
  CompartmentState init;
  ParamSchedule schedule;
  std::vector<NamedRun> runs;
  Tolerances tolerance;
  OutputOptions output;
  nlohmann::json source;
};

namespace detail {

[[noreturn]] inline void config_error(const std::string& msg) { throw Error(ErrorKind::Config, msg); }

inline double number(const nlohmann::json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) config_error("missing key " + where + "." + key);
  const auto& v = obj.at(key);
  if (!v.is_number()) config_error(where + "." + key + " must be a number");
  return v.get<double>();
}

inline double number_or(const nlohmann::json& obj, const char* key, double fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  return number(obj, key, where);
}

inline std::string text(const nlohmann::json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) config_error("missing key " + where + "." + key);
  const auto& v = obj.at(key);
  if (!v.is_string()) config_error(where + "." + key + " must be a string");
  return v.get<std::string>();
}

}  // namespace detail

inline NamedRun parse_run(const nlohmann::json& entry, std::size_t k) {
  const std::string where = "run[" + std::to_string(k) + "]";
  if (!entry.is_object()) detail::config_error(where + " must be an object");
  RunSpec spec;
  const std::string method = detail::text(entry, "method", where);
  const std::string formulation = detail::text(entry, "formulation", where);
  const auto m = parse_method(method);
  if (!m) detail::config_error(where + ".method: unknown method '" + method + "'");
  const auto f = parse_formulation(formulation);
  if (!f) detail::config_error(where + ".formulation: unknown formulation '" + formulation + "'");
  spec.method = *m;
  spec.formulation = *f;
  spec.dt = detail::number(entry, "dt", where);
  spec.t_end = detail::number(entry, "t_end", where);
  spec.newton.tolerance = detail::number_or(entry, "newton_tol", spec.newton.tolerance, where);
  const double max_iter = detail::number_or(entry, "newton_max_iter", spec.newton.max_iterations, where);
  if (max_iter != std::floor(max_iter) || max_iter < 1 || max_iter > 1e6)
    detail::config_error(where + ".newton_max_iter must be a positive integer");
  spec.newton.max_iterations = static_cast<int>(max_iter);
  spec.constraint_tolerance = detail::number_or(entry, "constraint_tol", spec.constraint_tolerance, where);
  std::string name = entry.contains("name") ? detail::text(entry, "name", where)
                                            : "run" + std::to_string(k) + "_" + formulation + "_" + method;
  for (char c : name)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.'))
      detail::config_error(where + ".name may only contain letters, digits, '_', '-', '.'");
  return {std::move(name), spec, entry};
}

inline Scenario parse_scenario(const nlohmann::json& doc) {
  try {
    if (!doc.is_object()) detail::config_error("scenario must be a JSON object");
    if (!doc.contains("init")) detail::config_error("missing key init");
    const auto& init_json = doc.at("init");
    const CompartmentState init(detail::number(init_json, "s", "init"), detail::number(init_json, "i", "init"));

    if (!doc.contains("schedule") || !doc.at("schedule").is_array() || doc.at("schedule").empty())
      detail::config_error("schedule must be a non-empty array");
    std::vector<ParamSchedule::Segment> segments;
    std::size_t k = 0;
    for (const auto& seg : doc.at("schedule")) {
      const std::string where = "schedule[" + std::to_string(k++) + "]";
      segments.push_back({detail::number(seg, "t", where),
                          EpidemicParams(detail::number(seg, "beta", where), detail::number(seg, "gamma", where))});
    }
    ParamSchedule schedule(std::move(segments));

    if (!doc.contains("run") || !doc.at("run").is_array() || doc.at("run").empty())
      detail::config_error("run must be a non-empty array");
    std::vector<NamedRun> runs;
    for (std::size_t r = 0; r < doc.at("run").size(); ++r) {
      runs.push_back(parse_run(doc.at("run")[r], r));
      validate(runs.back().spec, schedule);
      for (std::size_t q = 0; q + 1 < runs.size(); ++q)
        if (runs[q].name == runs.back().name) detail::config_error("duplicate run name '" + runs.back().name + "'");
    }

    Tolerances tol;
    if (doc.contains("tolerance")) {
      const auto& t = doc.at("tolerance");
      if (!t.is_object()) detail::config_error("tolerance must be an object");
      tol.h_drift = detail::number_or(t, "h_drift", tol.h_drift, "tolerance");
      tol.population = detail::number_or(t, "population", tol.population, "tolerance");
      tol.constraint = detail::number_or(t, "constraint", tol.constraint, "tolerance");
      tol.equivalence = detail::number_or(t, "equivalence", tol.equivalence, "tolerance");
      tol.equivalence_tau = detail::number_or(t, "equivalence_tau", tol.equivalence_tau, "tolerance");
      for (double v : {tol.h_drift, tol.population, tol.constraint, tol.equivalence, tol.equivalence_tau})
        if (!(v >= 0.0)) detail::config_error("tolerances must be non-negative");
    }

    OutputOptions output;
    if (doc.contains("output")) {
      const double stride = detail::number_or(doc.at("output"), "stride", 1, "output");
      if (stride != std::floor(stride) || stride < 1) detail::config_error("output.stride must be a positive integer");
      output.stride = static_cast<int>(stride);
    }
    return {init, std::move(schedule), std::move(runs), tol, output, doc};
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Config) throw;
    throw Error(ErrorKind::Config, e.what());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Config, e.what());
  }
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Config, "cannot open scenario file '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::Config, "'" + path + "': " + e.what());
  }
  return parse_scenario(doc);
}

/// FNV-1a over the run entry plus the shared init and schedule.
inline std::string spec_hash(const Scenario& scenario, const NamedRun& run) {
  const std::string canonical =
      nlohmann::json{{"init", scenario.source.at("init")}, {"schedule", scenario.source.at("schedule")},
                     {"run", run.source}}
          .dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace sirmech::io
