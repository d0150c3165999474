#pragma once

// Command implementations behind the sirmech executable. Each returns a
// process exit code:
//   0 success, 1 check failure, 2 configuration error, 3 numerical failure.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "sirmech/diagnostics.hpp"
#include "sirmech/io/csv.hpp"
#include "sirmech/io/scenario.hpp"
#include "sirmech/io/svg.hpp"

namespace sirmech::io {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

/// Exit code for an error raised while loading or running a scenario.
inline int exit_code_for(const Error& e) {
  if (is_numerical_failure(e.kind()) || e.kind() == ErrorKind::RhsDomainError) return kExitNumerical;
  return kExitConfig;
}

struct CommandStreams {
  std::ostream& out = std::cout;
  std::ostream& err = std::cerr;
  bool verbose = false;
};

namespace detail {

inline SampleObserver step_logger(const CommandStreams& io, const std::string& name) {
  if (!io.verbose) return {};
  return [&io, name](const Sample& s) {
    io.err << "[" << name << "] t=" << format_double(s.t) << " tau=" << format_double(s.tau)
           << " S=" << format_double(s.state.s()) << " I=" << format_double(s.state.i()) << '\n';
  };
}

inline void ensure_directory(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir))
    throw Error(ErrorKind::Config, "cannot create output directory '" + dir + "'");
}

inline void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Config, "cannot write '" + path.string() + "'");
  out << contents;
  if (!out) throw Error(ErrorKind::Config, "failed writing '" + path.string() + "'");
}

inline double max_segment_drift(const ConservationReport& report) {
  double worst = 0.0;
  for (double d : report.per_segment_drift) worst = std::max(worst, d);
  return worst;
}

inline std::string csv_text(const Trajectory& traj, int stride) {
  std::ostringstream os;
  write_trajectory_csv(os, traj, stride);
  return os.str();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// run

inline int cmd_run(const std::string& scenario_path, const std::string& out_dir, const CommandStreams& io = {}) {
  std::optional<Scenario> loaded;
  try {
    loaded.emplace(load_scenario(scenario_path));
    detail::ensure_directory(out_dir);
  } catch (const Error& e) {
    io.err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  const Scenario& scenario = *loaded;

  const std::filesystem::path dir(out_dir);
  std::ostringstream manifest;
  nlohmann::json report = nlohmann::json::array();
  int exit_code = kExitOk;
  for (const NamedRun& run : scenario.runs) {
    const auto start = std::chrono::steady_clock::now();
    int status = kExitOk;
    nlohmann::json entry{{"name", run.name}, {"spec_hash", spec_hash(scenario, run)}};
    try {
      const Trajectory traj =
          integrate(run.spec, scenario.init, scenario.schedule, detail::step_logger(io, run.name));
      detail::write_file(dir / (run.name + ".csv"), detail::csv_text(traj, scenario.output.stride));
      const ConservationReport cr = conservation_report(traj);
      const Sample& last = traj.samples.back();
      entry["samples"] = traj.samples.size();
      entry["t_final"] = last.t;
      entry["S_final"] = last.state.s();
      entry["I_final"] = last.state.i();
      entry["R_final"] = last.state.r();
      entry["max_rel_H_drift"] = cr.max_rel_H_drift;
      entry["max_segment_H_drift"] = detail::max_segment_drift(cr);
      entry["max_population_violation"] = cr.max_abs_population_violation;
      if (cr.max_constraint_norm) entry["max_constraint_norm"] = *cr.max_constraint_norm;
    } catch (const Error& e) {
      status = exit_code_for(e);
      entry["error"] = e.what();
      io.err << "error: run '" << run.name << "': " << e.what() << '\n';
      exit_code = std::max(exit_code, status);
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    entry["status"] = status;
    report.push_back(entry);
    manifest << run.name << '\t' << spec_hash(scenario, run) << '\t' << status << '\t' << format_double(wall)
             << '\n';
  }
  try {
    detail::write_file(dir / "manifest.txt", manifest.str());
    detail::write_file(dir / "report.json", nlohmann::json{{"runs", report}}.dump(2) + "\n");
  } catch (const Error& e) {
    io.err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return exit_code;
}

// ---------------------------------------------------------------------------
// check

struct CheckRow {
  std::string criterion;
  std::string subject;
  double value;
  double tolerance;
  bool pass() const noexcept { return value <= tolerance; }
};

/// Runs every scenario run, then checks conservation monitors per run and
/// pairwise I(t) agreement across runs.
inline std::vector<CheckRow> check_scenario(const Scenario& scenario, const CommandStreams& io = {}) {
  std::vector<Trajectory> runs;
  for (const NamedRun& run : scenario.runs)
    runs.push_back(integrate(run.spec, scenario.init, scenario.schedule, detail::step_logger(io, run.name)));

  std::vector<CheckRow> rows;
  const Tolerances& tol = scenario.tolerance;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    const ConservationReport cr = conservation_report(runs[k]);
    const std::string& name = scenario.runs[k].name;
    rows.push_back({"H drift", name, detail::max_segment_drift(cr), tol.h_drift});
    rows.push_back({"population", name, cr.max_abs_population_violation, tol.population});
    if (cr.max_constraint_norm) rows.push_back({"constraint", name, *cr.max_constraint_norm, tol.constraint});
  }
  const auto diff = compare_trajectories(runs);
  for (std::size_t a = 0; a < runs.size(); ++a)
    for (std::size_t b = a + 1; b < runs.size(); ++b) {
      const bool tau = runs[a].clock() == Clock::Rescaled || runs[b].clock() == Clock::Rescaled;
      rows.push_back({tau ? "equivalence (tau)" : "equivalence",
                      scenario.runs[a].name + " vs " + scenario.runs[b].name, diff[a][b],
                      tau ? tol.equivalence_tau : tol.equivalence});
    }
  return rows;
}

inline int cmd_check(const std::string& scenario_path, const CommandStreams& io = {}) {
  try {
    const Scenario scenario = load_scenario(scenario_path);
    const std::vector<CheckRow> rows = check_scenario(scenario, io);
    bool all = true;
    io.out << "criterion | subject | value | tolerance | result\n";
    for (const CheckRow& row : rows) {
      all = all && row.pass();
      io.out << row.criterion << " | " << row.subject << " | " << format_double(row.value) << " | "
             << format_double(row.tolerance) << " | " << (row.pass() ? "PASS" : "FAIL") << '\n';
    }
    io.out << (all ? "all checks passed" : "some checks failed") << '\n';
    return all ? kExitOk : kExitCheckFailed;
  } catch (const Error& e) {
    io.err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
}

// ---------------------------------------------------------------------------
// sweep

/// Parsed grid spec "key=v1,v2;key=v3" over beta, gamma, r0, dt, method.
struct SweepGrid {
  std::vector<std::pair<std::string, std::vector<std::string>>> axes;
};

inline SweepGrid parse_grid(const std::string& text) {
  static const char* const kKeys[] = {"beta", "gamma", "r0", "dt", "method"};
  SweepGrid grid;
  std::istringstream is(text);
  std::string part;
  while (std::getline(is, part, ';')) {
    if (part.empty()) continue;
    const auto eq = part.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::Config, "grid entry '" + part + "' lacks '='");
    const std::string key = part.substr(0, eq);
    if (std::find(std::begin(kKeys), std::end(kKeys), key) == std::end(kKeys))
      throw Error(ErrorKind::Config, "unknown grid key '" + key + "'");
    for (const auto& axis : grid.axes)
      if (axis.first == key) throw Error(ErrorKind::Config, "grid key '" + key + "' given twice");
    std::vector<std::string> values;
    std::istringstream vs(part.substr(eq + 1));
    std::string v;
    while (std::getline(vs, v, ','))
      if (!v.empty()) values.push_back(v);
    if (values.empty()) throw Error(ErrorKind::Config, "grid key '" + key + "' has no values");
    grid.axes.emplace_back(key, std::move(values));
  }
  if (grid.axes.empty()) throw Error(ErrorKind::Config, "empty grid");
  bool has_beta = false, has_r0 = false;
  for (const auto& axis : grid.axes) {
    has_beta = has_beta || axis.first == "beta";
    has_r0 = has_r0 || axis.first == "r0";
  }
  if (has_beta && has_r0) throw Error(ErrorKind::Config, "grid may set beta or r0, not both");
  return grid;
}

struct SweepPoint {
  RunSpec spec;
  ParamSchedule schedule;
};

namespace detail {

inline double grid_number(const std::string& key, const std::string& v) {
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size() || !std::isfinite(x))
    throw Error(ErrorKind::Config, "grid value '" + v + "' for '" + key + "' is not a number");
  return x;
}

}  // namespace detail

/// Cartesian product of the grid applied to the scenario's first run. Setting
/// beta, gamma or r0 replaces the schedule by constant rates (unset ones are
/// taken from the first schedule segment; r0 sets beta = r0 * gamma).
inline std::vector<SweepPoint> expand_grid(const Scenario& scenario, const SweepGrid& grid) {
  std::vector<SweepPoint> points;
  std::vector<std::size_t> index(grid.axes.size(), 0);
  const EpidemicParams base = scenario.schedule.segments().front().params;
  while (true) {
    RunSpec spec = scenario.runs.front().spec;
    std::optional<double> beta, gamma, ratio;
    for (std::size_t a = 0; a < grid.axes.size(); ++a) {
      const auto& [key, values] = grid.axes[a];
      const std::string& v = values[index[a]];
      if (key == "method") {
        const auto m = parse_method(v);
        if (!m) throw Error(ErrorKind::Config, "unknown method '" + v + "' in grid");
        spec.method = *m;
      } else {
        const double x = detail::grid_number(key, v);
        if (key == "beta") beta = x;
        else if (key == "gamma") gamma = x;
        else if (key == "r0") ratio = x;
        else spec.dt = x;
      }
    }
    ParamSchedule schedule = scenario.schedule;
    if (beta || gamma || ratio) {
      const double g = gamma.value_or(base.gamma());
      const double b = ratio ? *ratio * g : beta.value_or(base.beta());
      schedule = ParamSchedule::constant(EpidemicParams(b, g));
    }
    validate(spec, schedule);
    points.push_back({spec, std::move(schedule)});

    std::size_t a = 0;
    for (; a < grid.axes.size(); ++a) {
      if (++index[a] < grid.axes[a].second.size()) break;
      index[a] = 0;
    }
    if (a == grid.axes.size()) break;
  }
  return points;
}

struct SweepResult {
  int status = kExitOk;
  std::string error;
  double s_final = 0.0;
  double peak_i = 0.0;
  double peak_s = 0.0;
  double h_drift = 0.0;
};

inline int cmd_sweep(const std::string& scenario_path, const std::string& grid_text, const std::string& out_dir,
                     const CommandStreams& io = {}, unsigned threads = 0) {
  std::optional<Scenario> loaded;
  std::vector<SweepPoint> points;
  try {
    loaded.emplace(load_scenario(scenario_path));
    points = expand_grid(*loaded, parse_grid(grid_text));
    detail::ensure_directory(out_dir);
  } catch (const Error& e) {
    io.err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  const Scenario& scenario = *loaded;

  const std::filesystem::path dir(out_dir);
  std::vector<SweepResult> results(points.size());
  std::mutex log_mutex;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < points.size(); k = next++) {
      SweepResult& res = results[k];
      try {
        const Trajectory traj = integrate(points[k].spec, scenario.init, points[k].schedule);
        detail::write_file(dir / ("point_" + std::to_string(k) + ".csv"),
                           detail::csv_text(traj, scenario.output.stride));
        res.s_final = traj.samples.back().state.s();
        for (const Sample& s : traj.samples)
          if (s.state.i() > res.peak_i) {
            res.peak_i = s.state.i();
            res.peak_s = s.state.s();
          }
        res.h_drift = detail::max_segment_drift(conservation_report(traj));
      } catch (const Error& e) {
        res.status = exit_code_for(e);
        res.error = to_string(e.kind());
        std::lock_guard lock(log_mutex);
        io.err << "error: point " << k << ": " << e.what() << '\n';
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(points.size()));
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker);
  }

  std::ostringstream summary;
  summary << "point,beta,gamma,r0,dt,method,status,S_final,S_inf_oracle,peak_I,peak_S,H_drift\n";
  bool any_ok = false;
  for (std::size_t k = 0; k < points.size(); ++k) {
    const EpidemicParams& p = points[k].schedule.segments().front().params;
    const SweepResult& res = results[k];
    std::string oracle = "nan";
    if (points[k].schedule.is_constant()) {
      try {
        oracle = format_double(final_size_oracle(p, scenario.init));
      } catch (const Error&) {
      }
    }
    summary << k << ',' << format_double(p.beta()) << ',' << format_double(p.gamma()) << ','
            << format_double(r0(p)) << ',' << format_double(points[k].spec.dt) << ','
            << info(points[k].spec.method).name << ',' << (res.status == kExitOk ? "ok" : res.error) << ',';
    if (res.status == kExitOk) {
      any_ok = true;
      summary << format_double(res.s_final) << ',' << oracle << ',' << format_double(res.peak_i) << ','
              << format_double(res.peak_s) << ',' << format_double(res.h_drift) << '\n';
    } else {
      summary << "nan," << oracle << ",nan,nan,nan\n";
    }
  }
  try {
    detail::write_file(dir / "summary.csv", summary.str());
  } catch (const Error& e) {
    io.err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return any_ok ? kExitOk : kExitNumerical;
}

// ---------------------------------------------------------------------------
// plot

inline int cmd_plot(const std::string& csv_path, const std::string& out_svg, bool drift_panel = false,
                    const CommandStreams& io = {}) {
  try {
    std::ifstream in(csv_path);
    if (!in) throw Error(ErrorKind::Config, "cannot open CSV '" + csv_path + "'");
    const CsvTable table = read_csv(in);
    PlotOptions options;
    options.drift_panel = drift_panel;
    detail::write_file(out_svg, render_svg(table, options));
    return kExitOk;
  } catch (const Error& e) {
    io.err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}

}  // namespace sirmech::io
