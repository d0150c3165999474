#pragma once

// Trajectory CSV: columns t,tau,S,I,R,H,H_rel_drift, 17 significant digits.
// H_rel_drift is (H - H_ref) / |H_ref| with H_ref the first H of the current
// schedule segment.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "sirmech/errors.hpp"
#include "sirmech/hamiltonian.hpp"
#include "sirmech/integrate.hpp"

namespace sirmech::io {

inline constexpr const char* kCsvHeader = "t,tau,S,I,R,H,H_rel_drift";

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

inline double sample_hamiltonian(const Trajectory& traj, const Sample& s) {
  if (s.hamiltonian) return *s.hamiltonian;
  const double t = traj.clock() == Clock::Rescaled ? 0.0 : s.t;
  return hamiltonian_direct(PhasePoint2::direct(s.state.i(), s.state.s()), traj.schedule.at(t));
}

}  // namespace detail

/// Writes every `stride`-th sample; the final sample is always written.
inline void write_trajectory_csv(std::ostream& out, const Trajectory& traj, int stride = 1) {
  if (stride < 1) throw Error(ErrorKind::Config, "stride must be positive");
  out << kCsvHeader << '\n';
  std::size_t segment = traj.schedule.size();
  double reference = 0.0;
  const std::size_t n = traj.samples.size();
  for (std::size_t k = 0; k < n; ++k) {
    const Sample& s = traj.samples[k];
    const double h = detail::sample_hamiltonian(traj, s);
    const std::size_t seg = traj.clock() == Clock::Rescaled ? 0 : traj.schedule.segment_index(s.t);
    if (seg != segment) {
      segment = seg;
      reference = h;
    }
    if (k % static_cast<std::size_t>(stride) != 0 && k + 1 != n) continue;
    out << format_double(s.t) << ',' << format_double(s.tau) << ',' << format_double(s.state.s()) << ','
        << format_double(s.state.i()) << ',' << format_double(s.state.r()) << ',' << format_double(h) << ','
        << format_double((h - reference) / std::abs(reference)) << '\n';
  }
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::size_t column(const std::string& name) const {
    for (std::size_t k = 0; k < header.size(); ++k)
      if (header[k] == name) return k;
    throw Error(ErrorKind::Config, "CSV has no column '" + name + "'");
  }
};

namespace detail {

inline std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace detail

/// Parses a numeric CSV with a header row. Requires at least one data row and
/// a consistent column count; every field must be a number.
inline CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  auto strip = [](std::string& l) {
    if (!l.empty() && l.back() == '\r') l.pop_back();
  };
  while (std::getline(in, line)) {
    ++line_no;
    strip(line);
    if (line.empty()) continue;
    table.header = detail::split_fields(line);
    break;
  }
  if (table.header.empty()) throw Error(ErrorKind::Config, "CSV is empty");
  while (std::getline(in, line)) {
    ++line_no;
    strip(line);
    if (line.empty()) continue;
    const auto fields = detail::split_fields(line);
    if (fields.size() != table.header.size())
      throw Error(ErrorKind::Config, "CSV line " + std::to_string(line_no) + ": expected " +
                                         std::to_string(table.header.size()) + " fields");
    std::vector<double> row;
    for (const std::string& f : fields) {
      char* end = nullptr;
      const double v = std::strtod(f.c_str(), &end);
      if (f.empty() || end != f.c_str() + f.size())
        throw Error(ErrorKind::Config, "CSV line " + std::to_string(line_no) + ": '" + f + "' is not a number");
      row.push_back(v);
    }
    table.rows.push_back(std::move(row));
  }
  if (table.rows.empty()) throw Error(ErrorKind::Config, "CSV has a header but no data rows");
  return table;
}

}  // namespace sirmech::io
