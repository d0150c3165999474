#pragma once

// Conservation monitors, closed-form oracles that follow from conservation of
// H(I, S) = beta (I + S) - gamma ln S, finite-difference gradient checks, and
// cross-formulation comparison of I(t).
//
// Oracles. Along any epidemic H is constant, so evaluating it at t = 0 and at
// a later state (I, S) gives
//     I = I0 + S0 - S + (1 / R0) ln(S / S0).
// Peak: I° = beta - gamma / S vanishes at S = 1 / R0, hence
//     I_max = I0 + S0 - (1 / R0) (1 + ln(R0 S0)).
// Final size: as t -> inf, I -> 0, hence S_inf solves
//     ln(S_inf / S0) = R0 (S_inf - S0 - I0),   S_inf in (0, 1 / R0).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "sirmech/core_types.hpp"
#include "sirmech/hamiltonian.hpp"
#include "sirmech/integrate.hpp"

namespace sirmech {

struct ConservationReport {
  double max_rel_H_drift = 0.0;
  double max_abs_population_violation = 0.0;
  std::optional<double> max_constraint_norm;  // extended runs only
  std::vector<double> per_segment_drift;      // one entry per schedule segment reached
};

namespace detail {

inline double hamiltonian_of(const Sample& sample) {
  if (!sample.hamiltonian) throw Error(ErrorKind::MissingDiagnostic, "trajectory has no H column");
  return *sample.hamiltonian;
}

}  // namespace detail

/// max_n |H_n - H_0| / |H_0| over the whole trajectory.
inline double hamiltonian_drift(const Trajectory& traj) {
  if (traj.samples.empty()) return 0.0;
  const double reference = detail::hamiltonian_of(traj.samples.front());
  double drift = 0.0;
  for (const Sample& s : traj.samples)
    drift = std::max(drift, std::abs(detail::hamiltonian_of(s) - reference) / std::abs(reference));
  return drift;
}

/// Relative H drift within each constant-rate segment, measured against the
/// first sample of the segment (switches are right-continuous).
inline std::vector<double> segment_hamiltonian_drift(const Trajectory& traj) {
  std::vector<double> drifts;
  if (traj.samples.empty()) return drifts;
  std::size_t current = traj.schedule.size();
  double reference = 0.0;
  for (const Sample& s : traj.samples) {
    const std::size_t k = traj.clock() == Clock::Rescaled ? 0 : traj.schedule.segment_index(s.t);
    const double h = detail::hamiltonian_of(s);
    if (k != current) {
      current = k;
      reference = h;
      drifts.push_back(0.0);
    }
    drifts.back() = std::max(drifts.back(), std::abs(h - reference) / std::abs(reference));
  }
  return drifts;
}

/// max_n |S_n + I_n + R_n - 1|.
inline double population_conservation(const Trajectory& traj) noexcept {
  double worst = 0.0;
  for (const Sample& s : traj.samples)
    worst = std::max(worst, std::abs(s.state.s() + s.state.i() + s.state.r() - 1.0));
  return worst;
}

/// max_n |Q_n + 2 J P_n|_inf for trajectories carrying four coordinates.
inline double constraint_drift(const Trajectory& traj) {
  double worst = 0.0;
  for (const Sample& s : traj.samples) {
    if (s.coords.size() != 4) throw Error(ErrorKind::MissingDiagnostic, "trajectory has no extended (Q, P) points");
    const ExtendedPhasePoint point{{s.coords[0], s.coords[1]}, {s.coords[2], s.coords[3]}, traj.chart()};
    worst = std::max(worst, dirac_constraint(point).lpNorm<Eigen::Infinity>());
  }
  return worst;
}

inline bool is_extended(Formulation f) {
  return f == Formulation::ExtendedDirect || f == Formulation::ExtendedLog ||
         f == Formulation::ExtendedDirectReconstructed || f == Formulation::ExtendedLogReconstructed;
}

inline ConservationReport conservation_report(const Trajectory& traj) {
  ConservationReport report;
  report.max_rel_H_drift = hamiltonian_drift(traj);
  report.max_abs_population_violation = population_conservation(traj);
  if (is_extended(traj.spec.formulation)) report.max_constraint_norm = constraint_drift(traj);
  report.per_segment_drift = segment_hamiltonian_drift(traj);
  return report;
}

// ---------------------------------------------------------------------------
// Finite-difference gradient checks.

inline constexpr double kGradientFdStep = 1e-6;
/// Components smaller than this are judged by absolute error.
inline constexpr double kVanishingGradient = 1e-6;

struct GradientCheck {
  double max_rel_error = 0.0;          // over components with |analytic| >= kVanishingGradient
  double max_abs_error_vanishing = 0.0;  // over components with |analytic| < kVanishingGradient

  bool passes(double rel_tol, double abs_tol) const noexcept {
    return max_rel_error <= rel_tol && max_abs_error_vanishing <= abs_tol;
  }
};

inline void merge(GradientCheck& into, const GradientCheck& other) noexcept {
  into.max_rel_error = std::max(into.max_rel_error, other.max_rel_error);
  into.max_abs_error_vanishing = std::max(into.max_abs_error_vanishing, other.max_abs_error_vanishing);
}

/// Compares the analytic gradient at `z` against central differences of H.
inline GradientCheck fd_gradient_check_at(const PhasePoint2& z, const EpidemicParams& params) {
  auto energy = [&](const Vec2& v) { return chart_hamiltonian(z.chart, v, params); };
  const Vec2 base = z.vec();
  const Vec2 analytic = chart_gradient(z.chart, base, params);
  GradientCheck check;
  for (int k = 0; k < 2; ++k) {
    Vec2 plus = base;
    Vec2 minus = base;
    plus[k] += kGradientFdStep;
    minus[k] -= kGradientFdStep;
    const double fd = (energy(plus) - energy(minus)) / (2.0 * kGradientFdStep);
    const double err = std::abs(fd - analytic[k]);
    if (std::abs(analytic[k]) >= kVanishingGradient)
      check.max_rel_error = std::max(check.max_rel_error, err / std::abs(analytic[k]));
    else
      check.max_abs_error_vanishing = std::max(check.max_abs_error_vanishing, err);
  }
  return check;
}

/// Samples `n_points` valid states (S in [0.05, 0.999], I in (0, 1 - S)) and
/// checks the chart gradient at each.
inline GradientCheck fd_gradient_check(Chart chart, const EpidemicParams& params, int n_points, std::uint64_t seed) {
  if (n_points < 1) throw Error(ErrorKind::InvalidRunSpec, "n_points must be at least 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  GradientCheck total;
  for (int n = 0; n < n_points; ++n) {
    const double s = 0.05 + 0.949 * unit(rng);
    const double i = (1.0 - s) * (0.001 + 0.998 * unit(rng));
    const PhasePoint2 direct = PhasePoint2::direct(i, s);
    merge(total, fd_gradient_check_at(chart == Chart::Direct ? direct : to_log(direct), params));
  }
  return total;
}

// ---------------------------------------------------------------------------
// Oracles.

struct PeakInfection {
  double infected_max;
  double susceptible_at_peak;
};

/// Largest I and the S at which it occurs. R0 S0 = 1 means the peak is at t = 0.
inline PeakInfection peak_infection_oracle(const EpidemicParams& params, const CompartmentState& init) {
  const double threshold = r0(params) * init.s();
  if (threshold < 1.0) throw Error(ErrorKind::NoEpidemic, "R0 * S0 < 1: infections decline from the start");
  return {init.i() + init.s() - (1.0 + std::log(threshold)) / r0(params), 1.0 / r0(params)};
}

/// Residual of the final-size relation ln(S / S0) - R0 (S - S0 - I0).
inline double final_size_residual(double susceptible, const EpidemicParams& params, const CompartmentState& init) {
  return std::log(susceptible / init.s()) - r0(params) * (susceptible - init.s() - init.i());
}

/// Root of the final-size relation in (0, 1 / R0), by bisection down to
/// adjacent doubles.
inline double final_size_oracle(const EpidemicParams& params, const CompartmentState& init) {
  if (!(r0(params) * init.s() > 1.0)) throw Error(ErrorKind::NoEpidemic, "R0 * S0 <= 1: no epidemic occurs");
  double lo = std::numeric_limits<double>::min();
  double hi = 1.0 / r0(params);
  // residual(lo) < 0 and residual(hi) >= 0.
  for (int iter = 0; iter < 2000; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (final_size_residual(mid, params, init) < 0.0) lo = mid;
    else hi = mid;
  }
  return std::abs(final_size_residual(lo, params, init)) < std::abs(final_size_residual(hi, params, init)) ? lo : hi;
}

// ---------------------------------------------------------------------------
// Cross-formulation comparison.

/// Linear interpolation of I at time t (t within the sample range).
inline double infected_at(const Trajectory& traj, double t) {
  const auto& s = traj.samples;
  auto it = std::lower_bound(s.begin(), s.end(), t, [](const Sample& a, double v) { return a.t < v; });
  if (it == s.begin()) return it->state.i();
  if (it == s.end()) return s.back().state.i();
  const Sample& right = *it;
  const Sample& left = *(it - 1);
  const double w = (t - left.t) / (right.t - left.t);
  return (1.0 - w) * left.state.i() + w * right.state.i();
}

/// sup |I_a - I_b| on the sample times of the coarser run (fewer samples),
/// restricted to the common time range; the finer run is interpolated.
inline double sup_difference_infected(const Trajectory& a, const Trajectory& b) {
  if (a.samples.empty() || b.samples.empty()) return 0.0;
  const Trajectory& grid = a.samples.size() <= b.samples.size() ? a : b;
  const Trajectory& other = &grid == &a ? b : a;
  const double lo = std::max(a.samples.front().t, b.samples.front().t);
  const double hi = std::min(a.samples.back().t, b.samples.back().t);
  double worst = 0.0;
  for (const Sample& s : grid.samples) {
    if (s.t < lo || s.t > hi) continue;
    worst = std::max(worst, std::abs(s.state.i() - infected_at(other, s.t)));
  }
  return worst;
}

struct FormulationComparison {
  std::vector<Trajectory> runs;
  std::vector<std::vector<double>> sup_diff;  // symmetric, zero diagonal
};

inline std::vector<std::vector<double>> compare_trajectories(const std::vector<Trajectory>& runs) {
  const std::size_t n = runs.size();
  std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) m[a][b] = m[b][a] = sup_difference_infected(runs[a], runs[b]);
  return m;
}

/// Runs every spec and compares I(t) pairwise. Rescaled-clock runs carry the
/// reconstructed ordinary time; log-chart runs are mapped back by exp.
inline FormulationComparison compare_formulations(const std::vector<RunSpec>& specs, const CompartmentState& init,
                                                  const ParamSchedule& schedule) {
  if (specs.size() < 2) throw Error(ErrorKind::InvalidRunSpec, "comparison needs at least two runs");
  FormulationComparison out;
  for (const RunSpec& spec : specs) out.runs.push_back(integrate(spec, init, schedule));
  out.sup_diff = compare_trajectories(out.runs);
  return out;
}

}  // namespace sirmech
