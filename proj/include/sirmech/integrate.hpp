#pragma once

// Fixed-step integration driver: method/formulation dispatch, schedule
// snapping, and the tau <-> t time map.

#include <cmath>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "sirmech/core_types.hpp"
#include "sirmech/formulations.hpp"
#include "sirmech/steppers.hpp"
#include "sirmech/variational.hpp"

namespace sirmech {

enum class IntegratorMethod {
  ExplicitEuler,
  RK4,
  SymplecticEuler,
  ImplicitMidpoint,
  VariationalMidpoint,
  TimeFeCg1Gauss2,
};

struct MethodInfo {
  IntegratorMethod method;
  std::string_view name;
  int order;
  bool structure_preserving;
};

inline constexpr MethodInfo kMethods[] = {
    {IntegratorMethod::ExplicitEuler, "explicit_euler", 1, false},
    {IntegratorMethod::RK4, "rk4", 4, false},
    {IntegratorMethod::SymplecticEuler, "symplectic_euler", 1, true},
    {IntegratorMethod::ImplicitMidpoint, "implicit_midpoint", 2, true},
    {IntegratorMethod::VariationalMidpoint, "variational_midpoint", 2, true},
    {IntegratorMethod::TimeFeCg1Gauss2, "time_fe_cg1_gauss2", 2, true},
};

constexpr const MethodInfo& info(IntegratorMethod m) {
  for (const auto& entry : kMethods)
    if (entry.method == m) return entry;
  return kMethods[0];
}

constexpr std::string_view to_string(IntegratorMethod m) { return info(m).name; }
constexpr int formal_order(IntegratorMethod m) { return info(m).order; }
constexpr bool is_structure_preserving(IntegratorMethod m) { return info(m).structure_preserving; }

inline std::optional<IntegratorMethod> parse_method(std::string_view name) {
  for (const auto& entry : kMethods)
    if (entry.name == name) return entry.method;
  return std::nullopt;
}

/// `dt` is in the formulation's own clock; `t_end` is always ordinary time.
/// Rescaled-clock runs march until the reconstructed t reaches t_end.
struct RunSpec {
  IntegratorMethod method = IntegratorMethod::RK4;
  Formulation formulation = Formulation::BasicT;
  double dt = 0.01;
  double t_end = 100.0;
  NewtonOptions newton{};
  double constraint_tolerance = kDefaultConstraintTolerance;
  GalerkinQuadrature quadrature = GalerkinQuadrature::Gauss2;
};

inline constexpr double kRescaledStartThreshold = 1e-10;
inline constexpr double kRescaledStepThreshold = 1e-14;

struct Sample {
  double t;
  double tau;
  CompartmentState state;
  std::vector<double> coords;  // raw state of the formulation (4 entries for extended runs)
  std::optional<double> hamiltonian;
};

struct Trajectory {
  RunSpec spec;
  ParamSchedule schedule;
  std::vector<Sample> samples;

  Clock clock() const { return clock_of(spec.formulation); }
  Chart chart() const { return chart_of(spec.formulation); }
};

inline bool supports(IntegratorMethod method, Formulation formulation) {
  switch (method) {
    case IntegratorMethod::SymplecticEuler:
      return formulation != Formulation::BasicTWithRecovered;
    case IntegratorMethod::VariationalMidpoint:
      return formulation == Formulation::RescaledTau || formulation == Formulation::LogT ||
             formulation == Formulation::ExtendedDirect || formulation == Formulation::ExtendedLog;
    default:
      return true;
  }
}

inline void validate(const RunSpec& spec, const ParamSchedule& schedule) {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::InvalidRunSpec, msg); };
  if (!(spec.dt > 0.0) || !std::isfinite(spec.dt)) fail("dt must be positive");
  if (!(spec.t_end >= 0.0) || !std::isfinite(spec.t_end)) fail("t_end must be non-negative");
  if (!(spec.newton.tolerance > 0.0)) fail("newton_tol must be positive");
  if (spec.newton.max_iterations < 1) fail("newton_max_iter must be at least 1");
  if (!supports(spec.method, spec.formulation)) {
    fail(std::string("method ") + std::string(to_string(spec.method)) + " does not apply to formulation " +
         std::string(to_string(spec.formulation)));
  }
  if (clock_of(spec.formulation) == Clock::Rescaled && !schedule.is_constant())
    fail("rescaled-time formulations need a single-segment schedule");
}

/// Observer invoked with every stored sample (used for step-level logging).
using SampleObserver = std::function<void(const Sample&)>;

namespace detail {

/// Marches a first-order flow with one of the generic steppers.
template <typename Flow>
class FlowPropagator {
 public:
  using state_type = typename Flow::state_type;

  FlowPropagator(const RunSpec& spec, Flow flow) : spec_(spec), flow_(std::move(flow)) {}

  state_type encode(const CompartmentState& c) const { return Flow::encode(c, flow_.params); }
  Vec2 infected_susceptible(const state_type& x) const { return Flow::infected_susceptible(x, flow_.params); }
  CompartmentState decode(const state_type& x) const { return flow_.decode(x); }
  std::optional<double> hamiltonian(const state_type& x) const { return flow_.hamiltonian(x); }
  std::vector<double> coordinates(const state_type& x) const { return Flow::coordinates(x); }

  void rebind(state_type& x, const EpidemicParams& next) {
    x = Flow::rebind(x, flow_.params, next);
    flow_.params = next;
  }

  state_type step(const state_type& x, double dt) const {
    switch (spec_.method) {
      case IntegratorMethod::ExplicitEuler: return explicit_euler_step(flow_, x, dt);
      case IntegratorMethod::RK4: return rk4_step(flow_, x, dt);
      case IntegratorMethod::ImplicitMidpoint: return implicit_midpoint_step(flow_, x, dt, spec_.newton);
      case IntegratorMethod::TimeFeCg1Gauss2:
        return time_fe_cg1_step(flow_, x, dt, spec_.newton, spec_.quadrature);
      case IntegratorMethod::SymplecticEuler:
        if constexpr (state_type::RowsAtCompileTime % 2 == 0) return symplectic_euler_step(flow_, x, dt, spec_.newton);
        break;
      case IntegratorMethod::VariationalMidpoint: break;
    }
    throw Error(ErrorKind::InvalidRunSpec, "method not available for this formulation");
  }

 private:
  RunSpec spec_;
  Flow flow_;
};

/// Marches the discrete-Lagrangian map; `Extended` selects 4D output (q, p).
template <bool Extended>
class VariationalPropagator {
 public:
  using state_type = VariationalState;

  VariationalPropagator(const RunSpec& spec, const EpidemicParams& params, Chart chart)
      : spec_(spec), lagrangian_(params, chart) {}

  state_type encode(const CompartmentState& c) const {
    const Vec2 coords = chart() == Chart::Direct ? Vec2(c.i(), c.s()) : to_log(PhasePoint2::direct(c.i(), c.s())).vec();
    return VariationalState::consistent(coords);
  }
  Vec2 infected_susceptible(const state_type& x) const {
    if (chart() == Chart::Direct) return x.coords;
    return {std::exp(x.coords[0]), std::exp(x.coords[1])};
  }
  CompartmentState decode(const state_type& x) const {
    const Vec2 is = infected_susceptible(x);
    return {is[1], is[0]};
  }
  std::optional<double> hamiltonian(const state_type& x) const {
    if constexpr (Extended) {
      const ExtendedPhasePoint p{x.coords, x.momentum, chart()};
      return extended_hamiltonian(p, dirac_multiplier(x.coords, lagrangian_.params(), chart()), lagrangian_.params());
    } else {
      return chart_hamiltonian(chart(), x.coords, lagrangian_.params());
    }
  }
  std::vector<double> coordinates(const state_type& x) const {
    if constexpr (Extended) return {x.coords[0], x.coords[1], x.momentum[0], x.momentum[1]};
    else return {x.coords[0], x.coords[1]};
  }

  void rebind(state_type&, const EpidemicParams& next) { lagrangian_ = MidpointDiscreteLagrangian(next, chart()); }

  state_type step(const state_type& x, double dt) const {
    return variational_midpoint_step(lagrangian_, x, dt, spec_.newton);
  }

 private:
  Chart chart() const { return lagrangian_.chart(); }

  RunSpec spec_;
  MidpointDiscreteLagrangian lagrangian_;
};

inline std::string at_time(double t, double tau) {
  std::ostringstream os;
  os.precision(10);
  os << "at t = " << t << " (tau = " << tau << ")";
  return os.str();
}

/// dt over one rescaled step: trapezoid on dt/dtau = 1/(S I) with the
/// endpoint derivative correction, using d(S I)/dtau = beta S - gamma - beta I.
inline double ordinary_time_increment(const CompartmentState& a, const CompartmentState& b, double dtau,
                                      const EpidemicParams& params) {
  auto rate = [&](const CompartmentState& c) { return 1.0 / (c.s() * c.i()); };
  auto slope = [&](const CompartmentState& c) {
    const double si = c.s() * c.i();
    return -(params.beta() * c.s() - params.gamma() - params.beta() * c.i()) / (si * si);
  };
  return 0.5 * dtau * (rate(a) + rate(b)) - dtau * dtau / 12.0 * (slope(b) - slope(a));
}

template <typename Propagator>
Trajectory march(const RunSpec& spec, const CompartmentState& init, const ParamSchedule& schedule,
                 Propagator prop, const SampleObserver& observer) {
  Trajectory traj{spec, schedule, {}};
  auto x = prop.encode(init);

  double t = 0.0;
  double tau = 0.0;
  auto record = [&](const auto& state) {
    Sample sample{t, tau, prop.decode(state), prop.coordinates(state), prop.hamiltonian(state)};
    if (observer) observer(sample);
    traj.samples.push_back(std::move(sample));
  };

  const bool rescaled = clock_of(spec.formulation) == Clock::Rescaled;
  if (rescaled) {
    const Vec2 is = prop.infected_susceptible(x);
    if (!(is[0] * is[1] >= kRescaledStartThreshold)) {
      std::ostringstream os;
      os << "S*I = " << is[0] * is[1] << " below " << kRescaledStartThreshold
         << ": the rescaled clock is frozen; use an ordinary-time formulation";
      throw Error(ErrorKind::StepAcrossSingularity, os.str());
    }
  }
  record(x);

  try {
    if (rescaled) {
      for (std::size_t n = 1; t < spec.t_end; ++n) {
        x = prop.step(x, spec.dt);
        const double next_tau = static_cast<double>(n) * spec.dt;
        const double next_dilation = prop.infected_susceptible(x).prod();
        if (!(next_dilation >= kRescaledStepThreshold)) {
          std::ostringstream os;
          os << "S*I = " << next_dilation << " fell below " << kRescaledStepThreshold << " "
             << at_time(t, next_tau);
          throw Error(ErrorKind::StepAcrossSingularity, os.str());
        }
        t += ordinary_time_increment(traj.samples.back().state, prop.decode(x), next_tau - tau,
                                     schedule.segments().front().params);
        tau = next_tau;
        record(x);
      }
    } else {
      const auto& segments = schedule.segments();
      for (std::size_t k = 0; k < segments.size() && segments[k].start < spec.t_end; ++k) {
        const double a = segments[k].start;
        const double b = k + 1 < segments.size() ? std::min(segments[k + 1].start, spec.t_end) : spec.t_end;
        if (k > 0) {
          // Right-continuous switch: the sample at t_k reports the new rates.
          prop.rebind(x, segments[k].params);
          Sample& last = traj.samples.back();
          last.coords = prop.coordinates(x);
          last.hamiltonian = prop.hamiltonian(x);
        }
        const auto steps = static_cast<std::size_t>(std::max(1.0, std::ceil((b - a) / spec.dt * (1.0 - 1e-12))));
        const double h = (b - a) / static_cast<double>(steps);
        for (std::size_t j = 1; j <= steps; ++j) {
          const double prev_si = traj.samples.back().state.s() * traj.samples.back().state.i();
          x = prop.step(x, h);
          const double next_t = j == steps ? b : a + static_cast<double>(j) * h;
          const CompartmentState state = prop.decode(x);
          tau += 0.5 * (next_t - t) * (prev_si + state.s() * state.i());
          t = next_t;
          record(x);
        }
      }
    }
  } catch (const Error& e) {
    if (is_numerical_failure(e.kind())) throw;
    throw Error(ErrorKind::RhsDomainError, std::string(e.what()) + " " + at_time(t, tau));
  }
  return traj;
}

}  // namespace detail

/// Fixed-step march of one formulation from `init` under `schedule`.
inline Trajectory integrate(const RunSpec& spec, const CompartmentState& init, const ParamSchedule& schedule,
                            const SampleObserver& observer = {}) {
  validate(spec, schedule);
  const EpidemicParams& params = schedule.segments().front().params;

  if (spec.method == IntegratorMethod::VariationalMidpoint) {
    const Chart chart = chart_of(spec.formulation);
    const bool extended =
        spec.formulation == Formulation::ExtendedDirect || spec.formulation == Formulation::ExtendedLog;
    if (extended)
      return detail::march(spec, init, schedule, detail::VariationalPropagator<true>(spec, params, chart), observer);
    return detail::march(spec, init, schedule, detail::VariationalPropagator<false>(spec, params, chart), observer);
  }

  auto run = [&](auto flow) {
    using Flow = decltype(flow);
    return detail::march(spec, init, schedule, detail::FlowPropagator<Flow>(spec, flow), observer);
  };
  switch (spec.formulation) {
    case Formulation::BasicT: return run(flows::Basic{params});
    case Formulation::BasicTWithRecovered: return run(flows::BasicWithRecovered{params});
    case Formulation::RescaledTau: return run(flows::Rescaled{params});
    case Formulation::LogT: return run(flows::Logarithmic{params});
    case Formulation::SingleDirectTau: return run(flows::SingleDirect{params});
    case Formulation::SingleLogT: return run(flows::SingleLog{params});
    case Formulation::ExtendedDirect:
      return run(flows::Extended<Chart::Direct>{params, spec.constraint_tolerance});
    case Formulation::ExtendedLog:
      return run(flows::Extended<Chart::Logarithmic>{params, spec.constraint_tolerance});
    case Formulation::ExtendedDirectReconstructed: return run(flows::ExtendedReconstructed<Chart::Direct>{params});
    case Formulation::ExtendedLogReconstructed: return run(flows::ExtendedReconstructed<Chart::Logarithmic>{params});
  }
  throw Error(ErrorKind::InvalidRunSpec, "unknown formulation");
}

/// Rebuilds the ordinary-time column of a rescaled-time trajectory by
/// trapezoidal quadrature of dt = dtau / (S I) on the stored samples. Uses no
/// model information, so it is second order; the march itself uses the
/// corrected rule of ordinary_time_increment.
inline Trajectory reconstruct_ordinary_time(Trajectory traj) {
  if (traj.samples.empty()) return traj;
  traj.samples.front().t = 0.0;
  for (std::size_t n = 1; n < traj.samples.size(); ++n) {
    const Sample& prev = traj.samples[n - 1];
    Sample& cur = traj.samples[n];
    const double prev_si = prev.state.s() * prev.state.i();
    const double cur_si = cur.state.s() * cur.state.i();
    if (!(prev_si > 0.0) || !(cur_si > 0.0)) {
      throw Error(ErrorKind::StepAcrossSingularity, "S*I vanishes " + detail::at_time(prev.t, prev.tau));
    }
    cur.t = prev.t + 0.5 * (cur.tau - prev.tau) * (1.0 / prev_si + 1.0 / cur_si);
  }
  return traj;
}

}  // namespace sirmech
