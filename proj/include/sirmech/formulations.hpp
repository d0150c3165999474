#pragma once

// Each formulation binds rates to a first-order system the steppers can march,
// plus the maps between its raw state and compartment fractions.

#include <Eigen/Core>

#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sirmech/core_types.hpp"
#include "sirmech/dynamics.hpp"
#include "sirmech/hamiltonian.hpp"
#include "sirmech/lagrangian.hpp"

namespace sirmech {

enum class Formulation {
  BasicT,                       // (I, S) in ordinary time
  BasicTWithRecovered,          // (I, S, R) in ordinary time, R integrated alongside
  RescaledTau,                  // Z = (I, S), Z° = J G(Z)
  LogT,                         // z = (i, s), z' = J g(z)
  SingleDirectTau,              // (I, I°), I°° = -R0 (beta - I°)^2
  SingleLogT,                   // (i, i'), i'' = -beta exp(i) (i' + gamma)
  ExtendedDirect,               // (Q, P) in rescaled time, all four propagated
  ExtendedLog,                  // (q, p) in ordinary time, all four propagated
  ExtendedDirectReconstructed,  // Q propagated, P = 1/2 J Q rebuilt
  ExtendedLogReconstructed,
};

enum class Clock { Ordinary, Rescaled };

struct FormulationInfo {
  Formulation formulation;
  std::string_view name;
  Clock clock;
  Chart chart;
};

inline constexpr FormulationInfo kFormulations[] = {
    {Formulation::BasicT, "basic_t", Clock::Ordinary, Chart::Direct},
    {Formulation::BasicTWithRecovered, "basic_t_r", Clock::Ordinary, Chart::Direct},
    {Formulation::RescaledTau, "rescaled_tau", Clock::Rescaled, Chart::Direct},
    {Formulation::LogT, "log_t", Clock::Ordinary, Chart::Logarithmic},
    {Formulation::SingleDirectTau, "single_direct_tau", Clock::Rescaled, Chart::Direct},
    {Formulation::SingleLogT, "single_log_t", Clock::Ordinary, Chart::Logarithmic},
    {Formulation::ExtendedDirect, "extended_direct", Clock::Rescaled, Chart::Direct},
    {Formulation::ExtendedLog, "extended_log", Clock::Ordinary, Chart::Logarithmic},
    {Formulation::ExtendedDirectReconstructed, "extended_direct_reconstructed", Clock::Rescaled, Chart::Direct},
    {Formulation::ExtendedLogReconstructed, "extended_log_reconstructed", Clock::Ordinary, Chart::Logarithmic},
};

constexpr const FormulationInfo& info(Formulation f) {
  for (const auto& entry : kFormulations)
    if (entry.formulation == f) return entry;
  return kFormulations[0];
}

constexpr std::string_view to_string(Formulation f) { return info(f).name; }
constexpr Clock clock_of(Formulation f) { return info(f).clock; }
constexpr Chart chart_of(Formulation f) { return info(f).chart; }

inline std::optional<Formulation> parse_formulation(std::string_view name) {
  for (const auto& entry : kFormulations)
    if (entry.name == name) return entry.formulation;
  return std::nullopt;
}

namespace flows {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;

/// Common surface: rhs, jacobian, encode, infected_susceptible (unvalidated),
/// hamiltonian, coordinates, and rebind (re-express the state when rates switch).
struct Basic {
  using state_type = Vec2;
  EpidemicParams params;

  state_type rhs(const state_type& x) const { return sir_rhs(x, params); }
  Mat2 jacobian(const state_type& x) const {
    const double b = params.beta(), g = params.gamma();
    Mat2 jac;
    jac << b * x[1] - g, b * x[0], -b * x[1], -b * x[0];
    return jac;
  }
  static state_type encode(const CompartmentState& c, const EpidemicParams&) { return {c.i(), c.s()}; }
  static Vec2 infected_susceptible(const state_type& x, const EpidemicParams&) { return x; }
  CompartmentState decode(const state_type& x) const { return {x[1], x[0]}; }
  std::optional<double> hamiltonian(const state_type& x) const {
    if (!(x[1] > 0.0)) return std::nullopt;
    return hamiltonian_direct(PhasePoint2::direct(x[0], x[1]), params);
  }
  static std::vector<double> coordinates(const state_type& x) { return {x[0], x[1]}; }
  static state_type rebind(const state_type& x, const EpidemicParams&, const EpidemicParams&) { return x; }
};

struct BasicWithRecovered {
  using state_type = Vec3;
  EpidemicParams params;

  state_type rhs(const state_type& x) const {
    const Vec2 is = sir_rhs(x.head<2>(), params);
    return {is[0], is[1], params.gamma() * x[0]};
  }
  Mat3 jacobian(const state_type& x) const {
    const double b = params.beta(), g = params.gamma();
    Mat3 jac;
    jac << b * x[1] - g, b * x[0], 0.0, -b * x[1], -b * x[0], 0.0, g, 0.0, 0.0;
    return jac;
  }
  static state_type encode(const CompartmentState& c, const EpidemicParams&) { return {c.i(), c.s(), c.r()}; }
  static Vec2 infected_susceptible(const state_type& x, const EpidemicParams&) { return x.head<2>(); }
  CompartmentState decode(const state_type& x) const { return {x[1], x[0], x[2]}; }
  std::optional<double> hamiltonian(const state_type& x) const {
    if (!(x[1] > 0.0)) return std::nullopt;
    return hamiltonian_direct(PhasePoint2::direct(x[0], x[1]), params);
  }
  static std::vector<double> coordinates(const state_type& x) { return {x[0], x[1], x[2]}; }
  static state_type rebind(const state_type& x, const EpidemicParams&, const EpidemicParams&) { return x; }
};

struct Rescaled {
  using state_type = Vec2;
  EpidemicParams params;

  state_type rhs(const state_type& x) const { return hamilton_rhs_direct(PhasePoint2::direct(x[0], x[1]), params); }
  Mat2 jacobian(const state_type& x) const {
    return SymplecticMatrix2::matrix() * hessian_direct(PhasePoint2::direct(x[0], x[1]), params);
  }
  static state_type encode(const CompartmentState& c, const EpidemicParams&) { return {c.i(), c.s()}; }
  static Vec2 infected_susceptible(const state_type& x, const EpidemicParams&) { return x; }
  CompartmentState decode(const state_type& x) const { return {x[1], x[0]}; }
  std::optional<double> hamiltonian(const state_type& x) const {
    return hamiltonian_direct(PhasePoint2::direct(x[0], x[1]), params);
  }
  static std::vector<double> coordinates(const state_type& x) { return {x[0], x[1]}; }
  static state_type rebind(const state_type& x, const EpidemicParams&, const EpidemicParams&) { return x; }
};

struct Logarithmic {
  using state_type = Vec2;
  EpidemicParams params;

  state_type rhs(const state_type& x) const {
    return hamilton_rhs_log(PhasePoint2::logarithmic(x[0], x[1]), params);
  }
  Mat2 jacobian(const state_type& x) const {
    return SymplecticMatrix2::matrix() * hessian_log(PhasePoint2::logarithmic(x[0], x[1]), params);
  }
  static state_type encode(const CompartmentState& c, const EpidemicParams&) {
    return to_log(PhasePoint2::direct(c.i(), c.s())).vec();
  }
  static Vec2 infected_susceptible(const state_type& x, const EpidemicParams&) {
    return {std::exp(x[0]), std::exp(x[1])};
  }
  CompartmentState decode(const state_type& x) const {
    const PhasePoint2 direct = from_log(PhasePoint2::logarithmic(x[0], x[1]));
    return {direct.p, direct.q};
  }
  std::optional<double> hamiltonian(const state_type& x) const {
    return hamiltonian_log(PhasePoint2::logarithmic(x[0], x[1]), params);
  }
  static std::vector<double> coordinates(const state_type& x) { return {x[0], x[1]}; }
  static state_type rebind(const state_type& x, const EpidemicParams&, const EpidemicParams&) { return x; }
};

/// State (I, I°). S is recovered through the Legendre map S = gamma / (beta - I°).
struct SingleDirect {
  using state_type = Vec2;
  EpidemicParams params;

  state_type rhs(const state_type& x) const { return {x[1], rescaled_accel(x[1], params)}; }
  Mat2 jacobian(const state_type& x) const {
    Mat2 jac;
    jac << 0.0, 1.0, 0.0, 2.0 * r0(params) * (params.beta() - x[1]);
    return jac;
  }
  static state_type encode(const CompartmentState& c, const EpidemicParams& params) {
    const Vec2 rate = hamilton_rhs_direct(PhasePoint2::direct(c.i(), c.s()), params);
    return {c.i(), rate[0]};
  }
  static Vec2 infected_susceptible(const state_type& x, const EpidemicParams& params) {
    return {x[0], params.gamma() / (params.beta() - x[1])};
  }
  CompartmentState decode(const state_type& x) const { return {susceptible_of_rate(x[1], params), x[0]}; }
  std::optional<double> hamiltonian(const state_type& x) const {
    return hamiltonian_direct(PhasePoint2::direct(x[0], susceptible_of_rate(x[1], params)), params);
  }
  static std::vector<double> coordinates(const state_type& x) { return {x[0], x[1]}; }
  static state_type rebind(const state_type& x, const EpidemicParams& from, const EpidemicParams& to) {
    const double susceptible = susceptible_of_rate(x[1], from);
    return {x[0], to.beta() - to.gamma() / susceptible};
  }
};

/// State (i, i'). s is recovered through the Legendre map s = ln((i' + gamma) / beta).
struct SingleLog {
  using state_type = Vec2;
  EpidemicParams params;

  state_type rhs(const state_type& x) const { return {x[1], log_accel(x[0], x[1], params)}; }
  Mat2 jacobian(const state_type& x) const {
    const double e = params.beta() * std::exp(x[0]);
    Mat2 jac;
    jac << 0.0, 1.0, -e * (x[1] + params.gamma()), -e;
    return jac;
  }
  static state_type encode(const CompartmentState& c, const EpidemicParams& params) {
    const PhasePoint2 z = to_log(PhasePoint2::direct(c.i(), c.s()));
    return {z.q, log_forcing(z, params).rate_of_infection};
  }
  static Vec2 infected_susceptible(const state_type& x, const EpidemicParams& params) {
    return {std::exp(x[0]), (x[1] + params.gamma()) / params.beta()};
  }
  CompartmentState decode(const state_type& x) const {
    return {std::exp(log_susceptible_of_rate(x[1], params)), std::exp(x[0])};
  }
  std::optional<double> hamiltonian(const state_type& x) const {
    return hamiltonian_log(PhasePoint2::logarithmic(x[0], log_susceptible_of_rate(x[1], params)), params);
  }
  static std::vector<double> coordinates(const state_type& x) { return {x[0], x[1]}; }
  static state_type rebind(const state_type& x, const EpidemicParams& from, const EpidemicParams& to) {
    const double log_susceptible = log_susceptible_of_rate(x[1], from);
    return {x[0], to.beta() * std::exp(log_susceptible) - to.gamma()};
  }
};

/// Four-dimensional (Q, P) with the Dirac-constrained momenta propagated.
template <Chart C>
struct Extended {
  using state_type = Vec4;
  EpidemicParams params;
  double constraint_tolerance = kDefaultConstraintTolerance;

  static ExtendedPhasePoint point(const state_type& x) { return {x.head<2>(), x.tail<2>(), C}; }

  state_type rhs(const state_type& x) const {
    const ExtendedRate rate = extended_rhs(point(x), params, constraint_tolerance);
    state_type out;
    out << rate.coords_rate, rate.momenta_rate;
    return out;
  }
  Mat4 jacobian(const state_type& x) const {
    const Mat2 hess = chart_hessian(C, x.head<2>(), params);
    Mat4 jac = Mat4::Zero();
    jac.topLeftCorner<2, 2>() = SymplecticMatrix2::matrix() * hess;
    jac.bottomLeftCorner<2, 2>() = -0.5 * hess;
    return jac;
  }
  static state_type encode(const CompartmentState& c, const EpidemicParams&) {
    const Vec2 coords = C == Chart::Direct ? Vec2(c.i(), c.s()) : to_log(PhasePoint2::direct(c.i(), c.s())).vec();
    state_type out;
    out << coords, consistent_momenta(coords);
    return out;
  }
  static Vec2 infected_susceptible(const state_type& x, const EpidemicParams&) {
    if constexpr (C == Chart::Direct) return x.head<2>();
    else return {std::exp(x[0]), std::exp(x[1])};
  }
  CompartmentState decode(const state_type& x) const {
    const Vec2 is = infected_susceptible(x, params);
    return {is[1], is[0]};
  }
  std::optional<double> hamiltonian(const state_type& x) const {
    const ExtendedPhasePoint p = point(x);
    return extended_hamiltonian(p, dirac_multiplier(p.coords, params, C), params);
  }
  static std::vector<double> coordinates(const state_type& x) { return {x[0], x[1], x[2], x[3]}; }
  static state_type rebind(const state_type& x, const EpidemicParams&, const EpidemicParams&) { return x; }
};

/// Q alone is propagated (its equation is closed); P = 1/2 J Q is rebuilt for output.
template <Chart C>
struct ExtendedReconstructed {
  using state_type = Vec2;
  EpidemicParams params;

  state_type rhs(const state_type& x) const { return apply_J(chart_gradient(C, x, params)); }
  Mat2 jacobian(const state_type& x) const {
    return SymplecticMatrix2::matrix() * chart_hessian(C, x, params);
  }
  static state_type encode(const CompartmentState& c, const EpidemicParams&) {
    return C == Chart::Direct ? Vec2(c.i(), c.s()) : to_log(PhasePoint2::direct(c.i(), c.s())).vec();
  }
  static Vec2 infected_susceptible(const state_type& x, const EpidemicParams&) {
    if constexpr (C == Chart::Direct) return x;
    else return {std::exp(x[0]), std::exp(x[1])};
  }
  CompartmentState decode(const state_type& x) const {
    const Vec2 is = infected_susceptible(x, params);
    return {is[1], is[0]};
  }
  std::optional<double> hamiltonian(const state_type& x) const {
    const ExtendedPhasePoint p = consistent_point(x, C);
    return extended_hamiltonian(p, dirac_multiplier(x, params, C), params);
  }
  static std::vector<double> coordinates(const state_type& x) {
    const Vec2 momenta = consistent_momenta(x);
    return {x[0], x[1], momenta[0], momenta[1]};
  }
  static state_type rebind(const state_type& x, const EpidemicParams&, const EpidemicParams&) { return x; }
};

}  // namespace flows
}  // namespace sirmech
