#pragma once

// Lagrangians in minimal and extended state space for both charts, the
// Legendre maps between rates and momenta, and Euler-Lagrange residuals.

#include <Eigen/LU>

#include <cmath>
#include <sstream>

#include "sirmech/core_types.hpp"
#include "sirmech/dynamics.hpp"
#include "sirmech/hamiltonian.hpp"

namespace sirmech {

template <typename T>
struct LagrangianEval {
  double value;
  T rate_derivative;   // dL / d(rate)
  T coord_derivative;  // dL / d(coordinate)
};

namespace detail {

inline void require_direct_legendre_domain(double infected_rate, const EpidemicParams& params) {
  if (!(infected_rate < params.beta())) {
    std::ostringstream os;
    os << "direct-chart rate I° = " << infected_rate << " must be below beta = " << params.beta();
    throw Error(ErrorKind::OutsideLegendreDomain, os.str());
  }
}

inline void require_log_legendre_domain(double log_infected_rate, const EpidemicParams& params) {
  if (!(log_infected_rate > -params.gamma())) {
    std::ostringstream os;
    os << "log-chart rate i' = " << log_infected_rate << " must exceed -gamma = " << -params.gamma();
    throw Error(ErrorKind::OutsideLegendreDomain, os.str());
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Direct chart, minimal state space Q = I.

/// S(I°) = gamma / (beta - I°), the inverse of I° = beta - gamma / S.
inline double susceptible_of_rate(double infected_rate, const EpidemicParams& params) {
  detail::require_direct_legendre_domain(infected_rate, params);
  return params.gamma() / (params.beta() - infected_rate);
}

/// L(I, I°) = -beta I - gamma + gamma ln(gamma / (beta - I°)).
inline double lagrangian_min_direct(double infected, double infected_rate, const EpidemicParams& params) {
  detail::require_direct_legendre_domain(infected_rate, params);
  return -params.beta() * infected - params.gamma() +
         params.gamma() * std::log(params.gamma() / (params.beta() - infected_rate));
}

inline LagrangianEval<double> lagrangian_min_direct_eval(double infected, double infected_rate,
                                                         const EpidemicParams& params) {
  return {lagrangian_min_direct(infected, infected_rate, params), susceptible_of_rate(infected_rate, params),
          -params.beta()};
}

/// I°° + R0 (beta - I°)^2.
inline double euler_lagrange_residual_direct(double /*infected*/, double infected_rate, double infected_accel,
                                             const EpidemicParams& params) noexcept {
  const double gap = params.beta() - infected_rate;
  return infected_accel + r0(params) * gap * gap;
}

// ---------------------------------------------------------------------------
// Logarithmic chart, minimal state space q = i.

/// s(i') = ln((i' + gamma) / beta), the inverse of i' = beta exp(s) - gamma.
inline double log_susceptible_of_rate(double log_infected_rate, const EpidemicParams& params) {
  detail::require_log_legendre_domain(log_infected_rate, params);
  return std::log((log_infected_rate + params.gamma()) / params.beta());
}

/// l(i, i') = -beta exp(i) - (i' + gamma)(1 - ln((i' + gamma) / beta)).
inline double lagrangian_min_log(double log_infected, double log_infected_rate, const EpidemicParams& params) {
  detail::require_log_legendre_domain(log_infected_rate, params);
  const double shifted = log_infected_rate + params.gamma();
  return -params.beta() * std::exp(log_infected) - shifted * (1.0 - std::log(shifted / params.beta()));
}

/// Rate derivative is the analytic dl/di' = ln((i' + gamma) / beta), i.e. the conjugate s.
inline LagrangianEval<double> lagrangian_min_log_eval(double log_infected, double log_infected_rate,
                                                      const EpidemicParams& params) {
  return {lagrangian_min_log(log_infected, log_infected_rate, params),
          log_susceptible_of_rate(log_infected_rate, params), -params.beta() * std::exp(log_infected)};
}

/// i'' + beta exp(i) (i' + gamma).
inline double euler_lagrange_residual_log(double log_infected, double log_infected_rate, double log_infected_accel,
                                          const EpidemicParams& params) noexcept {
  return log_infected_accel + params.beta() * std::exp(log_infected) * (log_infected_rate + params.gamma());
}

/// |rate - dH/dp| at the given momentum (S or s); zero for a Legendre-consistent pair.
inline double legendre_check_minimal(const PhasePoint2& state, double rate, const EpidemicParams& params) {
  const Vec2 gradient = state.chart == Chart::Direct ? grad_hamiltonian_direct(state, params)
                                                     : grad_hamiltonian_log(state, params);
  return std::abs(rate - gradient[1]);
}

// ---------------------------------------------------------------------------
// Extended state space Q = (I, S) or q = (i, s): L = 1/2 Q . J^t . Q° - H(Q).

/// 1/2 Q . J^t . rate, which expands to 1/2 (Q2 rate1 - Q1 rate2).
inline double skew_form(const Vec2& coords, const Vec2& rate) noexcept {
  return 0.5 * (coords[1] * rate[0] - coords[0] * rate[1]);
}

inline double lagrangian_ext(const Vec2& coords, const Vec2& rate, const EpidemicParams& params, Chart chart) {
  return skew_form(coords, rate) - chart_hamiltonian(chart, coords, params);
}

/// dL/dQ° = 1/2 J Q (independent of the rate: the Lagrangian is degenerate),
/// dL/dQ = -1/2 J Q° - G(Q).
inline LagrangianEval<Vec2> lagrangian_ext_eval(const Vec2& coords, const Vec2& rate, const EpidemicParams& params,
                                                Chart chart) {
  const Vec2 gradient = chart_gradient(chart, coords, params);
  return {skew_form(coords, rate) - chart_hamiltonian(chart, coords, params), 0.5 * apply_J(coords),
          -0.5 * apply_J(rate) - gradient};
}

/// d/dtime(dL/dQ°) - dL/dQ for the extended Lagrangian; zero along solutions.
inline Vec2 extended_euler_lagrange_residual(const Vec2& coords, const Vec2& rate, const EpidemicParams& params,
                                             Chart chart) {
  const auto eval = lagrangian_ext_eval(coords, rate, params, chart);
  return 0.5 * apply_J(rate) - eval.coord_derivative;
}

/// Solves the assembled extended Euler-Lagrange system (linear in the rate) for Q°.
inline Vec2 solve_extended_euler_lagrange(const Vec2& coords, const EpidemicParams& params, Chart chart) {
  // Residual r(rate) = J rate + G(Q) is affine: A rate = -G with A = J.
  const Mat2 system = SymplecticMatrix2::matrix();
  const Vec2 gradient = chart_gradient(chart, coords, params);
  return system.partialPivLu().solve(-gradient);
}

}  // namespace sirmech
