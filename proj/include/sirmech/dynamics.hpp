#pragma once

// Right-hand sides of the three first-order model forms (ordinary time, rescaled
// time, logarithmic coordinates) and the two single-ODE second-order reductions.
// All functions take schedule-resolved rates.

#include <cmath>

#include "sirmech/core_types.hpp"

namespace sirmech {

/// (V, F) in rescaled time or (v, f) in logarithmic coordinates.
struct Forcing2 {
  double rate_of_infection;
  double force_of_infection;

  Vec2 vec() const noexcept { return {rate_of_infection, force_of_infection}; }
};

namespace detail {

inline void require_chart(const PhasePoint2& z, Chart chart, const char* op) {
  if (z.chart != chart) {
    throw Error(ErrorKind::ChartMismatch,
                std::string(op) + " expects a " + to_string(chart) + "-chart point");
  }
}

inline void require_finite(const PhasePoint2& z, const char* op) {
  if (!std::isfinite(z.q) || !std::isfinite(z.p))
    throw Error(ErrorKind::NonFiniteInput, std::string(op) + ": non-finite coordinate");
}

inline void require_positive_susceptible(double susceptible, const char* op) {
  if (!(susceptible > 0.0))
    throw Error(ErrorKind::SingularDenominator, std::string(op) + ": needs S > 0");
}

}  // namespace detail

/// Classic SIR in ordinary time. `infected_susceptible` is (I, S); returns (I', S').
inline Vec2 sir_rhs(const Vec2& infected_susceptible, const EpidemicParams& params) noexcept {
  const double infected = infected_susceptible[0];
  const double susceptible = infected_susceptible[1];
  const double incidence = params.beta() * susceptible * infected;
  return {incidence - params.gamma() * infected, -incidence};
}

/// dtau/dt = S * I.
inline double time_dilation(const Vec2& infected_susceptible) noexcept {
  return infected_susceptible[0] * infected_susceptible[1];
}

/// V = beta - gamma / S, F = -beta.
inline Forcing2 rescaled_forcing(const PhasePoint2& z, const EpidemicParams& params) {
  detail::require_chart(z, Chart::Direct, "rescaled_forcing");
  detail::require_positive_susceptible(z.p, "rescaled_forcing");
  return {params.beta() - params.gamma() / z.p, -params.beta()};
}

/// I'' = -R0 (beta - I')^2 in rescaled time.
inline double rescaled_accel(double infected_rate, const EpidemicParams& params) noexcept {
  const double gap = params.beta() - infected_rate;
  return -r0(params) * gap * gap;
}

/// v = beta exp(s) - gamma, f = -beta exp(i).
inline Forcing2 log_forcing(const PhasePoint2& z, const EpidemicParams& params) {
  detail::require_chart(z, Chart::Logarithmic, "log_forcing");
  detail::require_finite(z, "log_forcing");
  return {params.beta() * std::exp(z.p) - params.gamma(), -params.beta() * std::exp(z.q)};
}

/// i'' = -beta exp(i) (i' + gamma) in ordinary time.
inline double log_accel(double log_infected, double log_infected_rate, const EpidemicParams& params) noexcept {
  return -params.beta() * std::exp(log_infected) * (log_infected_rate + params.gamma());
}

}  // namespace sirmech
