#pragma once

#include <cmath>
#include <sstream>

#include "sirmech/core_types.hpp"
#include "sirmech/dynamics.hpp"

namespace sirmech {

inline constexpr double kDefaultConstraintTolerance = 1e-9;

// ---------------------------------------------------------------------------
// Direct chart, Z = (I, S), flow in rescaled time.

/// H(Z) = beta (I + S) - gamma ln S.
inline double hamiltonian_direct(const PhasePoint2& z, const EpidemicParams& params) {
  detail::require_chart(z, Chart::Direct, "hamiltonian_direct");
  detail::require_positive_susceptible(z.p, "hamiltonian_direct");
  return params.beta() * (z.q + z.p) - params.gamma() * std::log(z.p);
}

/// G(Z) = (beta, beta - gamma / S).
inline Vec2 grad_hamiltonian_direct(const PhasePoint2& z, const EpidemicParams& params) {
  detail::require_chart(z, Chart::Direct, "grad_hamiltonian_direct");
  detail::require_positive_susceptible(z.p, "grad_hamiltonian_direct");
  return {params.beta(), params.beta() - params.gamma() / z.p};
}

inline Mat2 hessian_direct(const PhasePoint2& z, const EpidemicParams& params) {
  detail::require_chart(z, Chart::Direct, "hessian_direct");
  detail::require_positive_susceptible(z.p, "hessian_direct");
  Mat2 h;
  h << 0.0, 0.0, 0.0, params.gamma() / (z.p * z.p);
  return h;
}

/// Z° = J G(Z).
inline Vec2 hamilton_rhs_direct(const PhasePoint2& z, const EpidemicParams& params) {
  return apply_J(grad_hamiltonian_direct(z, params));
}

/// Z' = [S I] J G(Z): the same flow expressed in ordinary time.
inline Vec2 hamilton_rhs_ordinary(const PhasePoint2& z, const EpidemicParams& params) {
  return (z.q * z.p) * hamilton_rhs_direct(z, params);
}

// ---------------------------------------------------------------------------
// Logarithmic chart, z = (i, s), flow in ordinary time.

/// h(z) = beta (exp i + exp s) - gamma s.
inline double hamiltonian_log(const PhasePoint2& z, const EpidemicParams& params) {
  detail::require_chart(z, Chart::Logarithmic, "hamiltonian_log");
  detail::require_finite(z, "hamiltonian_log");
  return params.beta() * (std::exp(z.q) + std::exp(z.p)) - params.gamma() * z.p;
}

/// g(z) = (beta exp i, beta exp s - gamma).
inline Vec2 grad_hamiltonian_log(const PhasePoint2& z, const EpidemicParams& params) {
  detail::require_chart(z, Chart::Logarithmic, "grad_hamiltonian_log");
  detail::require_finite(z, "grad_hamiltonian_log");
  return {params.beta() * std::exp(z.q), params.beta() * std::exp(z.p) - params.gamma()};
}

inline Mat2 hessian_log(const PhasePoint2& z, const EpidemicParams& params) {
  detail::require_chart(z, Chart::Logarithmic, "hessian_log");
  detail::require_finite(z, "hessian_log");
  Mat2 h;
  h << params.beta() * std::exp(z.q), 0.0, 0.0, params.beta() * std::exp(z.p);
  return h;
}

/// z' = J g(z).
inline Vec2 hamilton_rhs_log(const PhasePoint2& z, const EpidemicParams& params) {
  return apply_J(grad_hamiltonian_log(z, params));
}

// ---------------------------------------------------------------------------
// Chart-dispatched helpers used by the extended formulations.

inline double chart_hamiltonian(Chart chart, const Vec2& coords, const EpidemicParams& params) {
  return chart == Chart::Direct ? hamiltonian_direct(PhasePoint2::direct(coords[0], coords[1]), params)
                                : hamiltonian_log(PhasePoint2::logarithmic(coords[0], coords[1]), params);
}

inline Vec2 chart_gradient(Chart chart, const Vec2& coords, const EpidemicParams& params) {
  return chart == Chart::Direct
             ? grad_hamiltonian_direct(PhasePoint2::direct(coords[0], coords[1]), params)
             : grad_hamiltonian_log(PhasePoint2::logarithmic(coords[0], coords[1]), params);
}

inline Mat2 chart_hessian(Chart chart, const Vec2& coords, const EpidemicParams& params) {
  return chart == Chart::Direct ? hessian_direct(PhasePoint2::direct(coords[0], coords[1]), params)
                                : hessian_log(PhasePoint2::logarithmic(coords[0], coords[1]), params);
}

// ---------------------------------------------------------------------------
// Extended phase space with the Dirac constraint C(Q, P) = Q + 2 J P.

inline Vec2 dirac_constraint(const ExtendedPhasePoint& point) noexcept {
  return point.coords + 2.0 * apply_J(point.momenta);
}

/// P = 1/2 J Q, the momenta on the constraint surface.
inline Vec2 consistent_momenta(const Vec2& coords) noexcept { return 0.5 * apply_J(coords); }

inline ExtendedPhasePoint consistent_point(const Vec2& coords, Chart chart) noexcept {
  return {coords, consistent_momenta(coords), chart};
}

/// Lambda = -1/2 G(Q), from the consistency condition on C.
inline Vec2 dirac_multiplier(const Vec2& coords, const EpidemicParams& params, Chart chart) {
  return -0.5 * chart_gradient(chart, coords, params);
}

/// H(Q) + lambda . C(Q, P).
inline double extended_hamiltonian(const ExtendedPhasePoint& point, const Vec2& multiplier,
                                   const EpidemicParams& params) {
  return chart_hamiltonian(point.chart, point.coords, params) + multiplier.dot(dirac_constraint(point));
}

struct ExtendedRate {
  Vec2 coords_rate;
  Vec2 momenta_rate;
};

/// Q° = J G(Q), P° = -1/2 G(Q). Rejects points off the constraint surface.
inline ExtendedRate extended_rhs(const ExtendedPhasePoint& point, const EpidemicParams& params,
                                 double tolerance = kDefaultConstraintTolerance) {
  const double violation = dirac_constraint(point).lpNorm<Eigen::Infinity>();
  if (!(violation <= tolerance)) {
    std::ostringstream os;
    os << "|C|_inf = " << violation << " exceeds " << tolerance;
    throw Error(ErrorKind::ConstraintViolation, os.str());
  }
  const Vec2 gradient = chart_gradient(point.chart, point.coords, params);
  return {apply_J(gradient), -0.5 * gradient};
}

}  // namespace sirmech
