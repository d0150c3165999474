#pragma once

// Variational integrator from the extended-state-space Lagrangian
//   L(Q, Q°) = 1/2 Q . J^t . Q° - H(Q)
// with the midpoint discrete Lagrangian
//   L_d(a, b) = dt * L((a + b) / 2, (b - a) / dt).
// The step is the discrete Legendre (position-momentum) form of the discrete
// Euler-Lagrange equations:
//   p_n     = -D1 L_d(q_n, q_{n+1})    solved for q_{n+1}
//   p_{n+1} =  D2 L_d(q_n, q_{n+1})

#include "sirmech/core_types.hpp"
#include "sirmech/hamiltonian.hpp"
#include "sirmech/lagrangian.hpp"
#include "sirmech/steppers.hpp"

namespace sirmech {

class MidpointDiscreteLagrangian {
 public:
  MidpointDiscreteLagrangian(EpidemicParams params, Chart chart) : params_(params), chart_(chart) {}

  double value(const Vec2& a, const Vec2& b, double dt) const {
    return dt * lagrangian_ext(midpoint(a, b), velocity(a, b, dt), params_, chart_);
  }

  /// dL_d / da.
  Vec2 d1(const Vec2& a, const Vec2& b, double dt) const {
    const auto eval = lagrangian_ext_eval(midpoint(a, b), velocity(a, b, dt), params_, chart_);
    return 0.5 * dt * eval.coord_derivative - eval.rate_derivative;
  }

  /// dL_d / db.
  Vec2 d2(const Vec2& a, const Vec2& b, double dt) const {
    const auto eval = lagrangian_ext_eval(midpoint(a, b), velocity(a, b, dt), params_, chart_);
    return 0.5 * dt * eval.coord_derivative + eval.rate_derivative;
  }

  /// d(D1 L_d)/db, used by the Newton solve for q_{n+1}.
  Mat2 d1_jacobian_b(const Vec2& a, const Vec2& b, double dt) const {
    // D1 = 1/2 J^t b - dt/2 G(m): the skew part contributes -1/2 J.
    return -0.5 * SymplecticMatrix2::matrix() - 0.25 * dt * chart_hessian(chart_, midpoint(a, b), params_);
  }

  /// D2 L_d(prev, cur) + D1 L_d(cur, next); zero along a discrete trajectory.
  Vec2 euler_lagrange_residual(const Vec2& prev, const Vec2& cur, const Vec2& next, double dt) const {
    return d2(prev, cur, dt) + d1(cur, next, dt);
  }

  const EpidemicParams& params() const noexcept { return params_; }
  Chart chart() const noexcept { return chart_; }

 private:
  static Vec2 midpoint(const Vec2& a, const Vec2& b) { return 0.5 * (a + b); }
  static Vec2 velocity(const Vec2& a, const Vec2& b, double dt) { return (b - a) / dt; }

  EpidemicParams params_;
  Chart chart_;
};

/// Coordinates together with the discrete momentum carried between steps.
struct VariationalState {
  Vec2 coords;
  Vec2 momentum;

  /// Starts on the constraint surface p = 1/2 J q.
  static VariationalState consistent(const Vec2& coords) { return {coords, consistent_momenta(coords)}; }
};

inline VariationalState variational_midpoint_step(const MidpointDiscreteLagrangian& lagrangian,
                                                  const VariationalState& state, double dt,
                                                  const NewtonOptions& newton = {}) {
  const Vec2& q = state.coords;
  auto residual = [&](const Vec2& next) -> Vec2 { return state.momentum + lagrangian.d1(q, next, dt); };
  auto jacobian = [&](const Vec2& next) -> Mat2 { return lagrangian.d1_jacobian_b(q, next, dt); };
  const Vec2 guess = q + dt * apply_J(chart_gradient(lagrangian.chart(), q, lagrangian.params()));
  const Vec2 next = newton_solve<Vec2>(residual, jacobian, guess, newton);
  return {next, lagrangian.d2(q, next, dt)};
}

}  // namespace sirmech
