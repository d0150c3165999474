#pragma once

// Single-step time integrators over a bound first-order system.
//
// A system exposes
//   using state_type = Eigen::Matrix<double, N, 1>;
//   state_type rhs(const state_type&) const;
//   Eigen::Matrix<double, N, N> jacobian(const state_type&) const;   // optional
// and is autonomous over the step (schedules are resolved by the caller).

#include <Eigen/Core>
#include <Eigen/LU>

#include <array>
#include <cmath>
#include <concepts>
#include <sstream>

#include "sirmech/errors.hpp"

namespace sirmech {

struct NewtonOptions {
  double tolerance = 1e-12;
  int max_iterations = 50;
};

template <typename S>
concept FirstOrderSystem = requires(const S& sys, const typename S::state_type& x) {
  { sys.rhs(x) } -> std::convertible_to<typename S::state_type>;
};

template <typename S>
concept HasJacobian = FirstOrderSystem<S> && requires(const S& sys, const typename S::state_type& x) {
  sys.jacobian(x);
};

template <typename State>
using SquareMatrix = Eigen::Matrix<double, State::RowsAtCompileTime, State::RowsAtCompileTime>;

/// Analytic Jacobian when available, otherwise central differences.
template <FirstOrderSystem S>
SquareMatrix<typename S::state_type> system_jacobian(const S& sys, const typename S::state_type& x) {
  if constexpr (HasJacobian<S>) {
    return sys.jacobian(x);
  } else {
    using State = typename S::state_type;
    SquareMatrix<State> jac;
    for (Eigen::Index k = 0; k < x.size(); ++k) {
      const double step = 1e-7 * std::max(1.0, std::abs(x[k]));
      State plus = x;
      State minus = x;
      plus[k] += step;
      minus[k] -= step;
      jac.col(k) = (sys.rhs(plus) - sys.rhs(minus)) / (2.0 * step);
    }
    return jac;
  }
}

/// Solves residual(x) = 0 by Newton's method from `guess`.
/// Convergence is declared on the infinity norm of the residual.
template <typename State, typename Residual, typename Jacobian>
State newton_solve(Residual&& residual, Jacobian&& jacobian, State guess, const NewtonOptions& options) {
  State x = guess;
  State r = residual(x);
  double norm = r.template lpNorm<Eigen::Infinity>();
  int iter = 0;
  while (!(norm <= options.tolerance) && iter < options.max_iterations && std::isfinite(norm)) {
    x -= jacobian(x).partialPivLu().solve(r).eval();
    r = residual(x);
    norm = r.template lpNorm<Eigen::Infinity>();
    ++iter;
  }
  if (!(norm <= options.tolerance)) {
    std::ostringstream os;
    os << "residual " << norm << " above tolerance " << options.tolerance << " after " << iter << " iterations";
    throw Error(ErrorKind::NewtonDivergence, os.str());
  }
  return x;
}

template <FirstOrderSystem S>
typename S::state_type explicit_euler_step(const S& sys, const typename S::state_type& x, double dt) {
  return x + dt * sys.rhs(x);
}

/// Classical four-stage Runge-Kutta.
template <FirstOrderSystem S>
typename S::state_type rk4_step(const S& sys, const typename S::state_type& x, double dt) {
  using State = typename S::state_type;
  const State k1 = sys.rhs(x);
  const State k2 = sys.rhs(State(x + 0.5 * dt * k1));
  const State k3 = sys.rhs(State(x + 0.5 * dt * k2));
  const State k4 = sys.rhs(State(x + dt * k3));
  return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// x+ = x + dt f((x + x+) / 2), Newton from the explicit Euler predictor.
template <FirstOrderSystem S>
typename S::state_type implicit_midpoint_step(const S& sys, const typename S::state_type& x, double dt,
                                              const NewtonOptions& newton = {}) {
  using State = typename S::state_type;
  const auto identity = SquareMatrix<State>::Identity();
  auto residual = [&](const State& next) -> State { return next - x - dt * sys.rhs(State(0.5 * (x + next))); };
  auto jacobian = [&](const State& next) -> SquareMatrix<State> {
    return identity - 0.5 * dt * system_jacobian(sys, State(0.5 * (x + next)));
  };
  return newton_solve<State>(residual, jacobian, State(x + dt * sys.rhs(x)), newton);
}

enum class GalerkinQuadrature { Gauss2, Midpoint };

/// Continuous Galerkin in time: linear trial function through (x, x+), constant
/// test function, so x+ - x = integral of f over the step, evaluated by quadrature.
/// With the one-point midpoint rule this is exactly the implicit midpoint rule.
template <FirstOrderSystem S>
typename S::state_type time_fe_cg1_step(const S& sys, const typename S::state_type& x, double dt,
                                        const NewtonOptions& newton = {},
                                        GalerkinQuadrature quadrature = GalerkinQuadrature::Gauss2) {
  using State = typename S::state_type;
  if (quadrature == GalerkinQuadrature::Midpoint) return implicit_midpoint_step(sys, x, dt, newton);

  const double offset = 0.5 / std::sqrt(3.0);
  const std::array<double, 2> nodes{0.5 - offset, 0.5 + offset};
  const auto identity = SquareMatrix<State>::Identity();
  auto at = [&](const State& next, double theta) -> State { return (1.0 - theta) * x + theta * next; };
  auto residual = [&](const State& next) -> State {
    return next - x - 0.5 * dt * (sys.rhs(at(next, nodes[0])) + sys.rhs(at(next, nodes[1])));
  };
  auto jacobian = [&](const State& next) -> SquareMatrix<State> {
    return identity - 0.5 * dt *
                          (nodes[0] * system_jacobian(sys, at(next, nodes[0])) +
                           nodes[1] * system_jacobian(sys, at(next, nodes[1])));
  };
  return newton_solve<State>(residual, jacobian, State(x + dt * sys.rhs(x)), newton);
}

/// Partitioned Euler on x = (q, p) with q the first half of the state:
///   q+ = q + dt f_q(q+, p)    (explicit whenever f_q does not depend on q)
///   p+ = p + dt f_p(q+, p)
/// For separable canonical flows both halves are explicit and the map is
/// the symplectic Euler method.
template <FirstOrderSystem S>
typename S::state_type symplectic_euler_step(const S& sys, const typename S::state_type& x, double dt,
                                             const NewtonOptions& newton = {}) {
  using State = typename S::state_type;
  constexpr int n = State::RowsAtCompileTime;
  static_assert(n % 2 == 0, "symplectic Euler needs an even-dimensional (q, p) state");
  constexpr int half = n / 2;
  using Half = Eigen::Matrix<double, half, 1>;
  using HalfMatrix = Eigen::Matrix<double, half, half>;

  auto join = [&](const Half& q) -> State {
    State s = x;
    s.template head<half>() = q;
    return s;
  };
  const Half q0 = x.template head<half>();
  auto residual = [&](const Half& q) -> Half { return q - q0 - dt * sys.rhs(join(q)).template head<half>(); };
  auto jacobian = [&](const Half& q) -> HalfMatrix {
    return HalfMatrix::Identity() - dt * system_jacobian(sys, join(q)).template topLeftCorner<half, half>();
  };
  const Half q_next =
      newton_solve<Half>(residual, jacobian, Half(q0 + dt * sys.rhs(x).template head<half>()), newton);
  const State mixed = join(q_next);
  State next = mixed;
  next.template tail<half>() = x.template tail<half>() + dt * sys.rhs(mixed).template tail<half>();
  return next;
}

}  // namespace sirmech
