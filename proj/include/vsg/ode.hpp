#pragma once

#include <cmath>

#include "vsg/error.hpp"

namespace vsg {

namespace detail {

template <typename State>
bool all_finite(const State& x) {
  if constexpr (requires { x.allFinite(); }) {
    return x.allFinite();
  } else {
    return std::isfinite(x);
  }
}

}  // namespace detail

/// One classical fourth-order Runge-Kutta step of dx/dt = f(t, x).
/// State is anything closed under + and scalar *, e.g. an Eigen vector or a double.
template <typename State, typename Derivative, typename Scalar>
State rk4_step(Derivative&& f, Scalar t, const State& x, Scalar dt) {
  if (!(dt > 0)) throw Error(ErrorCode::InvalidInput, "rk4 step requires dt > 0");
  const Scalar half = dt / Scalar(2);
  const State k1 = f(t, x);
  const State k2 = f(t + half, State(x + half * k1));
  const State k3 = f(t + half, State(x + half * k2));
  const State k4 = f(t + dt, State(x + dt * k3));
  if (!detail::all_finite(k1) || !detail::all_finite(k2) || !detail::all_finite(k3) ||
      !detail::all_finite(k4))
    throw Error(ErrorCode::NumericFailure, "non-finite derivative in rk4 step");
  return State(x + (dt / Scalar(6)) * (k1 + Scalar(2) * k2 + Scalar(2) * k3 + k4));
}

}  // namespace vsg
