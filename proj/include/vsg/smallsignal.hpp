#pragma once

// Linearized VSG power loops and the gain-scheduling law.
//
// Active loop:   d(delta)/dt = omega - omega_g,
//                d(omega)/dt = K_ip (P_ref - P - D_p (omega - omega_0))
//   => delta / P_ref = K_ip / (s^2 + D_p K_ip s)
// Reactive loop: dV/dt = K_iq (Q_ref - Q - D_q (V - V_0))
//   => V / Q_ref = K_iq / (s + D_q K_iq)
//
// Closing either loop through the static power-flow sensitivity (A = dP/d(delta),
// D = dQ/dV) gives a second-order P response and a first-order Q response whose
// coefficients are what the scheduler pins.

#include <cmath>

#include "vsg/error.hpp"
#include "vsg/grid_model.hpp"
#include "vsg/transfer_function.hpp"

namespace vsg {

template <typename Scalar = double>
struct VsgGains {
  Scalar d_p{0};   // W s / rad
  Scalar k_ip{0};  // rad / (W s)
  Scalar d_q{0};   // var / V
  Scalar k_iq{0};  // V / (var s)

  bool valid() const { return d_p > 0 && k_ip > 0 && d_q > 0 && k_iq > 0; }

  void validate() const {
    if (!valid()) throw Error(ErrorCode::InvalidInput, "vsg gains must be strictly positive");
  }

  bool operator==(const VsgGains&) const = default;
};

/// Fixed-gain baseline from the reference 5 kVA design.
template <typename Scalar = double>
constexpr VsgGains<Scalar> baseline_gains() {
  return {Scalar(2.087e3), Scalar(0.00767), Scalar(0.687), Scalar(0.115)};
}

template <typename Scalar = double>
struct DesignTargets {
  Scalar t_s{1};               // settling-time target, s (4 / (xi omega_n) rule)
  Scalar xi{1};                // damping ratio of the P loop
  Scalar q_droop_divisor{100};  // D_q = D / divisor

  void validate() const {
    if (!(t_s > 0) || !(xi > 0) || !(q_droop_divisor > 0))
      throw Error(ErrorCode::InvalidInput, "design targets must be positive");
  }

  Scalar omega_n() const { return Scalar(4) / (xi * t_s); }
};

template <typename Scalar>
TransferFunction<Scalar> control_tf_p(const VsgGains<Scalar>& g) {
  g.validate();
  Poly<Scalar> num(1), den(3);
  num << g.k_ip;
  den << Scalar(0), g.d_p * g.k_ip, Scalar(1);
  return {num, den};
}

template <typename Scalar>
TransferFunction<Scalar> control_tf_q(const VsgGains<Scalar>& g) {
  g.validate();
  Poly<Scalar> num(1), den(2);
  num << g.k_iq;
  den << g.d_q * g.k_iq, Scalar(1);
  return {num, den};
}

namespace detail {

template <typename Scalar>
void require_positive_sensitivity(Scalar value, const char* name) {
  if (!(value > 0))
    throw Error(ErrorCode::DesignRegion, std::string(name) + " must be positive for loop design");
}

}  // namespace detail

template <typename Scalar>
TransferFunction<Scalar> open_loop_p(const VsgGains<Scalar>& g, Scalar jac_a) {
  detail::require_positive_sensitivity(jac_a, "dP/d(delta)");
  return control_tf_p(g) * jac_a;
}

template <typename Scalar>
TransferFunction<Scalar> open_loop_q(const VsgGains<Scalar>& g, Scalar jac_d) {
  detail::require_positive_sensitivity(jac_d, "dQ/dV");
  return control_tf_q(g) * jac_d;
}

template <typename Scalar>
TransferFunction<Scalar> closed_loop_p(const VsgGains<Scalar>& g, Scalar jac_a) {
  return open_loop_p(g, jac_a).feedback();
}

template <typename Scalar>
TransferFunction<Scalar> closed_loop_q(const VsgGains<Scalar>& g, Scalar jac_d) {
  return open_loop_q(g, jac_d).feedback();
}

template <typename Scalar = double>
struct SecondOrderInfo {
  Scalar omega_n;
  Scalar xi;
  Scalar ts_rule;  // 4 / (xi omega_n)
};

template <typename Scalar>
SecondOrderInfo<Scalar> closed_loop_p_info(const VsgGains<Scalar>& g, Scalar jac_a) {
  detail::require_positive_sensitivity(jac_a, "dP/d(delta)");
  g.validate();
  const Scalar wn = std::sqrt(g.k_ip * jac_a);
  const Scalar xi = g.d_p * g.k_ip / (Scalar(2) * wn);
  return {wn, xi, Scalar(4) / (xi * wn)};
}

template <typename Scalar = double>
struct FirstOrderInfo {
  Scalar y_inf;    // final value for a unit step
  Scalar e_inf;    // steady-state error for a unit step
  Scalar tau;      // time constant, s
  Scalar ts_rule;  // 4 tau
  Scalar pole;     // rad/s
};

template <typename Scalar>
FirstOrderInfo<Scalar> closed_loop_q_info(const VsgGains<Scalar>& g, Scalar jac_d) {
  detail::require_positive_sensitivity(jac_d, "dQ/dV");
  g.validate();
  const Scalar y = jac_d / (g.d_q + jac_d);
  const Scalar tau = Scalar(1) / (g.k_iq * (jac_d + g.d_q));
  return {y, g.d_q / (g.d_q + jac_d), tau, Scalar(4) * tau, -Scalar(1) / tau};
}

/// Rescheduled gains that place the P loop at (omega_n, xi) and the Q loop
/// time constant at t_s / 4 for the given sensitivities. With default targets
/// this is D_p = A/2, K_ip = 16/A, D_q = D/100, K_iq = 4/(D + D_q).
template <typename Scalar>
VsgGains<Scalar> schedule_gains(const JacobianPQ<Scalar>& jac,
                                const DesignTargets<Scalar>& targets = {}) {
  targets.validate();
  if (!(jac.a > 0) || !(jac.d > 0) || !std::isfinite(jac.a) || !std::isfinite(jac.d))
    throw Error(ErrorCode::DesignRegion, "scheduling requires dP/d(delta) > 0 and dQ/dV > 0");
  const Scalar wn = targets.omega_n();
  VsgGains<Scalar> g;
  g.k_ip = wn * wn / jac.a;
  g.d_p = Scalar(2) * targets.xi * wn / g.k_ip;
  g.d_q = jac.d / targets.q_droop_divisor;
  g.k_iq = (Scalar(4) / targets.t_s) / (jac.d + g.d_q);
  return g;
}

}  // namespace vsg
