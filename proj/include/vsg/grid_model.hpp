#pragma once

// Phasor power flow between the PCC bus and a Thevenin grid behind Z_g.
// All voltages are per-phase RMS; powers are three-phase totals.

#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Dense>

#include "vsg/error.hpp"

namespace vsg {

inline constexpr double kDefaultOmega0 = 100.0 * std::numbers::pi;  // 50 Hz

template <typename Scalar = double>
struct GridImpedance {
  Scalar r_g{0};
  Scalar x_g{0};
  Scalar l_g{0};
  Scalar omega0{Scalar(kDefaultOmega0)};

  static GridImpedance from_rx(Scalar r, Scalar x, Scalar omega0 = Scalar(kDefaultOmega0)) {
    GridImpedance z{r, x, x / omega0, omega0};
    z.validate();
    return z;
  }

  static GridImpedance from_rl(Scalar r, Scalar l, Scalar omega0 = Scalar(kDefaultOmega0)) {
    GridImpedance z{r, omega0 * l, l, omega0};
    z.validate();
    return z;
  }

  Scalar magnitude() const { return std::hypot(r_g, x_g); }
  std::complex<Scalar> complex() const { return {r_g, x_g}; }

  void validate() const {
    using std::abs;
    if (!(r_g >= 0) || !(x_g > 0) || !(omega0 > 0) || !std::isfinite(r_g) || !std::isfinite(x_g))
      throw Error(ErrorCode::InvalidInput, "grid impedance requires r_g >= 0, x_g > 0");
    if (abs(x_g - omega0 * l_g) > Scalar(1e-12) * abs(x_g))
      throw Error(ErrorCode::InvalidInput, "x_g and omega0 * l_g disagree");
  }
};

template <typename Scalar = double>
struct OperatingPoint {
  Scalar delta0{0};
  Scalar v_pcc0{0};
  Scalar v_g{0};

  void validate() const {
    if (!(v_pcc0 > 0) || !(v_g > 0))
      throw Error(ErrorCode::InvalidInput, "operating point voltages must be positive");
    if (!(std::abs(delta0) < Scalar(std::numbers::pi / 2)))
      throw Error(ErrorCode::InvalidInput, "operating angle outside |delta| < pi/2");
  }
};

template <typename Scalar = double>
struct PowerPair {
  Scalar p{0};
  Scalar q{0};
};

/// Partials of (P, Q) with respect to (delta, V_pcc).
template <typename Scalar = double>
struct JacobianPQ {
  Scalar a{0};  // dP/d(delta)
  Scalar b{0};  // dP/dV
  Scalar c{0};  // dQ/d(delta)
  Scalar d{0};  // dQ/dV

  Eigen::Matrix<Scalar, 2, 2> matrix() const {
    Eigen::Matrix<Scalar, 2, 2> m;
    m << a, b, c, d;
    return m;
  }
};

namespace detail {

template <typename Scalar>
Scalar admittance_scale(const GridImpedance<Scalar>& z) {
  const Scalar mag2 = z.r_g * z.r_g + z.x_g * z.x_g;
  if (!(mag2 > 0)) throw Error(ErrorCode::DegenerateImpedance, "r_g^2 + x_g^2 = 0");
  return Scalar(3) / mag2;
}

}  // namespace detail

template <typename Scalar>
PowerPair<Scalar> power_flow(const OperatingPoint<Scalar>& op, const GridImpedance<Scalar>& z) {
  using std::cos;
  using std::sin;
  const Scalar k = detail::admittance_scale(z);
  const Scalar v = op.v_pcc0;
  const Scalar vvg = v * op.v_g;
  const Scalar cd = cos(op.delta0);
  const Scalar sd = sin(op.delta0);
  return {k * (z.r_g * v * v - z.r_g * vvg * cd + z.x_g * vvg * sd),
          k * (z.x_g * v * v - z.x_g * vvg * cd - z.r_g * vvg * sd)};
}

template <typename Scalar>
JacobianPQ<Scalar> jacobian(const OperatingPoint<Scalar>& op, const GridImpedance<Scalar>& z) {
  using std::cos;
  using std::sin;
  const Scalar k = detail::admittance_scale(z);
  const Scalar v = op.v_pcc0;
  const Scalar vg = op.v_g;
  const Scalar cd = cos(op.delta0);
  const Scalar sd = sin(op.delta0);
  return {k * (z.r_g * v * vg * sd + z.x_g * v * vg * cd),
          k * (Scalar(2) * z.r_g * v - z.r_g * vg * cd + z.x_g * vg * sd),
          k * (z.x_g * v * vg * sd - z.r_g * v * vg * cd),
          k * (Scalar(2) * z.x_g * v - z.x_g * vg * cd - z.r_g * vg * sd)};
}

/// Short-circuit ratio convention: SCR = 3 v_g^2 / (|Z_g| S_rated).
template <typename Scalar>
GridImpedance<Scalar> scr_to_impedance(Scalar scr, Scalar xr_ratio, Scalar v_g, Scalar s_rated,
                                       Scalar omega0 = Scalar(kDefaultOmega0)) {
  using std::sqrt;
  if (!(scr > 0)) throw Error(ErrorCode::InvalidInput, "scr must be positive");
  if (!(xr_ratio > 0)) throw Error(ErrorCode::InvalidInput, "x/r ratio must be positive");
  if (!(v_g > 0) || !(s_rated > 0) || !(omega0 > 0))
    throw Error(ErrorCode::InvalidInput, "v_g, s_rated and omega0 must be positive");
  const Scalar zmag = Scalar(3) * v_g * v_g / (scr * s_rated);
  const Scalar x = zmag * xr_ratio / sqrt(Scalar(1) + xr_ratio * xr_ratio);
  return GridImpedance<Scalar>{x / xr_ratio, x, x / omega0, omega0};
}

template <typename Scalar>
Scalar impedance_to_scr(const GridImpedance<Scalar>& z, Scalar v_g, Scalar s_rated) {
  return Scalar(3) * v_g * v_g / (z.magnitude() * s_rated);
}

struct NewtonOptions {
  int max_iterations = 50;
  double residual_tolerance = 1e-9;  // relative to power_scale
  double power_scale = 5000.0;       // VA, normally the converter rating
  double v_min_pu = 0.5;
  double v_max_pu = 1.5;
};

/// Damped Newton on the power-flow residuals, starting from the flat point
/// (delta = 0, V_pcc = v_g).
template <typename Scalar>
OperatingPoint<Scalar> solve_operating_point(Scalar p_target, Scalar q_target,
                                             const GridImpedance<Scalar>& z, Scalar v_g,
                                             const NewtonOptions& opts = {}) {
  using Vec2 = Eigen::Matrix<Scalar, 2, 1>;
  if (!(v_g > 0)) throw Error(ErrorCode::InvalidInput, "v_g must be positive");
  detail::admittance_scale(z);

  const Scalar tol = Scalar(opts.residual_tolerance * opts.power_scale);
  auto residual = [&](const OperatingPoint<Scalar>& op) {
    const auto s = power_flow(op, z);
    return Vec2(s.p - p_target, s.q - q_target);
  };

  OperatingPoint<Scalar> op{Scalar(0), v_g, v_g};
  Vec2 r = residual(op);
  for (int it = 0; it < opts.max_iterations && r.norm() > tol; ++it) {
    const Eigen::Matrix<Scalar, 2, 2> jac = jacobian(op, z).matrix();
    const Vec2 step = jac.partialPivLu().solve(-r);
    if (!step.allFinite()) break;

    Scalar lambda(1);
    bool improved = false;
    for (int halving = 0; halving < 30; ++halving) {
      OperatingPoint<Scalar> trial{op.delta0 + lambda * step(0), op.v_pcc0 + lambda * step(1), v_g};
      if (trial.v_pcc0 > 0) {
        const Vec2 rt = residual(trial);
        if (rt.norm() < r.norm()) {
          op = trial;
          r = rt;
          improved = true;
          break;
        }
      }
      lambda /= Scalar(2);
    }
    if (!improved) break;
  }

  const bool in_region = std::abs(op.delta0) < Scalar(std::numbers::pi / 2) &&
                         op.v_pcc0 >= Scalar(opts.v_min_pu) * v_g &&
                         op.v_pcc0 <= Scalar(opts.v_max_pu) * v_g;
  if (!(r.norm() <= tol) || !in_region)
    throw Error(ErrorCode::InfeasibleOperatingPoint, "newton did not converge to a feasible point");
  return op;
}

}  // namespace vsg
