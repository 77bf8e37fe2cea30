#pragma once

// Quasi-static time-domain VSG simulation: the outer power loops are
// integrated with RK4 while the PCC power is re-evaluated algebraically from
// the phasor power flow at every stage. Inner voltage/current loops are ideal,
// so the PCC voltage magnitude equals the command.

#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "vsg/estimator.hpp"
#include "vsg/grid_model.hpp"
#include "vsg/ode.hpp"
#include "vsg/smallsignal.hpp"

namespace vsg {

struct VsgState {
  double delta = 0;  // rad, relative to the grid voltage
  double omega = 0;  // rad/s
  double v_cmd = 0;  // V RMS

  VsgState operator+(const VsgState& o) const { return {delta + o.delta, omega + o.omega, v_cmd + o.v_cmd}; }
  friend VsgState operator*(double k, const VsgState& s) { return {k * s.delta, k * s.omega, k * s.v_cmd}; }
  bool allFinite() const { return std::isfinite(delta) && std::isfinite(omega) && std::isfinite(v_cmd); }
};

struct Setpoints {
  double p_ref = 0;
  double q_ref = 0;
  double omega_nom = kDefaultOmega0;
  double v_nom = 110.0;
};

/// Right-hand side of the swing and voltage integrators given measured PCC power.
VsgState vsg_derivatives(const VsgState& x, const Setpoints& sp, const PowerPair<double>& meas,
                         const VsgGains<double>& gains, double omega_g);

template <typename Derivative>
VsgState step_rk4(const VsgState& x, Derivative&& f, double dt) {
  return rk4_step([&](double, const VsgState& s) { return f(s); }, 0.0, x, dt);
}

/// Steady state of the closed loop: P = P_ref - D_p (omega_g - omega_nom) and
/// Q = Q_ref - D_q (V - V_nom).
OperatingPoint<double> equilibrium_point(const Setpoints& sp, const VsgGains<double>& gains,
                                         const GridImpedance<double>& z, double v_g, double omega_g,
                                         const NewtonOptions& opts = {});

enum class EventKind { SetScr, SetPRef, SetQRef };

struct ScenarioEvent {
  double time = 0;
  EventKind kind = EventKind::SetPRef;
  double value = 0;
  double xr_ratio = 5.0;  // SetScr only

  bool operator==(const ScenarioEvent&) const = default;
};

const char* to_string(EventKind k);

enum class ControlMode { Cvsg, Avsg };
enum class EstimatorKind { None, Ann, Oracle };

const char* to_string(ControlMode m);
const char* to_string(EstimatorKind k);

struct GridConfig {
  double v_g = 110.0;
  double s_rated = 5000.0;
  double omega0 = kDefaultOmega0;
  double omega_g = kDefaultOmega0;
  double initial_scr = 2.0;
  double initial_xr = 5.0;
};

struct SimConfig {
  double dt_sim = 50e-6;
  double duration = 60.0;
  double output_period = 1e-3;
  ControlMode mode = ControlMode::Cvsg;
  EstimatorKind estimator = EstimatorKind::None;
  VsgGains<double> initial_gains = baseline_gains<double>();
  DesignTargets<double> targets{};
  double p_ref0 = 2000.0;
  double q_ref0 = 1000.0;
  double lpf_cutoff = 0.0;  // rad/s on measured P and Q; 0 disables
  EstimatorConfig estimator_cfg{};
  double gate_threshold = 0.05;
  double noise_v_std = 0.0;
  double noise_i_std = 0.0;
  std::uint64_t seed = 1;
  GridConfig grid{};

  void validate() const;
};

struct SampleRecord {
  double t, p_pcc, q_pcc, delta, omega, v_cmd;
  double r_g_true, l_g_true, r_g_est, l_g_est;
  double d_p, k_ip, d_q, k_iq;
};

struct TimeSeries {
  double dt = 0;
  std::vector<SampleRecord> rows;
};

struct EstimateLogEntry {
  EstimateRecord estimate;
  double r_g_true = 0;
  double l_g_true = 0;
  bool applied = false;
};

struct GainUpdate {
  double t = 0;
  VsgGains<double> gains;
  GridImpedance<double> impedance;  // impedance the gains were designed for
};

struct ScenarioResult {
  TimeSeries series;
  std::vector<EstimateLogEntry> estimates;
  std::vector<GainUpdate> gain_updates;
};

/// Integrates the scenario. `ann` is required when cfg.estimator is Ann.
ScenarioResult run_scenario(const SimConfig& cfg, const std::vector<ScenarioEvent>& events,
                            const ImpedanceRegressor* ann = nullptr);

/// 60 s, SCR 2 -> 8 at 20 s -> 20 at 40 s; P_ref 2 -> 2.5 kW at 10 s,
/// 2.5 -> 3 kW at 30 s; Q_ref 1 -> 1.5 kVAr at 50 s.
std::vector<ScenarioEvent> paper_scenario_events(double xr_ratio = 5.0);

}  // namespace vsg
