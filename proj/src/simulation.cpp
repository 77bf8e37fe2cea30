#include "vsg/simulation.hpp"

#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Dense>

#include "vsg/waveform.hpp"

namespace vsg {

VsgState vsg_derivatives(const VsgState& x, const Setpoints& sp, const PowerPair<double>& meas,
                         const VsgGains<double>& g, double omega_g) {
  return {x.omega - omega_g, g.k_ip * (sp.p_ref - meas.p - g.d_p * (x.omega - sp.omega_nom)),
          g.k_iq * (sp.q_ref - meas.q - g.d_q * (x.v_cmd - sp.v_nom))};
}

OperatingPoint<double> equilibrium_point(const Setpoints& sp, const VsgGains<double>& gains,
                                         const GridImpedance<double>& z, double v_g, double omega_g,
                                         const NewtonOptions& opts) {
  const double p_target = sp.p_ref - gains.d_p * (omega_g - sp.omega_nom);
  OperatingPoint<double> op{0.0, v_g, v_g};
  // Fixed point on the reactive droop; contracts with factor D_q / (dQ/dV).
  for (int it = 0; it < 200; ++it) {
    const double q_target = sp.q_ref - gains.d_q * (op.v_pcc0 - sp.v_nom);
    const OperatingPoint<double> next = solve_operating_point(p_target, q_target, z, v_g, opts);
    const bool done = std::abs(next.v_pcc0 - op.v_pcc0) <= 1e-12 * v_g && it > 0;
    op = next;
    if (done) return op;
  }
  throw Error(ErrorCode::InfeasibleOperatingPoint, "reactive droop equilibrium did not converge");
}

const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::SetScr: return "set_scr";
    case EventKind::SetPRef: return "set_p_ref";
    case EventKind::SetQRef: return "set_q_ref";
  }
  return "?";
}

const char* to_string(ControlMode m) { return m == ControlMode::Avsg ? "avsg" : "cvsg"; }

const char* to_string(EstimatorKind k) {
  switch (k) {
    case EstimatorKind::None: return "none";
    case EstimatorKind::Ann: return "ann";
    case EstimatorKind::Oracle: return "oracle";
  }
  return "?";
}

void SimConfig::validate() const {
  if (!(dt_sim > 0) || !(duration > 0) || !(output_period >= dt_sim))
    throw Error(ErrorCode::InvalidInput, "simulation step, duration and output period must be positive");
  const double stride = output_period / dt_sim;
  if (std::abs(stride - std::round(stride)) > 1e-9 * stride)
    throw Error(ErrorCode::InvalidInput, "output period must be an integer multiple of dt_sim");
  if (std::abs(estimator_cfg.dt_sim - dt_sim) > 1e-15)
    throw Error(ErrorCode::InvalidInput, "estimator dt_sim must match the simulation step");
  estimator_cfg.decimation();
  initial_gains.validate();
  targets.validate();
  if (mode == ControlMode::Avsg && estimator == EstimatorKind::None)
    throw Error(ErrorCode::InvalidInput, "adaptive mode needs an impedance estimator");
  if (!(lpf_cutoff >= 0) || !(gate_threshold >= 0) || !(noise_v_std >= 0) || !(noise_i_std >= 0))
    throw Error(ErrorCode::InvalidInput, "negative filter cutoff, gate threshold or noise level");
  if (!(grid.v_g > 0) || !(grid.s_rated > 0) || !(grid.omega0 > 0) || !(grid.omega_g > 0))
    throw Error(ErrorCode::InvalidInput, "grid constants must be positive");
}

std::vector<ScenarioEvent> paper_scenario_events(double xr) {
  return {{10.0, EventKind::SetPRef, 2500.0, xr},
          {20.0, EventKind::SetScr, 8.0, xr},
          {30.0, EventKind::SetPRef, 3000.0, xr},
          {40.0, EventKind::SetScr, 20.0, xr},
          {50.0, EventKind::SetQRef, 1500.0, xr}};
}

namespace {

using SimVector = Eigen::Matrix<double, 5, 1>;  // delta, omega, v_cmd, p_filtered, q_filtered

long step_index(double time, double dt) {
  // First step k with k * dt >= time, tolerant to representation error.
  return long(std::ceil(time / dt - 1e-6));
}

}  // namespace

ScenarioResult run_scenario(const SimConfig& cfg, const std::vector<ScenarioEvent>& events,
                            const ImpedanceRegressor* ann) {
  cfg.validate();
  for (std::size_t e = 0; e < events.size(); ++e) {
    if (!(events[e].time >= 0) || events[e].time > cfg.duration)
      throw Error(ErrorCode::InvalidInput, "event time outside the scenario");
    if (e > 0 && events[e].time < events[e - 1].time)
      throw Error(ErrorCode::InvalidInput, "events must be sorted by time");
  }
  if (cfg.estimator == EstimatorKind::Ann && ann == nullptr)
    throw Error(ErrorCode::InvalidInput, "ann estimator selected without a model");

  const auto& grid = cfg.grid;
  GridImpedance<double> z = scr_to_impedance(grid.initial_scr, grid.initial_xr, grid.v_g, grid.s_rated, grid.omega0);
  Setpoints sp{cfg.p_ref0, cfg.q_ref0, grid.omega0, grid.v_g};
  VsgGains<double> gains = cfg.initial_gains;
  NewtonOptions newton;
  newton.power_scale = grid.s_rated;

  const OperatingPoint<double> op0 = equilibrium_point(sp, gains, z, grid.v_g, grid.omega_g, newton);
  const PowerPair<double> s0 = power_flow(op0, z);
  SimVector x;
  x << op0.delta0, grid.omega_g, op0.v_pcc0, s0.p, s0.q;

  std::optional<OnlineEstimator> estimator;
  if (cfg.estimator == EstimatorKind::Ann) estimator.emplace(cfg.estimator_cfg, *ann);
  if (cfg.estimator == EstimatorKind::Oracle) estimator.emplace(cfg.estimator_cfg, oracle_regressor(&z));

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  const bool filtered = cfg.lpf_cutoff > 0;
  auto deriv = [&](double, const SimVector& s) -> SimVector {
    const OperatingPoint<double> op{s(0), s(2), grid.v_g};
    const PowerPair<double> pq = power_flow(op, z);
    const PowerPair<double> meas = filtered ? PowerPair<double>{s(3), s(4)} : pq;
    const VsgState d = vsg_derivatives({s(0), s(1), s(2)}, sp, meas, gains, grid.omega_g);
    SimVector out;
    out << d.delta, d.omega, d.v_cmd, filtered ? cfg.lpf_cutoff * (pq.p - s(3)) : 0.0,
        filtered ? cfg.lpf_cutoff * (pq.q - s(4)) : 0.0;
    return out;
  };

  ScenarioResult res;
  res.series.dt = cfg.output_period;
  const long n_steps = std::lround(cfg.duration / cfg.dt_sim);
  const long out_stride = std::lround(cfg.output_period / cfg.dt_sim);
  res.series.rows.reserve(std::size_t(n_steps / out_stride + 1));

  std::vector<long> event_steps;
  for (const auto& e : events) event_steps.push_back(step_index(e.time, cfg.dt_sim));
  std::size_t next_event = 0;

  std::optional<EstimateLogEntry> pending;  // emitted, waiting for its timestamp
  long pending_step = 0;
  std::optional<EstimateRecord> last_applied;
  double r_est = std::numeric_limits<double>::quiet_NaN();
  double l_est = std::numeric_limits<double>::quiet_NaN();

  auto apply_estimate = [&](EstimateLogEntry& entry, double t) {
    if (!entry.applied) return;
    entry.applied = false;
    if (cfg.mode != ControlMode::Avsg) return;
    try {
      const auto z_hat = GridImpedance<double>::from_rl(entry.estimate.r_g_hat, entry.estimate.l_g_hat, grid.omega0);
      const auto op = solve_operating_point(sp.p_ref, sp.q_ref, z_hat, grid.v_g, newton);
      gains = schedule_gains(jacobian(op, z_hat), cfg.targets);
      entry.applied = true;
      last_applied = entry.estimate;
      res.gain_updates.push_back({t, gains, z_hat});
    } catch (const Error&) {
      // Unusable estimate: keep the gains in force.
    }
  };

  for (long k = 0; k <= n_steps; ++k) {
    const double t = double(k) * cfg.dt_sim;

    while (next_event < events.size() && event_steps[next_event] <= k) {
      const auto& e = events[next_event++];
      switch (e.kind) {
        case EventKind::SetScr:
          z = scr_to_impedance(e.value, e.xr_ratio, grid.v_g, grid.s_rated, grid.omega0);
          break;
        case EventKind::SetPRef: sp.p_ref = e.value; break;
        case EventKind::SetQRef: sp.q_ref = e.value; break;
      }
    }

    if (pending && pending_step <= k) {
      apply_estimate(*pending, t);
      res.estimates.push_back(*pending);
      pending.reset();
    }

    if (!x.allFinite() || !(x(2) > 0))
      throw Error(ErrorCode::NumericFailure, "simulation state diverged at t=" + std::to_string(t));
    const OperatingPoint<double> op{x(0), x(2), grid.v_g};

    if (estimator) {
      if (estimator->accepts_next()) {
        WaveSample w = synth_sample(op, z, t, grid.omega_g);
        if (cfg.noise_v_std > 0) w.v += cfg.noise_v_std * gauss(rng);
        if (cfg.noise_i_std > 0) w.i += cfg.noise_i_std * gauss(rng);
        if (auto rec = estimator->push_sample(t, w.v, w.i)) {
          r_est = rec->r_g_hat;
          l_est = rec->l_g_hat;
          EstimateLogEntry entry{*rec, z.r_g, z.l_g, gate_gain_update(*rec, last_applied, cfg.gate_threshold)};
          if (pending) res.estimates.push_back(*pending);
          pending = entry;
          pending_step = step_index(rec->t, cfg.dt_sim);
        }
      } else {
        estimator->push_sample(t, 0.0, 0.0);
      }
    }

    if (k % out_stride == 0) {
      const PowerPair<double> pq = power_flow(op, z);
      res.series.rows.push_back({t, pq.p, pq.q, x(0), x(1), x(2), z.r_g, z.l_g, r_est, l_est, gains.d_p,
                                 gains.k_ip, gains.d_q, gains.k_iq});
    }

    if (k < n_steps) x = rk4_step(deriv, t, x, cfg.dt_sim);
  }
  if (pending) {
    pending->applied = false;
    res.estimates.push_back(*pending);
  }
  return res;
}

}  // namespace vsg
