#include <cstring>

#include "doctest.h"
#include "vsg/metrics.hpp"
#include "vsg/simulation.hpp"
#include "vsg/waveform.hpp"

using namespace vsg;

TEST_CASE("rk4 reproduces the exponential") {
  double y = 1.0;
  for (int k = 0; k < 10; ++k) y = rk4_step([](double, double s) { return -s; }, 0.1 * k, y, 0.1);
  CHECK(std::abs(y - std::exp(-1.0)) < 1e-6);
}

TEST_CASE("rk4 converges at fourth order") {
  auto solve = [](int steps) {
    Eigen::Vector2d x(1.0, 0.0);
    const double dt = 2.0 / steps;
    for (int k = 0; k < steps; ++k)
      x = rk4_step([](double, const Eigen::Vector2d& s) { return Eigen::Vector2d(s(1), -s(0)); }, k * dt, x, dt);
    return std::abs(x(0) - std::cos(2.0));
  };
  const double ratio = solve(20) / solve(40);
  CHECK(std::log2(ratio) == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("rk4 edge cases") {
  const Eigen::Vector3d x(1.0, -2.0, 3.0);
  CHECK(rk4_step([](double, const Eigen::Vector3d&) { return Eigen::Vector3d::Zero().eval(); }, 0.0, x, 0.1) == x);
  CHECK_THROWS_AS(rk4_step([](double, double) { return std::nan(""); }, 0.0, 1.0, 0.1), Error);
  CHECK_THROWS_AS(rk4_step([](double, double s) { return s; }, 0.0, 1.0, 0.0), Error);
  const VsgState s{0.1, 2.0, 3.0};
  const VsgState same = step_rk4(s, [](const VsgState&) { return VsgState{}; }, 1e-3);
  CHECK(same.delta == s.delta);
  CHECK(same.omega == s.omega);
  CHECK(same.v_cmd == s.v_cmd);
}

TEST_CASE("vsg derivatives at the balance point and under droop") {
  const VsgGains<double> g = baseline_gains();
  const Setpoints sp{2000.0, 1000.0, kDefaultOmega0, 110.0};
  const VsgState x{0.2, kDefaultOmega0, 110.0};
  const VsgState d = vsg_derivatives(x, sp, {2000.0, 1000.0}, g, kDefaultOmega0);
  CHECK(d.delta == 0.0);
  CHECK(d.omega == 0.0);
  CHECK(d.v_cmd == 0.0);

  const double p_meas = 1900.0;
  const double w = sp.omega_nom + (sp.p_ref - p_meas) / g.d_p;
  CHECK(vsg_derivatives({0.2, w, 110.0}, sp, {p_meas, 1000.0}, g, kDefaultOmega0).omega ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("synthesized waveforms") {
  const auto z = scr_to_impedance(2.0, 5.0, 110.0, 5000.0, kDefaultOmega0);
  const auto idle = synth_waveforms(OperatingPoint<double>{0.0, 110.0, 110.0}, z, 100, 200e-6, 0.0, kDefaultOmega0);
  for (double i : idle.i) CHECK(i == 0.0);
  CHECK(idle.v[0] == 0.0);
  CHECK(idle.v[25] == doctest::Approx(std::sqrt(2.0) * 110.0));
  CHECK(idle.v[25] == doctest::Approx(155.56).epsilon(1e-4));

  // RMS over one cycle equals the phasor magnitudes.
  const OperatingPoint<double> op = solve_operating_point(2000.0, 1000.0, z, 110.0);
  const auto w = synth_waveforms(op, z, 100, 200e-6, 0.0013, kDefaultOmega0);
  double vv = 0, ii = 0, vi = 0;
  for (int k = 0; k < 100; ++k) {
    vv += w.v[std::size_t(k)] * w.v[std::size_t(k)];
    ii += w.i[std::size_t(k)] * w.i[std::size_t(k)];
    vi += w.v[std::size_t(k)] * w.i[std::size_t(k)];
  }
  CHECK(std::sqrt(vv / 100) == doctest::Approx(op.v_pcc0));
  CHECK(std::sqrt(ii / 100) == doctest::Approx(std::abs(pcc_current(op, z))));
  CHECK(3.0 * vi / 100 == doctest::Approx(2000.0));
}

namespace {

SimConfig short_config(double duration) {
  SimConfig cfg;
  cfg.duration = duration;
  return cfg;
}

bool same_rows(const TimeSeries& a, const TimeSeries& b) {
  if (a.rows.size() != b.rows.size()) return false;
  return std::memcmp(a.rows.data(), b.rows.data(), a.rows.size() * sizeof(SampleRecord)) == 0;
}

}  // namespace

TEST_CASE("equilibrium persists without events") {
  const auto res = run_scenario(short_config(2.0), {});
  for (const auto& r : res.series.rows) {
    CHECK(r.p_pcc == doctest::Approx(2000.0).epsilon(1e-9));
    CHECK(r.q_pcc == doctest::Approx(1000.0 - baseline_gains().d_q * (r.v_cmd - 110.0)).epsilon(1e-9));
  }
}

TEST_CASE("simulated step follows the linear model") {
  SimConfig cfg = short_config(4.0);
  const auto z = scr_to_impedance(2.0, 5.0, 110.0, 5000.0, kDefaultOmega0);
  const auto op = solve_operating_point(cfg.p_ref0, cfg.q_ref0, z, 110.0);
  cfg.initial_gains = schedule_gains(jacobian(op, z));
  const double step = 50.0;
  const auto res = run_scenario(cfg, {{1.0, EventKind::SetPRef, cfg.p_ref0 + step, 5.0}});
  const double p0 = res.series.rows.front().p_pcc;
  double worst = 0;
  for (const auto& r : res.series.rows) {
    if (r.t < 1.0) continue;
    const double s = r.t - 1.0;
    const double linear = 1.0 - (1.0 + 4.0 * s) * std::exp(-4.0 * s);
    worst = std::max(worst, std::abs((r.p_pcc - p0) / step - linear));
  }
  CHECK(worst < 0.02);
}

TEST_CASE("scenario runs are deterministic") {
  SimConfig cfg = short_config(1.5);
  cfg.mode = ControlMode::Avsg;
  cfg.estimator = EstimatorKind::Oracle;
  cfg.noise_v_std = 0.5;
  const std::vector<ScenarioEvent> ev{{0.5, EventKind::SetScr, 8.0, 5.0}, {1.0, EventKind::SetPRef, 2500.0, 5.0}};
  const auto a = run_scenario(cfg, ev);
  const auto b = run_scenario(cfg, ev);
  CHECK(same_rows(a.series, b.series));
  CHECK(a.estimates.size() == b.estimates.size());
}

TEST_CASE("new gains follow an impedance step within two windows") {
  SimConfig cfg = short_config(0.6);
  cfg.mode = ControlMode::Avsg;
  cfg.estimator = EstimatorKind::Oracle;
  const double t_step = 0.3013;
  const auto res = run_scenario(cfg, {{t_step, EventKind::SetScr, 8.0, 5.0}});
  const auto z8 = scr_to_impedance(8.0, 5.0, 110.0, 5000.0, kDefaultOmega0);
  const GainUpdate* first = nullptr;
  for (const auto& u : res.gain_updates)
    if (u.t >= t_step && u.impedance.r_g == doctest::Approx(z8.r_g)) {
      first = &u;
      break;
    }
  REQUIRE(first != nullptr);
  CHECK(first->t - t_step <= 0.04);
  // Gate: the constant impedance before the step triggers exactly one update.
  long before = 0;
  for (const auto& u : res.gain_updates) before += u.t < t_step;
  CHECK(before == 1);
}

TEST_CASE("estimates carry a one-window delay") {
  SimConfig cfg = short_config(0.5);
  cfg.estimator = EstimatorKind::Oracle;
  const auto res = run_scenario(cfg, {});
  REQUIRE(res.estimates.size() == 25);
  for (std::size_t k = 0; k < res.estimates.size(); ++k) {
    const auto& e = res.estimates[k].estimate;
    CHECK(e.window_start == doctest::Approx(0.02 * double(k)).epsilon(1e-12));
    CHECK(e.t - e.window_start == doctest::Approx(0.02).epsilon(1e-12));
  }
}

TEST_CASE("invalid scenarios are rejected") {
  SimConfig cfg = short_config(1.0);
  CHECK_THROWS_AS(run_scenario(cfg, {{2.0, EventKind::SetPRef, 1.0, 5.0}}), Error);
  CHECK_THROWS_AS(
      run_scenario(cfg, {{0.5, EventKind::SetPRef, 1.0, 5.0}, {0.2, EventKind::SetPRef, 1.0, 5.0}}), Error);
  cfg.mode = ControlMode::Avsg;
  CHECK_THROWS_AS(run_scenario(cfg, {}), Error);
  cfg.estimator = EstimatorKind::Ann;
  CHECK_THROWS_AS(run_scenario(cfg, {}), Error);
  cfg = short_config(1.0);
  cfg.output_period = 1.7e-4;
  CHECK_THROWS_AS(run_scenario(cfg, {}), Error);
}

TEST_CASE("logged power is the power flow of the logged state") {
  SimConfig cfg = short_config(1.0);
  const auto res = run_scenario(cfg, {{0.4, EventKind::SetScr, 8.0, 5.0}, {0.6, EventKind::SetPRef, 2600.0, 5.0}});
  for (const auto& r : res.series.rows) {
    const auto z = scr_to_impedance(r.t < 0.4 ? 2.0 : 8.0, 5.0, 110.0, 5000.0, kDefaultOmega0);
    REQUIRE(z.r_g == r.r_g_true);
    const auto s = power_flow(OperatingPoint<double>{r.delta, r.v_cmd, 110.0}, z);
    CHECK(s.p == r.p_pcc);
    CHECK(s.q == r.q_pcc);
  }
}

TEST_CASE("oracle scheduling pins the closed loop at every grid") {
  SimConfig cfg = short_config(1.0);
  cfg.mode = ControlMode::Avsg;
  cfg.estimator = EstimatorKind::Oracle;
  const auto res = run_scenario(cfg, {{0.3, EventKind::SetScr, 8.0, 5.0}, {0.6, EventKind::SetScr, 20.0, 5.0}});
  REQUIRE(res.gain_updates.size() == 3);
  for (const auto& u : res.gain_updates) {
    const auto op = solve_operating_point(cfg.p_ref0, cfg.q_ref0, u.impedance, 110.0);
    const auto info = closed_loop_p_info(u.gains, jacobian(op, u.impedance).a);
    CHECK(info.omega_n == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(info.xi == doctest::Approx(1.0).epsilon(1e-12));
  }
}
