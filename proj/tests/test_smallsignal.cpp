#include <random>

#include "doctest.h"
#include "vsg/metrics.hpp"
#include "vsg/smallsignal.hpp"

using namespace vsg;

TEST_CASE("control transfer functions by substitution") {
  const auto p = control_tf_p(VsgGains<double>{2.0, 1.0, 1.0, 1.0});
  CHECK(p.num().size() == 1);
  CHECK(p.num()(0) == 1.0);
  REQUIRE(p.den().size() == 3);
  CHECK(p.den()(0) == 0.0);
  CHECK(p.den()(1) == 2.0);
  CHECK(p.den()(2) == 1.0);
  CHECK(std::isinf(p.dc_gain()));

  const auto q = control_tf_q(VsgGains<double>{1.0, 1.0, 1.0, 4.0});
  CHECK(q.num()(0) == 4.0);
  CHECK(q.den()(0) == 4.0);
  CHECK(q.den()(1) == 1.0);
}

TEST_CASE("baseline gains") {
  const auto g = baseline_gains();
  const auto p = control_tf_p(g);
  CHECK(p.den()(1) == doctest::Approx(16.00729));
  const auto q = control_tf_q(g);
  CHECK(-q.den()(0) / q.den()(1) == doctest::Approx(-0.0790).epsilon(1e-3));
  const double pole = -(g.d_q + 68.7) * g.k_iq;
  CHECK(closed_loop_q_info(g, 68.7).pole == doctest::Approx(pole));
  CHECK(pole == doctest::Approx(-7.98).epsilon(1e-3));
}

TEST_CASE("scheduling law") {
  const auto g = schedule_gains(JacobianPQ<double>{10000.0, 0.0, 0.0, 100.0});
  CHECK(g.d_p == doctest::Approx(5000.0));
  CHECK(g.k_ip == doctest::Approx(0.0016));
  CHECK(g.d_q == doctest::Approx(1.0));
  CHECK(g.k_iq == doctest::Approx(4.0 / 101.0));
  CHECK_THROWS_AS(schedule_gains(JacobianPQ<double>{-1.0, 0.0, 0.0, 100.0}), Error);
  CHECK_THROWS_AS(schedule_gains(JacobianPQ<double>{1.0, 0.0, 0.0, 0.0}), Error);
}

TEST_CASE("scheduled closed loops are invariant to the sensitivities") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-3.0, 6.0);
  for (int n = 0; n < 100; ++n) {
    const double a = std::pow(10.0, u(rng));
    const double d = std::pow(10.0, u(rng));
    const auto g = schedule_gains(JacobianPQ<double>{a, 0.0, 0.0, d});
    const auto cl = closed_loop_p(g, a);
    const double lead = cl.den()(2);
    CHECK(cl.den()(1) / lead == doctest::Approx(8.0).epsilon(1e-12));
    CHECK(cl.den()(0) / lead == doctest::Approx(16.0).epsilon(1e-12));
    const auto info = closed_loop_p_info(g, a);
    CHECK(info.omega_n == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(info.xi == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(closed_loop_q_info(g, d).pole == doctest::Approx(-4.0).epsilon(1e-12));
  }
}

TEST_CASE("reactive loop steady-state error") {
  const auto g = schedule_gains(JacobianPQ<double>{10000.0, 0.0, 0.0, 100.0});
  const auto info = closed_loop_q_info(g, 100.0);
  CHECK(info.y_inf == doctest::Approx(100.0 / 101.0));
  CHECK(info.e_inf * 100.0 == doctest::Approx(0.990099).epsilon(1e-6));
  CHECK(info.tau == doctest::Approx(0.25));
  CHECK(info.ts_rule == doctest::Approx(1.0));
  CHECK(open_loop_q(g, 100.0).dc_gain() == doctest::Approx(100.0));
  CHECK_THROWS_AS(open_loop_q(g, 0.0), Error);
  CHECK_THROWS_AS(open_loop_p(g, -1.0), Error);
}

TEST_CASE("bode of elementary responses") {
  const TransferFunction<double> integrator(Poly<double>::Constant(1, 1.0), Poly<double>{{0.0, 1.0}});
  const auto fr = bode(integrator, {0.5, 1.0, 2.0});
  CHECK(fr.points[1].mag_db == doctest::Approx(0.0));
  CHECK(fr.points[1].phase_deg == doctest::Approx(-90.0));
  CHECK(phase_margin(bode(integrator, default_omega_grid<double>())) == doctest::Approx(90.0));

  const TransferFunction<double> double_int(Poly<double>::Constant(1, 1.0), Poly<double>{{0.0, 0.0, 1.0}});
  CHECK(phase_margin(bode(double_int, default_omega_grid<double>())) == doctest::Approx(0.0).epsilon(1e-9));

  const auto k = TransferFunction<double>::gain(3.0);
  for (const auto& p : bode(k, {0.1, 1.0, 10.0}).points) {
    CHECK(p.mag_db == doctest::Approx(20.0 * std::log10(3.0)));
    CHECK(p.phase_deg == doctest::Approx(0.0));
  }

  const TransferFunction<double> osc(Poly<double>::Constant(1, 1.0), Poly<double>{{1.0, 0.0, 1.0}});
  CHECK_THROWS_AS(bode(osc, {1.0}), Error);
  CHECK_THROWS_AS(gain_crossover(bode(TransferFunction<double>::gain(0.1), {1.0, 2.0})), Error);
}

TEST_CASE("closed loop at the natural frequency") {
  const auto g = schedule_gains(JacobianPQ<double>{10000.0, 0.0, 0.0, 100.0});
  const auto fr = bode(closed_loop_p(g, 10000.0), {4.0});
  CHECK(fr.points[0].mag_db == doctest::Approx(20.0 * std::log10(0.5)));
  CHECK(fr.points[0].mag_db == doctest::Approx(-6.02).epsilon(1e-3));
}

TEST_CASE("scheduled open loops share one bode curve") {
  const auto omega = default_omega_grid<double>();
  auto curve = [&](double scr) {
    const auto z = scr_to_impedance(scr, 5.0, 110.0, 5000.0, kDefaultOmega0);
    NewtonOptions opts;
    const auto op = solve_operating_point(2000.0, 1000.0, z, 110.0, opts);
    const auto jac = jacobian(op, z);
    return bode(open_loop_p(schedule_gains(jac), jac.a), omega);
  };
  const auto weak = curve(2.0);
  const auto stiff = curve(20.0);
  for (std::size_t i = 0; i < omega.size(); ++i) {
    CHECK(weak.points[i].mag_db == doctest::Approx(stiff.points[i].mag_db).epsilon(1e-9));
    CHECK(weak.points[i].phase_deg == doctest::Approx(stiff.points[i].phase_deg).epsilon(1e-9));
  }
  CHECK(std::abs(phase_margin(weak) - phase_margin(stiff)) < 0.1);
}

TEST_CASE("fixed gains lose phase margin as the grid stiffens") {
  double previous = 1e9;
  for (double scr : {2.0, 8.0, 20.0}) {
    const auto z = scr_to_impedance(scr, 5.0, 110.0, 5000.0, kDefaultOmega0);
    const auto jac = jacobian(solve_operating_point(2000.0, 1000.0, z, 110.0), z);
    const double pm = phase_margin(bode(open_loop_p(baseline_gains(), jac.a), default_omega_grid<double>()));
    CHECK(pm < previous);
    previous = pm;
  }
}

TEST_CASE("linear step responses") {
  const double a = 7321.0;
  const auto g = schedule_gains(JacobianPQ<double>{a, 0.0, 0.0, 100.0});
  const auto p = step_response(closed_loop_p(g, a), 4.0, 1e-4);
  const auto ts = settling_time(p.t, p.y, 0.0, 0.0, 1.0, 0.02);
  REQUIRE(ts);
  CHECK(*ts == doctest::Approx(1.458).epsilon(0.01 / 1.458));
  const auto ts_rule = settling_time(p.t, p.y, 0.0, 0.0, 1.0, rule_band_p());
  REQUIRE(ts_rule);
  CHECK(*ts_rule == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(percent_overshoot(p.t, p.y, 0.0, 0.0, 1.0) == doctest::Approx(0.0));

  const auto q = step_response(closed_loop_q(g, 100.0), 4.0, 1e-4);
  CHECK((1.0 - q.y.back()) * 100.0 == doctest::Approx(0.990099).epsilon(1e-5));
}

TEST_CASE("step response integrates a first-order lag") {
  const TransferFunction<double> lag(Poly<double>::Constant(1, 4.0), Poly<double>{{4.0, 1.0}});
  const auto r = step_response(lag, 1.0, 1e-3);
  for (std::size_t k = 0; k < r.t.size(); k += 100) CHECK(r.y[k] == doctest::Approx(1.0 - std::exp(-4.0 * r.t[k])));
}
