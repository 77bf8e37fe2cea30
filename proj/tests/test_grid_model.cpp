#include <complex>
#include <random>

#include "doctest.h"
#include "vsg/grid_model.hpp"

using namespace vsg;

namespace {

PowerPair<double> phasor_power(const OperatingPoint<double>& op, const GridImpedance<double>& z) {
  const std::complex<double> v = std::polar(op.v_pcc0, op.delta0);
  const std::complex<double> s = 3.0 * v * std::conj((v - std::complex<double>(op.v_g, 0.0)) / z.complex());
  return {s.real(), s.imag()};
}

double rel(double a, double b, double floor) { return std::abs(a - b) / std::max(std::abs(b), floor); }

}  // namespace

TEST_CASE("power flow at the flat point is zero") {
  const auto z = scr_to_impedance(2.0, 5.0, 110.0, 5000.0, kDefaultOmega0);
  const auto s = power_flow(OperatingPoint<double>{0.0, 110.0, 110.0}, z);
  CHECK(s.p == doctest::Approx(0.0));
  CHECK(s.q == doctest::Approx(0.0));
}

TEST_CASE("power flow through a resistive divider") {
  const GridImpedance<double> z{1.0, 0.0, 0.0};
  const auto s = power_flow(OperatingPoint<double>{0.0, 110.0, 100.0}, z);
  CHECK(s.p == doctest::Approx(3300.0));
  CHECK(s.q == doctest::Approx(0.0));
}

TEST_CASE("inductive power flow matches the complex phasor form") {
  const auto z = GridImpedance<double>::from_rx(0.0, 3.63);
  const OperatingPoint<double> op{0.1, 110.0, 110.0};
  const auto s = power_flow(op, z);
  const auto ref = phasor_power(op, z);
  CHECK(s.p == doctest::Approx(998.33).epsilon(1e-5));
  CHECK(s.q == doctest::Approx(49.96).epsilon(1e-4));
  CHECK(s.p == doctest::Approx(ref.p).epsilon(1e-12));
  CHECK(s.q == doctest::Approx(ref.q).epsilon(1e-12));
}

TEST_CASE("power flow agrees with the phasor form on random points") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n = 0; n < 200; ++n) {
    const auto z = GridImpedance<double>::from_rx(0.05 + 2.0 * u(rng), 0.1 + 5.0 * u(rng));
    const OperatingPoint<double> op{-0.6 + 1.2 * u(rng), 90.0 + 40.0 * u(rng), 100.0 + 20.0 * u(rng)};
    const auto s = power_flow(op, z);
    const auto ref = phasor_power(op, z);
    CHECK(std::abs(s.p - ref.p) <= 1e-9 * (1.0 + std::abs(ref.p)));
    CHECK(std::abs(s.q - ref.q) <= 1e-9 * (1.0 + std::abs(ref.q)));
  }
}

TEST_CASE("degenerate impedance is rejected") {
  const GridImpedance<double> z{0.0, 0.0, 0.0};
  CHECK_THROWS_AS(power_flow(OperatingPoint<double>{0.0, 110.0, 110.0}, z), Error);
  CHECK_THROWS_AS(jacobian(OperatingPoint<double>{0.0, 110.0, 110.0}, z), Error);
}

TEST_CASE("jacobian of a lossless line at zero angle") {
  const auto z = GridImpedance<double>::from_rx(0.0, 3.63);
  const auto j = jacobian(OperatingPoint<double>{0.0, 110.0, 110.0}, z);
  CHECK(j.a == doctest::Approx(3.0 * 110.0 * 110.0 / 3.63));
  CHECK(j.a == doctest::Approx(10000.0));
  CHECK(j.c == doctest::Approx(0.0));
}

TEST_CASE("jacobian matches central differences") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double h = 1e-6;
  for (int n = 0; n < 300; ++n) {
    const auto z = GridImpedance<double>::from_rx(0.05 + 2.0 * u(rng), 0.2 + 4.0 * u(rng));
    const OperatingPoint<double> op{-0.8 + 1.6 * u(rng), 95.0 + 30.0 * u(rng), 110.0};
    const auto j = jacobian(op, z);
    const auto pd = power_flow(OperatingPoint<double>{op.delta0 + h, op.v_pcc0, op.v_g}, z);
    const auto md = power_flow(OperatingPoint<double>{op.delta0 - h, op.v_pcc0, op.v_g}, z);
    const auto pv = power_flow(OperatingPoint<double>{op.delta0, op.v_pcc0 + h * op.v_pcc0, op.v_g}, z);
    const auto mv = power_flow(OperatingPoint<double>{op.delta0, op.v_pcc0 - h * op.v_pcc0, op.v_g}, z);
    const double dv = 2.0 * h * op.v_pcc0;
    // Absolute floors keep near-zero partials from dominating the relative error.
    CHECK(rel(j.a, (pd.p - md.p) / (2 * h), std::abs(j.a) + 1.0) < 1e-6);
    CHECK(rel(j.c, (pd.q - md.q) / (2 * h), std::abs(j.a) + 1.0) < 1e-6);
    CHECK(rel(j.b, (pv.p - mv.p) / dv, std::abs(j.d) + 1.0) < 1e-6);
    CHECK(rel(j.d, (pv.q - mv.q) / dv, std::abs(j.d) + 1.0) < 1e-6);
  }
}

TEST_CASE("scr maps to the short-circuit impedance") {
  const auto z = scr_to_impedance(2.0, 5.0, 110.0, 5000.0, kDefaultOmega0);
  CHECK(z.magnitude() == doctest::Approx(3.63).epsilon(1e-12));
  CHECK(z.x_g == doctest::Approx(3.560).epsilon(1e-3));
  CHECK(z.r_g == doctest::Approx(0.712).epsilon(1e-3));
  CHECK(z.l_g == doctest::Approx(11.33e-3).epsilon(1e-3));
  CHECK(z.x_g / z.r_g == doctest::Approx(5.0));
  // Short-circuit power 3 V^2 / |Z| over the rating recovers the SCR.
  CHECK(3.0 * 110.0 * 110.0 / z.magnitude() / 5000.0 == doctest::Approx(2.0));
  CHECK(impedance_to_scr(z, 110.0, 5000.0) == doctest::Approx(2.0));
}

TEST_CASE("scr mapping limits and errors") {
  const auto z = scr_to_impedance(2.0, 1e9, 110.0, 5000.0, kDefaultOmega0);
  CHECK(z.r_g < 1e-8);
  CHECK(z.x_g == doctest::Approx(3.63));
  CHECK_THROWS_AS(scr_to_impedance(0.0, 5.0, 110.0, 5000.0, kDefaultOmega0), Error);
  CHECK_THROWS_AS(scr_to_impedance(2.0, 0.0, 110.0, 5000.0, kDefaultOmega0), Error);
}

TEST_CASE("newton solves the null and the inverse problem") {
  const auto z = GridImpedance<double>::from_rx(0.0, 3.63);
  const auto flat = solve_operating_point(0.0, 0.0, z, 110.0);
  CHECK(flat.delta0 == doctest::Approx(0.0));
  CHECK(flat.v_pcc0 == doctest::Approx(110.0));

  const auto s = power_flow(OperatingPoint<double>{0.1, 110.0, 110.0}, z);
  const auto op = solve_operating_point(s.p, s.q, z, 110.0);
  CHECK(op.delta0 == doctest::Approx(0.1).epsilon(1e-9));
  CHECK(op.v_pcc0 == doctest::Approx(110.0).epsilon(1e-9));
}

TEST_CASE("newton round trip over the dataset range") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (double scr : {2.0, 4.5, 7.0, 9.5, 15.0, 20.0}) {
    const auto z = scr_to_impedance(scr, 5.0, 110.0, 5000.0, kDefaultOmega0);
    for (int n = 0; n < 20; ++n) {
      const double p = 5000.0 * (0.2 + 0.6 * u(rng));
      const double q = 5000.0 * 0.4 * u(rng);
      const auto op = solve_operating_point(p, q, z, 110.0);
      const auto s = power_flow(op, z);
      CHECK(std::abs(s.p - p) < 1e-5);
      CHECK(std::abs(s.q - q) < 1e-5);
    }
  }
}

TEST_CASE("infeasible transfer is reported") {
  const auto z = scr_to_impedance(2.0, 5.0, 110.0, 5000.0, kDefaultOmega0);
  CHECK_THROWS_AS(solve_operating_point(50000.0, 0.0, z, 110.0), Error);
}
