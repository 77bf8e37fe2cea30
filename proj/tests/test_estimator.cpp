#include "doctest.h"
#include "vsg/estimator.hpp"

using namespace vsg;

namespace {

ImpedanceRegressor constant_regressor(double r, double l, int* calls = nullptr) {
  return [=](std::span<const double> v, std::span<const double> i) {
    if (calls) ++*calls;
    REQUIRE(v.size() == 100);
    REQUIRE(i.size() == 100);
    return std::array<double, 2>{r, l};
  };
}

}  // namespace

TEST_CASE("decimation ratio") {
  EstimatorConfig cfg;
  CHECK(cfg.decimation() == 4);
  cfg.dt_sim = 10e-6;
  CHECK(cfg.decimation() == 20);
  cfg.dt_sim = 30e-6;
  CHECK_THROWS_AS(cfg.decimation(), Error);
  CHECK(EstimatorConfig{}.window_span() == doctest::Approx(0.02));
}

TEST_CASE("buffer emits exactly on full windows") {
  SampleBuffer b(100);
  for (int k = 0; k < 99; ++k) CHECK_FALSE(b.push(k, 1.0, 2.0));
  CHECK(b.push(99, 1.0, 2.0));
  CHECK(b.full());
  CHECK(b.first_time() == 0.0);
  CHECK_FALSE(b.push(100, 1.0, 2.0));
  CHECK(b.size() == 1);
  CHECK(b.first_time() == 100.0);
  CHECK_THROWS_AS(SampleBuffer(0), Error);
}

TEST_CASE("one estimate per hundred accepted samples") {
  int calls = 0;
  OnlineEstimator est(EstimatorConfig{}, constant_regressor(0.7, 0.011, &calls));
  long records = 0;
  const double dt = 50e-6;
  for (long k = 0; k < 4 * 1050; ++k) {
    CHECK(est.accepts_next() == (k % 4 == 0));
    if (auto r = est.push_sample(double(k) * dt, 1.0, 1.0)) {
      ++records;
      CHECK(r->t == r->window_end);
      CHECK(r->window_end - r->window_start == doctest::Approx(0.02).epsilon(1e-12));
      CHECK(r->window_start == doctest::Approx(0.02 * double(records - 1)).epsilon(1e-12));
      CHECK(r->r_g_hat == 0.7);
    }
  }
  CHECK(est.accepted_samples() == 1050);
  CHECK(records == est.accepted_samples() / 100);
  CHECK(est.estimates() == records);
  CHECK(calls == records);
}

TEST_CASE("non-finite samples restart the window") {
  OnlineEstimator est(EstimatorConfig{}, constant_regressor(1.0, 1.0));
  for (int k = 0; k < 4 * 60; ++k) est.push_sample(k * 50e-6, 1.0, 1.0);
  est.push_sample(240 * 50e-6, std::nan(""), 1.0);
  int emitted_at = -1;
  for (int k = 1; k <= 4 * 100 && emitted_at < 0; ++k)
    if (est.push_sample((240 + k) * 50e-6, 1.0, 1.0)) emitted_at = k;
  // The bad sample is the 61st accepted one; a full window of 100 fresh
  // samples is needed afterwards, the last of them on push 400.
  CHECK(emitted_at == 400);
}

TEST_CASE("ann regressor evaluates a zero window") {
  ann::MlpModel m = ann::initialize(200, 8, 2, 0.5, 3);
  ann::Normalizer n = ann::Normalizer::identity(200, 2);
  n.input_mean.setConstant(0.25);
  n.target_mean << 0.5, 0.01;
  n.target_std << 0.2, 0.003;
  const auto reg = ann_regressor(m, n);
  const std::vector<double> zeros(100, 0.0);
  const auto out = reg(zeros, zeros);
  const Eigen::VectorXd expect =
      ann::zscore_inverse(m.forward(Eigen::VectorXd::Constant(200, -0.25)), n.target_mean, n.target_std);
  CHECK(out[0] == expect(0));
  CHECK(out[1] == expect(1));
  CHECK_THROWS_AS(ann_regressor(ann::initialize(10, 8, 2, 0.5, 1), n), Error);
}

TEST_CASE("hysteresis gate") {
  const EstimateRecord a{0.02, 0.7, 0.011, 0.0, 0.02};
  CHECK(gate_gain_update(a, std::nullopt));
  CHECK_FALSE(gate_gain_update(a, a));
  EstimateRecord b = a;
  b.r_g_hat *= 1.04;
  CHECK_FALSE(gate_gain_update(b, a));
  b.l_g_hat *= 0.94;
  CHECK(gate_gain_update(b, a));

  std::optional<EstimateRecord> applied;
  int updates = 0;
  for (int k = 0; k < 10; ++k)
    if (gate_gain_update(a, applied)) {
      applied = a;
      ++updates;
    }
  CHECK(updates == 1);
}
