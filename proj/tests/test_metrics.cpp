#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "vsg/config.hpp"
#include "vsg/metrics.hpp"
#include "vsg/pipeline.hpp"
#include "vsg/report.hpp"

using namespace vsg;
namespace fs = std::filesystem;

namespace {

struct Trace {
  std::vector<double> t, y;
};

template <typename F>
Trace sample(F f, double t_end, double dt) {
  Trace tr;
  for (long k = 0; double(k) * dt <= t_end + 1e-12; ++k) {
    tr.t.push_back(double(k) * dt);
    tr.y.push_back(f(double(k) * dt));
  }
  return tr;
}

std::string temp_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "vsg_tests" / name;
  fs::create_directories(dir);
  return dir.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("settling of a first-order response") {
  const Trace tr = sample([](double t) { return 1.0 - std::exp(-4.0 * t); }, 4.0, 1e-4);
  const auto ts = settling_time(tr.t, tr.y, 0.0, 0.0, 1.0, 0.02);
  REQUIRE(ts);
  CHECK(*ts == doctest::Approx(std::log(0.02) / -4.0).epsilon(1e-6));
  CHECK(*ts == doctest::Approx(0.978).epsilon(1e-3));
  CHECK(*settling_time(tr.t, tr.y, 0.0, 0.0, 1.0, rule_band_q()) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("settling of a critically damped response") {
  const Trace tr = sample([](double t) { return 1.0 - (1.0 + 4.0 * t) * std::exp(-4.0 * t); }, 4.0, 1e-4);
  CHECK(*settling_time(tr.t, tr.y, 0.0, 0.0, 1.0, 0.02) == doctest::Approx(1.458).epsilon(1e-3));
  CHECK(rule_band_p() == doctest::Approx(5.0 * std::exp(-4.0)));
  CHECK(*settling_time(tr.t, tr.y, 0.0, 0.0, 1.0, rule_band_p()) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("settling edge cases") {
  const Trace flat = sample([](double) { return 3.0; }, 1.0, 0.01);
  CHECK(*settling_time(flat.t, flat.y, 0.0, 0.0, 3.0, 0.02) == 0.0);
  const Trace ramp = sample([](double t) { return t; }, 1.0, 0.01);
  CHECK_FALSE(settling_time(ramp.t, ramp.y, 0.0, 0.0, 2.0, 0.02).has_value());
  // Event time offsets the clock.
  const Trace late = sample([](double t) { return t < 2.0 ? 0.0 : 1.0 - std::exp(-4.0 * (t - 2.0)); }, 6.0, 1e-4);
  CHECK(*settling_time(late.t, late.y, 2.0, 0.0, 1.0, 0.02) == doctest::Approx(0.978).epsilon(1e-3));
}

TEST_CASE("overshoot") {
  const Trace mono = sample([](double t) { return 1.0 - std::exp(-3.0 * t); }, 3.0, 1e-3);
  CHECK(percent_overshoot(mono.t, mono.y, 0.0, 0.0, 1.0) == 0.0);
  // Peak of 1.2 at t = 1, exactly on a sample.
  const Trace osc = sample(
      [](double t) { return 1.0 - 0.2 * std::cos(std::numbers::pi * t) * std::exp(-0.3 * std::max(t - 1.0, 0.0)); },
      8.0, 1e-3);
  CHECK(percent_overshoot(osc.t, osc.y, 0.0, 0.0, 1.0) == doctest::Approx(20.0).epsilon(1e-9));
  // Downward steps measure overshoot below the final value.
  std::vector<double> down;
  for (double v : osc.y) down.push_back(1.0 - v);
  CHECK(percent_overshoot(osc.t, down, 0.0, 1.0, 0.0) == doctest::Approx(20.0).epsilon(1e-9));
}

TEST_CASE("deviation and oscillation energy") {
  const Trace mono = sample([](double t) { return 1.0 - std::exp(-2.0 * t); }, 4.0, 1e-4);
  CHECK(deviation_energy(mono.t, mono.y, 0.0, 2.0, 1.0) ==
        doctest::Approx((1.0 - std::exp(-8.0)) / 4.0).epsilon(1e-6));
  CHECK(oscillation_energy(mono.t, mono.y, 0.0, 2.0, 0.0, 1.0) == 0.0);

  const Trace ring = sample([](double t) { return 1.0 - std::cos(4.0 * t); }, 4.0, 1e-5);
  // First crossing at pi/8; integral of cos^2(4t) from pi/8 to 2.
  const double a = std::numbers::pi / 8.0;
  auto prim = [](double t) { return t / 2.0 + std::sin(8.0 * t) / 16.0; };
  CHECK(oscillation_energy(ring.t, ring.y, 0.0, 2.0, 0.0, 1.0) == doctest::Approx(prim(2.0) - prim(a)).epsilon(1e-6));
  CHECK(window_mean(ring.t, ring.y, 0.0, std::numbers::pi / 2.0) == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("step metrics for setpoint and disturbance events") {
  const Trace tr = sample([](double t) { return t < 1.0 ? 2.0 : 3.0 - std::exp(-4.0 * (t - 1.0)); }, 6.0, 1e-3);
  StepWindow w{1.0, 6.0, 1.0, rule_band_q()};
  const StepMetrics m = step_metrics(tr.t, tr.y, w, 0.02);
  CHECK(m.initial == 2.0);
  CHECK(m.final_value == doctest::Approx(3.0).epsilon(1e-7));
  CHECK(*m.settling == doctest::Approx(0.978).epsilon(2e-3));
  CHECK(m.steady_state_error_pct == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(m.overshoot_pct < 1e-5);

  w.reference_step = 0.0;
  const StepMetrics d = step_metrics(tr.t, tr.y, w, 0.02);
  CHECK(std::isnan(d.overshoot_pct));
  CHECK(std::isnan(d.steady_state_error_pct));
}

namespace {

ProjectConfig short_project() {
  ProjectConfig cfg;
  cfg.sim.duration = 6.0;
  cfg.events = {{1.0, EventKind::SetPRef, 2500.0, 5.0},
                {2.0, EventKind::SetScr, 8.0, 5.0},
                {3.0, EventKind::SetPRef, 3000.0, 5.0},
                {4.0, EventKind::SetScr, 20.0, 5.0},
                {5.0, EventKind::SetQRef, 1500.0, 5.0}};
  return cfg;
}

}  // namespace

TEST_CASE("oracle estimation is exact with a one-window delay") {
  const ProjectConfig cfg = short_project();
  const ScenarioResult r = simulate(cfg, ControlMode::Avsg, EstimatorKind::Oracle, nullptr, cfg.events);
  EstimationOptions opts;
  opts.settle_guard = 0.1;
  const auto segs = estimation_metrics(r.estimates, cfg.events, cfg.sim.duration, opts);
  REQUIRE(segs.size() == 3);
  for (const auto& s : segs) {
    CHECK(s.r_steady_err_max == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(s.l_peak_err == doctest::Approx(0.0).epsilon(1e-12));
    REQUIRE(s.detection_delay);
    CHECK(*s.detection_delay == doctest::Approx(0.02).epsilon(1e-9));
    CHECK(s.steady_windows > 0);
  }
}

TEST_CASE("metrics recomputed from saved csv are identical") {
  const ProjectConfig cfg = short_project();
  const ScenarioResult c = simulate(cfg, ControlMode::Cvsg, EstimatorKind::None, nullptr, cfg.events);
  const ScenarioResult a = simulate(cfg, ControlMode::Avsg, EstimatorKind::Oracle, nullptr, cfg.events);
  const std::string dir = temp_dir("roundtrip");
  write_timeseries_csv(c.series, dir + "/c.csv");
  write_timeseries_csv(a.series, dir + "/a.csv");
  write_estimates_csv(a.estimates, dir + "/e.csv");
  const TimeSeries c2 = read_timeseries_csv(dir + "/c.csv");
  const TimeSeries a2 = read_timeseries_csv(dir + "/a.csv");
  const auto e2 = read_estimates_csv(dir + "/e.csv", cfg.sim.estimator_cfg.window_span());
  REQUIRE(a2.rows.size() == a.series.rows.size());
  CHECK(a2.rows[1234].p_pcc == a.series.rows[1234].p_pcc);

  const ComparisonReport direct = compare_runs(&c.series, &a.series, &a.estimates, nullptr, cfg);
  const ComparisonReport reread = compare_runs(&c2, &a2, &e2, nullptr, cfg);
  CHECK(report_to_text(direct) == report_to_text(reread));
  write_report_csv(direct, dir + "/r1.csv");
  write_report_csv(reread, dir + "/r2.csv");
  CHECK(slurp(dir + "/r1.csv") == slurp(dir + "/r2.csv"));
  CHECK(direct.events.size() == cfg.events.size());
}

TEST_CASE("comparison judges setpoint events against the targets") {
  ProjectConfig cfg = short_project();
  cfg.sim.duration = 3.0;
  cfg.events = {{1.0, EventKind::SetPRef, 2500.0, 5.0}};
  const ScenarioResult a = simulate(cfg, ControlMode::Avsg, EstimatorKind::Oracle, nullptr, cfg.events);
  const ComparisonReport rep = compare_runs(nullptr, &a.series, &a.estimates, nullptr, cfg);
  bool found = false;
  for (const auto& e : rep.events)
    if (e.event.time == 1.0) {
      found = true;
      CHECK(e.judged);
      REQUIRE(e.avsg);
      CHECK(*e.avsg->settling_rule == doctest::Approx(1.0).epsilon(0.1));
      CHECK(e.avsg_within_targets);
    }
  CHECK(found);
  CHECK(rep.avsg_pass);
}

TEST_CASE("config round trip and validation") {
  ProjectConfig cfg;
  cfg.seed = 7;
  cfg.training.max_epochs = 42;
  cfg.events.push_back({55.0, EventKind::SetScr, 3.5, 4.0});
  const ProjectConfig back = parse_project_config(project_config_to_json(cfg));
  CHECK(back.seed == 7);
  CHECK(back.training.max_epochs == 42);
  CHECK(back.events == cfg.events);
  CHECK(project_config_to_json(back) == project_config_to_json(cfg));

  CHECK_THROWS_AS(parse_project_config("{\"bogus\": 1}"), Error);
  CHECK_THROWS_AS(parse_project_config("{\"seed\": \"x\"}"), Error);
  CHECK_THROWS_AS(parse_project_config("{"), Error);
  CHECK_THROWS_AS(control_mode_from_string("fast"), Error);

  const SeedPlan p = seed_plan(1);
  CHECK(p.dataset == 1);
  CHECK(p.split == 2);
  CHECK(p.init == 3);
  CHECK(p.noise == 4);
}

TEST_CASE("shipped scenario config matches the defaults") {
  const ProjectConfig file = load_project_config(std::string(VSG_SOURCE_DIR) + "/configs/paper_scenario.json");
  CHECK(project_config_to_json(file) == project_config_to_json(ProjectConfig{}));
}
