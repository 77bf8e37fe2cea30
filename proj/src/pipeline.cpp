#include "vsg/pipeline.hpp"

#include <chrono>
#include <fstream>

#include "vsg/io.hpp"

namespace vsg {

std::vector<PhaseMarginRow> phase_margin_sweep(const ProjectConfig& cfg, const std::vector<double>& scr_list) {
  const auto& grid = cfg.sim.grid;
  NewtonOptions newton;
  newton.power_scale = grid.s_rated;
  std::vector<PhaseMarginRow> rows;
  for (double scr : scr_list) {
    PhaseMarginRow r;
    r.scr = scr;
    const auto z = scr_to_impedance(scr, grid.initial_xr, grid.v_g, grid.s_rated, grid.omega0);
    const auto op = solve_operating_point(cfg.sim.p_ref0, cfg.sim.q_ref0, z, grid.v_g, newton);
    r.jac = jacobian(op, z);
    r.fixed = cfg.sim.initial_gains;
    r.scheduled = schedule_gains(r.jac, cfg.sim.targets);
    const auto omega = default_omega_grid<double>();
    r.pm_fixed = phase_margin(bode(open_loop_p(r.fixed, r.jac.a), omega));
    r.pm_scheduled = phase_margin(bode(open_loop_p(r.scheduled, r.jac.a), omega));
    rows.push_back(r);
  }
  return rows;
}

void write_bode_csv(const ProjectConfig& cfg, const std::vector<double>& scr_list, const std::string& path) {
  io::CsvWriter w(path, {"scr", "gains", "omega_rad_s", "mag_db", "phase_deg"});
  const auto omega = default_omega_grid<double>();
  for (const auto& row : phase_margin_sweep(cfg, scr_list)) {
    for (int k = 0; k < 2; ++k) {
      const auto fr = bode(open_loop_p(k == 0 ? row.fixed : row.scheduled, row.jac.a), omega);
      for (const auto& p : fr.points) {
        w.cell(row.scr).cell(k == 0 ? "fixed" : "scheduled").cell(p.omega).cell(p.mag_db).cell(p.phase_deg);
        w.end_row();
      }
    }
  }
}

void write_phase_margins_csv(const std::vector<PhaseMarginRow>& rows, const std::string& path) {
  io::CsvWriter w(path, {"scr", "jac_a", "jac_b", "jac_c", "jac_d", "pm_fixed_deg", "pm_scheduled_deg", "d_p",
                         "k_ip", "d_q", "k_iq"});
  for (const auto& r : rows) {
    w.cell(r.scr).cell(r.jac.a).cell(r.jac.b).cell(r.jac.c).cell(r.jac.d).cell(r.pm_fixed).cell(r.pm_scheduled);
    w.cell(r.scheduled.d_p).cell(r.scheduled.k_ip).cell(r.scheduled.d_q).cell(r.scheduled.k_iq);
    w.end_row();
  }
}

ann::Dataset build_dataset(const ProjectConfig& cfg) {
  return ann::generate_dataset(cfg.dataset, seed_plan(cfg.seed).dataset);
}

TrainedEstimator train_estimator(const ProjectConfig& cfg, const ann::Dataset& dataset) {
  const SeedPlan seeds = seed_plan(cfg.seed);
  TrainedEstimator out;
  out.splits = ann::split_dataset(dataset, cfg.split, seeds.split);
  ann::TrainConfig tc = cfg.training;
  tc.seed = seeds.init;
  const auto t0 = std::chrono::steady_clock::now();
  out.result = ann::train(out.splits.train.as_split(), out.splits.val.as_split(), out.splits.test.as_split(), tc);
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

ann::ModelFile to_model_file(const ann::TrainResult& result, const ann::TrainConfig& cfg) {
  return {result.model, result.normalizer, cfg.fingerprint()};
}

ScenarioResult simulate(const ProjectConfig& cfg, ControlMode mode, EstimatorKind estimator,
                        const ImpedanceRegressor* ann, const std::vector<ScenarioEvent>& events) {
  SimConfig sim = cfg.sim;
  sim.mode = mode;
  sim.estimator = estimator;
  sim.seed = seed_plan(cfg.seed).noise;
  return run_scenario(sim, events, ann);
}

std::vector<ScenarioEvent> weak_grid_events(const std::vector<ScenarioEvent>& events) {
  std::vector<ScenarioEvent> out;
  for (const auto& e : events)
    if (e.kind != EventKind::SetScr) out.push_back(e);
  return out;
}

namespace {

std::string training_summary(const TrainedEstimator& est) {
  const auto& r = est.result.report;
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "Estimator training: %d epochs, stop '%s', best epoch %d\n"
                "  final mse train %.3e  val %.3e  test %.3e\n"
                "  regression R train %.6f  val %.6f  test %.6f\n",
                r.epochs, r.stop_reason.c_str(), r.best_epoch, r.train_mse.empty() ? 0.0 : r.train_mse.back(),
                r.val_mse.empty() ? 0.0 : r.val_mse.back(), r.test_mse.empty() ? 0.0 : r.test_mse.back(), r.train_fit.r,
                r.val_fit.r, r.test_fit.r);
  return buf;
}

std::string margins_summary(const std::vector<PhaseMarginRow>& rows) {
  std::string out = "Open-loop P phase margin at the initial setpoints\n    scr   fixed_deg  scheduled_deg\n";
  for (const auto& r : rows) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "  %5.1f  %10.4f  %13.4f\n", r.scr, r.pm_fixed, r.pm_scheduled);
    out += buf;
  }
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  out << text;
}

}  // namespace

PaperRepro run_paper_repro(const ProjectConfig& cfg, const std::string& out_dir) {
  cfg.validate();
  io::ensure_directory(out_dir);
  auto path = [&](const char* name) { return io::join_path(out_dir, name); };
  write_text(path("config.json"), project_config_to_json(cfg));

  PaperRepro out;
  const ann::Dataset ds = build_dataset(cfg);
  out.estimator = train_estimator(cfg, ds);
  ann::TrainConfig tc = cfg.training;
  tc.seed = seed_plan(cfg.seed).init;
  ann::save_model(path("model.json"), to_model_file(out.estimator.result, tc));
  ann::export_diagnostics(out.estimator.result.report, out_dir);

  out.margins = phase_margin_sweep(cfg, cfg.bode_scr);
  write_phase_margins_csv(out.margins, path("phase_margins.csv"));
  write_bode_csv(cfg, cfg.bode_scr, path("bode.csv"));

  const ImpedanceRegressor regressor = ann_regressor(out.estimator.result.model, out.estimator.result.normalizer);
  out.cvsg = simulate(cfg, ControlMode::Cvsg, EstimatorKind::Ann, &regressor, cfg.events);
  out.avsg = simulate(cfg, ControlMode::Avsg, EstimatorKind::Ann, &regressor, cfg.events);
  out.avsg_weak = simulate(cfg, ControlMode::Avsg, EstimatorKind::Ann, &regressor, weak_grid_events(cfg.events));

  write_timeseries_csv(out.cvsg.series, path("timeseries_cvsg.csv"));
  write_timeseries_csv(out.avsg.series, path("timeseries_avsg.csv"));
  write_timeseries_csv(out.avsg_weak.series, path("timeseries_avsg_weak.csv"));
  write_estimates_csv(out.cvsg.estimates, path("estimates_cvsg.csv"));
  write_estimates_csv(out.avsg.estimates, path("estimates_avsg.csv"));
  write_gain_updates_csv(out.avsg.gain_updates, path("gain_updates_avsg.csv"));

  out.report = compare_runs(&out.cvsg.series, &out.avsg.series, &out.avsg.estimates, &out.avsg_weak.series, cfg);
  write_report_csv(out.report, path("report.csv"));
  write_estimation_csv(out.report, path("estimation.csv"));
  write_text(path("report.txt"),
             training_summary(out.estimator) + "\n" + margins_summary(out.margins) + "\n" + report_to_text(out.report));
  return out;
}

}  // namespace vsg
