// Command-line front end: gains, bode, dataset, train, simulate, evaluate,
// paper-repro. Every subcommand reads the shared JSON config (or defaults) and
// writes CSV/text output under --out.

#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "vsg/config.hpp"
#include "vsg/io.hpp"
#include "vsg/model_io.hpp"
#include "vsg/pipeline.hpp"
#include "vsg/report.hpp"

namespace {

using namespace vsg;

struct Common {
  std::string config;
  std::string out = "out";
  std::uint64_t seed = 0;
  bool seed_set = false;
};

ProjectConfig load(const Common& c) {
  ProjectConfig cfg = c.config.empty() ? ProjectConfig{} : load_project_config(c.config);
  if (c.seed_set) cfg.seed = c.seed;
  cfg.validate();
  return cfg;
}

void print_gains(const char* label, const VsgGains<double>& g) {
  std::printf("%s D_p=%.10g K_ip=%.10g D_q=%.10g K_iq=%.10g\n", label, g.d_p, g.k_ip, g.d_q, g.k_iq);
}

int cmd_gains(const Common& c, double a, double d, double scr, double r, double l, std::optional<double> p,
              std::optional<double> q) {
  const ProjectConfig cfg = load(c);
  const auto& grid = cfg.sim.grid;
  JacobianPQ<double> jac{};
  if (a > 0 || d > 0) {
    jac.a = a;
    jac.d = d;
  } else {
    GridImpedance<double> z = scr > 0 ? scr_to_impedance(scr, grid.initial_xr, grid.v_g, grid.s_rated, grid.omega0)
                                      : GridImpedance<double>::from_rl(r, l, grid.omega0);
    NewtonOptions newton;
    newton.power_scale = grid.s_rated;
    const auto op = solve_operating_point(p.value_or(cfg.sim.p_ref0), q.value_or(cfg.sim.q_ref0), z, grid.v_g, newton);
    jac = jacobian(op, z);
    std::printf("impedance R=%.10g ohm L=%.10g H (SCR %.6g)\n", z.r_g, z.l_g,
                impedance_to_scr(z, grid.v_g, grid.s_rated));
    std::printf("operating point delta0=%.10g rad V_pcc0=%.10g V\n", op.delta0, op.v_pcc0);
    std::printf("jacobian a=%.10g b=%.10g c=%.10g d=%.10g\n", jac.a, jac.b, jac.c, jac.d);
  }
  const auto g = schedule_gains(jac, cfg.sim.targets);
  print_gains("scheduled", g);
  const auto p_info = closed_loop_p_info(g, jac.a);
  const auto q_info = closed_loop_q_info(g, jac.d);
  const double pm = phase_margin(bode(open_loop_p(g, jac.a), default_omega_grid<double>()));
  std::printf("P loop: omega_n=%.6g rad/s xi=%.6g Ts(rule)=%.6g s phase margin=%.4f deg\n", p_info.omega_n,
              p_info.xi, p_info.ts_rule, pm);
  std::printf("Q loop: pole=%.6g rad/s tau=%.6g s Ts(4 tau)=%.6g s steady-state error=%.6g%%\n", q_info.pole,
              q_info.tau, q_info.ts_rule, q_info.e_inf * 100.0);
  return 0;
}

int cmd_bode(const Common& c, std::vector<double> scr) {
  const ProjectConfig cfg = load(c);
  if (scr.empty()) scr = cfg.bode_scr;
  io::ensure_directory(c.out);
  const auto rows = phase_margin_sweep(cfg, scr);
  write_bode_csv(cfg, scr, io::join_path(c.out, "bode.csv"));
  write_phase_margins_csv(rows, io::join_path(c.out, "phase_margins.csv"));
  std::printf("   scr   pm_fixed_deg  pm_scheduled_deg\n");
  for (const auto& r : rows) std::printf("%6.2f  %13.4f  %16.4f\n", r.scr, r.pm_fixed, r.pm_scheduled);
  return 0;
}

int cmd_dataset(const Common& c) {
  const ProjectConfig cfg = load(c);
  io::ensure_directory(c.out);
  const auto ds = build_dataset(cfg);
  const auto splits = ann::split_dataset(ds, cfg.split, seed_plan(cfg.seed).split);
  ann::write_dataset_csv(ds, io::join_path(c.out, "dataset.csv"));
  ann::write_dataset_csv(splits.train, io::join_path(c.out, "dataset_train.csv"));
  ann::write_dataset_csv(splits.val, io::join_path(c.out, "dataset_val.csv"));
  ann::write_dataset_csv(splits.test, io::join_path(c.out, "dataset_test.csv"));
  std::printf("dataset: %ld rows (train %ld, val %ld, test %ld) -> %s\n", long(ds.rows()), long(splits.train.rows()),
              long(splits.val.rows()), long(splits.test.rows()), c.out.c_str());
  return 0;
}

int cmd_train(const Common& c, const std::string& dataset_path) {
  const ProjectConfig cfg = load(c);
  io::ensure_directory(c.out);
  const ann::Dataset ds = dataset_path.empty() ? build_dataset(cfg) : ann::read_dataset_csv(dataset_path);
  const TrainedEstimator est = train_estimator(cfg, ds);
  ann::TrainConfig tc = cfg.training;
  tc.seed = seed_plan(cfg.seed).init;
  ann::save_model(io::join_path(c.out, "model.json"), to_model_file(est.result, tc));
  ann::export_diagnostics(est.result.report, c.out);
  const auto& r = est.result.report;
  std::printf("training: %d epochs, stop '%s', best epoch %d, %.1f s\n", r.epochs, r.stop_reason.c_str(),
              r.best_epoch, est.seconds);
  std::printf("regression R: train %.6f val %.6f test %.6f\n", r.train_fit.r, r.val_fit.r, r.test_fit.r);
  return 0;
}

int cmd_simulate(const Common& c, const std::string& mode_name, const std::string& estimator_name,
                 const std::string& model_path, bool weak) {
  ProjectConfig cfg = load(c);
  const ControlMode mode = mode_name.empty() ? cfg.sim.mode : control_mode_from_string(mode_name);
  EstimatorKind kind = EstimatorKind::None;
  std::string est = estimator_name;
  if (est.empty()) est = !model_path.empty() ? "ann" : (mode == ControlMode::Avsg ? "oracle" : "none");
  if (est == "ann") kind = EstimatorKind::Ann;
  else if (est == "oracle") kind = EstimatorKind::Oracle;
  else if (est != "none") throw Error(ErrorCode::Config, "unknown estimator '" + est + "'");

  std::optional<ImpedanceRegressor> regressor;
  if (kind == EstimatorKind::Ann) {
    if (model_path.empty()) throw Error(ErrorCode::Config, "--model is required with the ann estimator");
    const auto file = ann::load_model(model_path);
    regressor = ann_regressor(file.model, file.normalizer);
  }
  const auto events = weak ? weak_grid_events(cfg.events) : cfg.events;
  const auto res = simulate(cfg, mode, kind, regressor ? &*regressor : nullptr, events);

  io::ensure_directory(c.out);
  const std::string tag = std::string(to_string(mode)) + (weak ? "_weak" : "");
  write_timeseries_csv(res.series, io::join_path(c.out, "timeseries_" + tag + ".csv"));
  write_estimates_csv(res.estimates, io::join_path(c.out, "estimates_" + tag + ".csv"));
  write_gain_updates_csv(res.gain_updates, io::join_path(c.out, "gain_updates_" + tag + ".csv"));
  std::printf("simulated %s (%s estimator): %zu samples, %zu estimates, %zu gain updates -> %s\n", tag.c_str(),
              to_string(kind), res.series.rows.size(), res.estimates.size(), res.gain_updates.size(), c.out.c_str());
  return 0;
}

int cmd_evaluate(const Common& c, const std::string& cvsg_path, const std::string& avsg_path,
                 const std::string& est_path, const std::string& weak_path) {
  const ProjectConfig cfg = load(c);
  std::optional<TimeSeries> cvsg, avsg, weak;
  std::optional<std::vector<EstimateLogEntry>> est;
  if (!cvsg_path.empty()) cvsg = read_timeseries_csv(cvsg_path);
  if (!avsg_path.empty()) avsg = read_timeseries_csv(avsg_path);
  if (!weak_path.empty()) weak = read_timeseries_csv(weak_path);
  if (!est_path.empty()) est = read_estimates_csv(est_path, cfg.sim.estimator_cfg.window_span());
  if (!cvsg && !avsg) throw Error(ErrorCode::Config, "evaluate needs --cvsg and/or --avsg");

  const auto rep = compare_runs(cvsg ? &*cvsg : nullptr, avsg ? &*avsg : nullptr, est ? &*est : nullptr,
                                weak ? &*weak : nullptr, cfg);
  io::ensure_directory(c.out);
  write_report_csv(rep, io::join_path(c.out, "report.csv"));
  write_estimation_csv(rep, io::join_path(c.out, "estimation.csv"));
  const std::string text = report_to_text(rep);
  std::ofstream(io::join_path(c.out, "report.txt")) << text;
  std::cout << text;
  return 0;
}

int cmd_repro(const Common& c) {
  const ProjectConfig cfg = load(c);
  const auto res = run_paper_repro(cfg, c.out);
  std::ifstream in(io::join_path(c.out, "report.txt"));
  std::cout << in.rdbuf();
  std::printf("\ntraining took %.1f s; outputs in %s\n", res.estimator.seconds, c.out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"VSG gain scheduling with online ANN grid-impedance estimation"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config, "JSON config document")->check(CLI::ExistingFile);
    sub->add_option("--out", common.out, "output directory");
    sub->add_option_function<std::uint64_t>(
        "--seed", [&](const std::uint64_t& s) { common.seed = s, common.seed_set = true; }, "project seed");
  };

  double a = 0, d = 0, scr = 0, r = 0, l = 0;
  std::optional<double> p, q;
  auto* gains = app.add_subcommand("gains", "scheduled gains and predicted loop metrics for one grid");
  add_common(gains);
  gains->add_option("--a", a, "dP/d(delta) in W/rad (with --d, skips the operating point)");
  gains->add_option("--d", d, "dQ/dV in var/V");
  gains->add_option("--scr", scr, "short-circuit ratio");
  gains->add_option("--r", r, "grid resistance, ohm");
  gains->add_option("--l", l, "grid inductance, H");
  gains->add_option("--p", p, "active power setpoint, W");
  gains->add_option("--q", q, "reactive power setpoint, var");

  std::vector<double> bode_scr;
  auto* bode_cmd = app.add_subcommand("bode", "open-loop P Bode data, fixed vs scheduled gains");
  add_common(bode_cmd);
  bode_cmd->add_option("--scr", bode_scr, "SCR list (default from config)");

  auto* dataset = app.add_subcommand("dataset", "generate and split the estimator training set");
  add_common(dataset);

  std::string dataset_path;
  auto* train_cmd = app.add_subcommand("train", "train the estimator and export diagnostics");
  add_common(train_cmd);
  train_cmd->add_option("--dataset", dataset_path, "dataset CSV (generated when omitted)")->check(CLI::ExistingFile);

  std::string mode, estimator, model_path;
  bool weak = false;
  auto* sim = app.add_subcommand("simulate", "run the scenario in one control mode");
  add_common(sim);
  sim->add_option("--mode", mode, "cvsg or avsg");
  sim->add_option("--estimator", estimator, "none, oracle or ann");
  sim->add_option("--model", model_path, "trained model file")->check(CLI::ExistingFile);
  sim->add_flag("--weak-grid", weak, "drop SCR events (grid stays at its initial SCR)");

  std::string cvsg_path, avsg_path, est_path, weak_path;
  auto* eval = app.add_subcommand("evaluate", "comparison report from saved series");
  add_common(eval);
  eval->add_option("--cvsg", cvsg_path, "CVSG time series CSV")->check(CLI::ExistingFile);
  eval->add_option("--avsg", avsg_path, "AVSG time series CSV")->check(CLI::ExistingFile);
  eval->add_option("--estimates", est_path, "AVSG estimate log CSV")->check(CLI::ExistingFile);
  eval->add_option("--avsg-weak", weak_path, "AVSG weak-grid time series CSV")->check(CLI::ExistingFile);

  auto* repro = app.add_subcommand("paper-repro", "dataset, training, Bode sweep, both scenarios and the report");
  add_common(repro);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*gains) return cmd_gains(common, a, d, scr, r, l, p, q);
    if (*bode_cmd) return cmd_bode(common, bode_scr);
    if (*dataset) return cmd_dataset(common);
    if (*train_cmd) return cmd_train(common, dataset_path);
    if (*sim) return cmd_simulate(common, mode, estimator, model_path, weak);
    if (*eval) return cmd_evaluate(common, cvsg_path, avsg_path, est_path, weak_path);
    if (*repro) return cmd_repro(common);
  } catch (const vsg::Error& e) {
    std::fprintf(stderr, "error (%s): %s\n", vsg::to_string(e.code()), e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 1;
}
