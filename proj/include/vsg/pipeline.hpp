#pragma once

// End-to-end workflows behind the CLI subcommands.

#include <string>
#include <vector>

#include "vsg/config.hpp"
#include "vsg/dataset.hpp"
#include "vsg/model_io.hpp"
#include "vsg/report.hpp"

namespace vsg {

struct PhaseMarginRow {
  double scr = 0;
  JacobianPQ<double> jac;
  VsgGains<double> fixed;
  VsgGains<double> scheduled;
  double pm_fixed = 0;      // degrees
  double pm_scheduled = 0;  // degrees
};

/// Open-loop P phase margins at the operating point solved for (p_ref0, q_ref0)
/// on each SCR, with the configured initial gains and with scheduled gains.
std::vector<PhaseMarginRow> phase_margin_sweep(const ProjectConfig& cfg, const std::vector<double>& scr_list);

/// Columns scr, gains, omega_rad_s, mag_db, phase_deg for both gain sets.
void write_bode_csv(const ProjectConfig& cfg, const std::vector<double>& scr_list, const std::string& path);
void write_phase_margins_csv(const std::vector<PhaseMarginRow>& rows, const std::string& path);

struct TrainedEstimator {
  ann::DatasetSplits splits;
  ann::TrainResult result;
  double seconds = 0;
};

ann::Dataset build_dataset(const ProjectConfig& cfg);
TrainedEstimator train_estimator(const ProjectConfig& cfg, const ann::Dataset& dataset);
ann::ModelFile to_model_file(const ann::TrainResult& result, const ann::TrainConfig& cfg);

ScenarioResult simulate(const ProjectConfig& cfg, ControlMode mode, EstimatorKind estimator,
                        const ImpedanceRegressor* ann, const std::vector<ScenarioEvent>& events);

/// Events with every SCR change removed.
std::vector<ScenarioEvent> weak_grid_events(const std::vector<ScenarioEvent>& events);

struct PaperRepro {
  TrainedEstimator estimator;
  ScenarioResult cvsg;
  ScenarioResult avsg;
  ScenarioResult avsg_weak;
  std::vector<PhaseMarginRow> margins;
  ComparisonReport report;
};

/// Dataset, training, Bode sweep, CVSG and AVSG runs with the trained
/// estimator, and the comparison report. Files are written to `out_dir`.
PaperRepro run_paper_repro(const ProjectConfig& cfg, const std::string& out_dir);

}  // namespace vsg
