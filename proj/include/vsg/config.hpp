#pragma once

// JSON configuration document shared by every CLI subcommand. Every key is
// optional; absent keys keep the defaults below, unknown keys are rejected.

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "vsg/dataset.hpp"
#include "vsg/metrics.hpp"
#include "vsg/simulation.hpp"

namespace vsg {

struct EvaluationConfig {
  double settling_band = 0.02;
  double energy_window = 2.0;        // s after the event
  double final_average = 0.5;        // s averaged before the next event
  double ts_tolerance = 0.10;        // relative, against DesignTargets::t_s
  double overshoot_tolerance_pct = 1.0;
  EstimationOptions estimation{};
};

struct ProjectConfig {
  SimConfig sim;  // mode and estimator are chosen per run
  std::vector<ScenarioEvent> events = paper_scenario_events();
  ann::DatasetConfig dataset;
  std::array<double, 3> split{0.7, 0.15, 0.15};
  ann::TrainConfig training;
  EvaluationConfig evaluation;
  std::vector<double> bode_scr{2.0, 8.0, 20.0};
  std::uint64_t seed = 1;
  // Inner current/voltage loop and filter constants. The simulation treats the
  // inner loops as ideal; these are carried for reference only.
  std::map<std::string, double> inner_loops{{"t_cres", 1e-3},   {"k_pc", 12.5664}, {"k_ic", 3.9478e4},
                                            {"t_vres", 10e-3},  {"k_pv", 0.0628},  {"k_iv", 19.7392},
                                            {"u_dc", 800.0},    {"l_s", 1e-3},     {"c_s", 50e-6},
                                            {"f_sw", 10e3}};

  void validate() const;
};

/// Seeds for each stochastic stage, derived from the single project seed.
struct SeedPlan {
  std::uint64_t dataset;
  std::uint64_t split;
  std::uint64_t init;
  std::uint64_t noise;
};
SeedPlan seed_plan(std::uint64_t seed);

ProjectConfig parse_project_config(const std::string& json_text);
ProjectConfig load_project_config(const std::string& path);
std::string project_config_to_json(const ProjectConfig& cfg);

ControlMode control_mode_from_string(const std::string& name);
EventKind event_kind_from_string(const std::string& name);

}  // namespace vsg
