#include "vsg/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace vsg {

using nlohmann::json;

void ProjectConfig::validate() const {
  sim.validate();
  dataset.validate();
  training.validate();
  for (std::size_t e = 0; e < events.size(); ++e) {
    if (!(events[e].time >= 0) || events[e].time > sim.duration)
      throw Error(ErrorCode::Config, "event time outside the scenario");
    if (e > 0 && events[e].time < events[e - 1].time) throw Error(ErrorCode::Config, "events must be sorted by time");
    if (events[e].kind == EventKind::SetScr && (!(events[e].value > 0) || !(events[e].xr_ratio > 0)))
      throw Error(ErrorCode::Config, "scr events need positive scr and x/r");
  }
  if (!(evaluation.settling_band > 0) || !(evaluation.energy_window > 0) || !(evaluation.final_average > 0) ||
      !(evaluation.ts_tolerance >= 0) || !(evaluation.overshoot_tolerance_pct >= 0))
    throw Error(ErrorCode::Config, "evaluation settings must be positive");
  for (double s : bode_scr)
    if (!(s > 0)) throw Error(ErrorCode::Config, "bode scr values must be positive");
}

SeedPlan seed_plan(std::uint64_t seed) { return {seed, seed + 1, seed + 2, seed + 3}; }

ControlMode control_mode_from_string(const std::string& name) {
  if (name == "cvsg") return ControlMode::Cvsg;
  if (name == "avsg") return ControlMode::Avsg;
  throw Error(ErrorCode::Config, "unknown mode '" + name + "' (expected cvsg or avsg)");
}

EventKind event_kind_from_string(const std::string& name) {
  if (name == "set_scr") return EventKind::SetScr;
  if (name == "set_p_ref") return EventKind::SetPRef;
  if (name == "set_q_ref") return EventKind::SetQRef;
  throw Error(ErrorCode::Config, "unknown event kind '" + name + "'");
}

namespace {

// Reads optional members of one JSON object and rejects anything unexpected.
class Section {
 public:
  Section(const json& parent, const char* name) : name_(name) {
    if (!parent.contains(name)) return;
    obj_ = &parent.at(name);
    if (!obj_->is_object()) throw Error(ErrorCode::Config, std::string("'") + name + "' must be an object");
  }

  template <typename T>
  Section& get(const char* key, T& out) {
    seen_.insert(key);
    if (obj_ == nullptr || !obj_->contains(key)) return *this;
    try {
      out = obj_->at(key).get<T>();
    } catch (const json::exception&) {
      throw Error(ErrorCode::Config, name_ + "." + key + " has the wrong type");
    }
    return *this;
  }

  const json* raw(const char* key) {
    seen_.insert(key);
    return obj_ != nullptr && obj_->contains(key) ? &obj_->at(key) : nullptr;
  }

  void finish() const {
    if (obj_ == nullptr) return;
    for (const auto& item : obj_->items())
      if (!seen_.count(item.key())) throw Error(ErrorCode::Config, "unknown key " + name_ + "." + item.key());
  }

 private:
  std::string name_;
  const json* obj_ = nullptr;
  std::set<std::string> seen_;
};

json event_to_json(const ScenarioEvent& e) {
  json j{{"time", e.time}, {"kind", to_string(e.kind)}, {"value", e.value}};
  if (e.kind == EventKind::SetScr) j["xr_ratio"] = e.xr_ratio;
  return j;
}

ScenarioEvent event_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::Config, "events must be objects");
  ScenarioEvent e;
  for (const auto& item : j.items())
    if (item.key() != "time" && item.key() != "kind" && item.key() != "value" && item.key() != "xr_ratio")
      throw Error(ErrorCode::Config, "unknown event key " + item.key());
  try {
    e.time = j.at("time").get<double>();
    e.kind = event_kind_from_string(j.at("kind").get<std::string>());
    e.value = j.at("value").get<double>();
    if (j.contains("xr_ratio")) e.xr_ratio = j.at("xr_ratio").get<double>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::Config, "events need numeric time and value and a kind string");
  }
  return e;
}

void read_document(const json& doc, ProjectConfig& cfg) {
  if (doc.contains("seed")) cfg.seed = doc.at("seed").get<std::uint64_t>();

  auto& sim = cfg.sim;
  Section s(doc, "simulation");
  s.get("dt_sim", sim.dt_sim).get("duration", sim.duration).get("output_period", sim.output_period);
  s.get("p_ref0", sim.p_ref0).get("q_ref0", sim.q_ref0).get("lpf_cutoff", sim.lpf_cutoff);
  s.get("gate_threshold", sim.gate_threshold).get("noise_v_std", sim.noise_v_std).get("noise_i_std", sim.noise_i_std);
  if (const json* m = s.raw("mode")) sim.mode = control_mode_from_string(m->get<std::string>());
  s.finish();
  sim.estimator_cfg.dt_sim = sim.dt_sim;

  Section g(doc, "grid");
  double frequency = sim.grid.omega0 / (2.0 * std::numbers::pi);
  g.get("v_g", sim.grid.v_g).get("s_rated", sim.grid.s_rated).get("frequency_hz", frequency);
  g.get("initial_scr", sim.grid.initial_scr).get("initial_xr", sim.grid.initial_xr);
  g.finish();
  sim.grid.omega0 = sim.grid.omega_g = 2.0 * std::numbers::pi * frequency;

  Section est(doc, "estimator");
  est.get("sample_period", sim.estimator_cfg.sample_period).get("window", sim.estimator_cfg.window);
  est.finish();

  Section gains(doc, "gains");
  gains.get("d_p", sim.initial_gains.d_p).get("k_ip", sim.initial_gains.k_ip);
  gains.get("d_q", sim.initial_gains.d_q).get("k_iq", sim.initial_gains.k_iq);
  gains.finish();

  Section tg(doc, "targets");
  tg.get("t_s", sim.targets.t_s).get("xi", sim.targets.xi).get("q_droop_divisor", sim.targets.q_droop_divisor);
  tg.finish();

  if (doc.contains("events")) {
    if (!doc.at("events").is_array()) throw Error(ErrorCode::Config, "events must be an array");
    cfg.events.clear();
    for (const auto& j : doc.at("events")) cfg.events.push_back(event_from_json(j));
  }

  auto& ds = cfg.dataset;
  Section d(doc, "dataset");
  std::array<double, 2> p_range{ds.p_min_pu, ds.p_max_pu}, q_range{ds.q_min_pu, ds.q_max_pu};
  d.get("scr_list", ds.scr_list).get("xr_list", ds.xr_list).get("p_range_pu", p_range).get("q_range_pu", q_range);
  d.get("n_total", ds.n_total).get("phase_jitter", ds.phase_jitter);
  d.get("noise_v_std", ds.noise_v_std).get("noise_i_std", ds.noise_i_std);
  d.finish();
  ds.p_min_pu = p_range[0];
  ds.p_max_pu = p_range[1];
  ds.q_min_pu = q_range[0];
  ds.q_max_pu = q_range[1];
  ds.v_g = sim.grid.v_g;
  ds.s_rated = sim.grid.s_rated;
  ds.omega0 = sim.grid.omega0;
  ds.sample_period = sim.estimator_cfg.sample_period;

  if (doc.contains("split")) {
    try {
      cfg.split = doc.at("split").get<std::array<double, 3>>();
    } catch (const json::exception&) {
      throw Error(ErrorCode::Config, "split must be three fractions");
    }
  }

  auto& tc = cfg.training;
  Section t(doc, "training");
  t.get("max_epochs", tc.max_epochs).get("goal_mse", tc.goal_mse).get("mu_initial", tc.mu_initial);
  t.get("mu_decrease", tc.mu_decrease).get("mu_increase", tc.mu_increase).get("mu_max", tc.mu_max);
  t.get("mu_min", tc.mu_min).get("validation_patience", tc.validation_patience).get("init_scale", tc.init_scale);
  t.get("hidden_units", tc.hidden_units).get("histogram_bins", tc.histogram_bins);
  t.finish();

  auto& ev = cfg.evaluation;
  Section e(doc, "evaluation");
  e.get("settling_band", ev.settling_band).get("energy_window", ev.energy_window);
  e.get("final_average", ev.final_average).get("ts_tolerance", ev.ts_tolerance);
  e.get("overshoot_tolerance_pct", ev.overshoot_tolerance_pct);
  e.get("settle_guard", ev.estimation.settle_guard).get("detect_tolerance", ev.estimation.detect_tolerance);
  e.finish();

  Section b(doc, "bode");
  b.get("scr_list", cfg.bode_scr);
  b.finish();

  if (doc.contains("inner_loops")) {
    try {
      for (const auto& item : doc.at("inner_loops").items()) cfg.inner_loops[item.key()] = item.value().get<double>();
    } catch (const json::exception&) {
      throw Error(ErrorCode::Config, "inner_loops values must be numbers");
    }
  }

}

}  // namespace

ProjectConfig parse_project_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Config, std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::Config, "config root must be an object");
  const std::set<std::string> top{"seed",     "simulation", "grid",       "estimator",  "gains",      "targets",
                                  "events",   "dataset",    "split",      "training",   "evaluation", "bode",
                                  "inner_loops"};
  for (const auto& item : doc.items())
    if (!top.count(item.key())) throw Error(ErrorCode::Config, "unknown key " + item.key());

  ProjectConfig cfg;
  try {
    read_document(doc, cfg);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Config, std::string("config value of the wrong type: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

ProjectConfig load_project_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open config " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_project_config(ss.str());
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

std::string project_config_to_json(const ProjectConfig& cfg) {
  const auto& sim = cfg.sim;
  json doc;
  doc["seed"] = cfg.seed;
  doc["simulation"] = {{"dt_sim", sim.dt_sim},         {"duration", sim.duration},
                       {"output_period", sim.output_period}, {"mode", to_string(sim.mode)},
                       {"p_ref0", sim.p_ref0},         {"q_ref0", sim.q_ref0},
                       {"lpf_cutoff", sim.lpf_cutoff}, {"gate_threshold", sim.gate_threshold},
                       {"noise_v_std", sim.noise_v_std}, {"noise_i_std", sim.noise_i_std}};
  doc["grid"] = {{"v_g", sim.grid.v_g},
                 {"s_rated", sim.grid.s_rated},
                 {"frequency_hz", sim.grid.omega0 / (2.0 * std::numbers::pi)},
                 {"initial_scr", sim.grid.initial_scr},
                 {"initial_xr", sim.grid.initial_xr}};
  doc["estimator"] = {{"sample_period", sim.estimator_cfg.sample_period}, {"window", sim.estimator_cfg.window}};
  doc["gains"] = {{"d_p", sim.initial_gains.d_p},
                  {"k_ip", sim.initial_gains.k_ip},
                  {"d_q", sim.initial_gains.d_q},
                  {"k_iq", sim.initial_gains.k_iq}};
  doc["targets"] = {{"t_s", sim.targets.t_s}, {"xi", sim.targets.xi}, {"q_droop_divisor", sim.targets.q_droop_divisor}};
  json events = json::array();
  for (const auto& e : cfg.events) events.push_back(event_to_json(e));
  doc["events"] = events;
  const auto& ds = cfg.dataset;
  doc["dataset"] = {{"scr_list", ds.scr_list},
                    {"xr_list", ds.xr_list},
                    {"p_range_pu", {ds.p_min_pu, ds.p_max_pu}},
                    {"q_range_pu", {ds.q_min_pu, ds.q_max_pu}},
                    {"n_total", ds.n_total},
                    {"phase_jitter", ds.phase_jitter},
                    {"noise_v_std", ds.noise_v_std},
                    {"noise_i_std", ds.noise_i_std}};
  doc["split"] = cfg.split;
  const auto& tc = cfg.training;
  doc["training"] = {{"max_epochs", tc.max_epochs},       {"goal_mse", tc.goal_mse},
                     {"mu_initial", tc.mu_initial},       {"mu_decrease", tc.mu_decrease},
                     {"mu_increase", tc.mu_increase},     {"mu_max", tc.mu_max},
                     {"mu_min", tc.mu_min},               {"validation_patience", tc.validation_patience},
                     {"init_scale", tc.init_scale},       {"hidden_units", tc.hidden_units},
                     {"histogram_bins", tc.histogram_bins}};
  const auto& ev = cfg.evaluation;
  doc["evaluation"] = {{"settling_band", ev.settling_band},
                       {"energy_window", ev.energy_window},
                       {"final_average", ev.final_average},
                       {"ts_tolerance", ev.ts_tolerance},
                       {"overshoot_tolerance_pct", ev.overshoot_tolerance_pct},
                       {"settle_guard", ev.estimation.settle_guard},
                       {"detect_tolerance", ev.estimation.detect_tolerance}};
  doc["bode"] = {{"scr_list", cfg.bode_scr}};
  doc["inner_loops"] = cfg.inner_loops;
  return doc.dump(2) + "\n";
}

}  // namespace vsg
