#pragma once

// CSV schemas for simulation output and the CVSG/AVSG comparison report.

#include <optional>
#include <string>
#include <vector>

#include "vsg/config.hpp"
#include "vsg/metrics.hpp"
#include "vsg/simulation.hpp"

namespace vsg {

void write_timeseries_csv(const TimeSeries& ts, const std::string& path);
TimeSeries read_timeseries_csv(const std::string& path);

/// Columns t, r_g_hat, l_g_hat, r_g_true, l_g_true, applied.
void write_estimates_csv(const std::vector<EstimateLogEntry>& log, const std::string& path);
std::vector<EstimateLogEntry> read_estimates_csv(const std::string& path, double window_span);

void write_gain_updates_csv(const std::vector<GainUpdate>& updates, const std::string& path);

/// Signal a step event is judged on: P for P_ref and SCR events, Q for Q_ref.
enum class Signal { P, Q };
Signal event_signal(const ScenarioEvent& e);
std::vector<double> signal_column(const TimeSeries& ts, Signal s);
std::vector<double> time_column(const TimeSeries& ts);

/// SCR in force just after each event, starting from `initial_scr`.
std::vector<double> scr_after_events(const std::vector<ScenarioEvent>& events, double initial_scr);

/// Metrics for event `index`; the horizon runs to the next event or the end.
StepMetrics event_metrics(const TimeSeries& ts, const std::vector<ScenarioEvent>& events, std::size_t index,
                          const EvaluationConfig& eval);

struct EventComparison {
  ScenarioEvent event;
  Signal signal = Signal::P;
  double scr = 0;
  std::optional<StepMetrics> cvsg;
  std::optional<StepMetrics> avsg;
  bool judged = false;  // setpoint steps carry design targets, SCR steps do not
  bool avsg_within_targets = false;
  // AVSG relative to the same kind of step on the weak grid.
  std::optional<double> ts_deviation;       // (ts - ts_weak) / ts_weak, 2% band
  std::optional<double> ts_rule_deviation;  // same for the rule band
  std::optional<double> overshoot_deviation_pp;
};

struct ComparisonReport {
  std::vector<EventComparison> events;
  std::vector<SegmentEstimation> estimation;
  double target_ts = 1.0;
  EvaluationConfig evaluation;
  bool avsg_pass = false;
};

/// `avsg_weak` is an optional AVSG run of the same events with the SCR held at
/// its initial value; it supplies the weak-grid reference for step kinds that
/// do not occur before the first SCR change.
ComparisonReport compare_runs(const TimeSeries* cvsg, const TimeSeries* avsg,
                              const std::vector<EstimateLogEntry>* avsg_estimates, const TimeSeries* avsg_weak,
                              const ProjectConfig& cfg);

std::string report_to_text(const ComparisonReport& report);
void write_report_csv(const ComparisonReport& report, const std::string& path);
void write_estimation_csv(const ComparisonReport& report, const std::string& path);

}  // namespace vsg
