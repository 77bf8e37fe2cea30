#pragma once

// Step-response and estimation metrics computed from logged series only, so
// re-reading a saved CSV reproduces the same numbers.

#include <optional>
#include <span>
#include <vector>

#include "vsg/simulation.hpp"

namespace vsg {

/// Time from `event_time` until y last leaves final +- band * reference,
/// interpolated linearly between samples. reference = |final - initial| when
/// that is nonzero, |final| otherwise. nullopt when the last sample is still
/// outside the band.
std::optional<double> settling_time(std::span<const double> t, std::span<const double> y, double event_time,
                                    double initial, double final_value, double band);

/// max((y - final) / (final - initial), 0) * 100 over samples at or after the event.
double percent_overshoot(std::span<const double> t, std::span<const double> y, double event_time, double initial,
                         double final_value);

/// Integral of (y - final)^2 over [event_time, event_time + window], trapezoidal.
double deviation_energy(std::span<const double> t, std::span<const double> y, double event_time, double window,
                        double final_value);

/// Squared deviation from the final value integrated from the first time y
/// reaches the final value until event_time + window. A response that
/// approaches its final value without crossing it scores zero.
double oscillation_energy(std::span<const double> t, std::span<const double> y, double event_time, double window,
                          double initial, double final_value);

/// Mean of y over [from, to].
double window_mean(std::span<const double> t, std::span<const double> y, double from, double to);

/// Band that the 4 / (xi omega_n) rule implies for the stepped loop at t = Ts:
/// (1 + 4) e^-4 for the critically damped P loop, e^-4 for the first-order Q loop.
double rule_band_p();
double rule_band_q();

struct StepMetrics {
  double band = 0.02;
  std::optional<double> settling;       // at `band`
  std::optional<double> settling_rule;  // at the rule-implied band
  double overshoot_pct = 0;
  double steady_state_error_pct = 0;
  double deviation_energy = 0;
  double oscillation_energy = 0;
  double initial = 0;
  double final_value = 0;
};

struct StepWindow {
  double event_time = 0;
  double horizon_end = 0;   // next event or end of run
  double reference_step = 0;  // commanded change; 0 for disturbance events
  double rule_band = 0.0;
  double energy_window = 2.0;
  double final_average = 0.5;  // seconds averaged before horizon_end for the final value
};

StepMetrics step_metrics(std::span<const double> t, std::span<const double> y, const StepWindow& w, double band);

struct SegmentEstimation {
  double t_start = 0;
  double t_end = 0;
  double r_true = 0;
  double l_true = 0;
  int steady_windows = 0;
  int transient_windows = 0;
  double r_steady_err_max = 0;  // relative
  double l_steady_err_max = 0;
  double r_steady_err_mean = 0;
  double l_steady_err_mean = 0;
  double r_peak_err = 0;  // relative, transient windows
  double l_peak_err = 0;
  std::optional<double> detection_delay;
};

struct EstimationOptions {
  double settle_guard = 2.0;        // s after any event before windows count as steady
  double detect_tolerance = 0.05;   // relative error accepted as detection
};

/// Segments are delimited by SetScr events; windows overlapping [event - 0,
/// event + settle_guard] for any event are transient.
std::vector<SegmentEstimation> estimation_metrics(const std::vector<EstimateLogEntry>& log,
                                                  const std::vector<ScenarioEvent>& events, double duration,
                                                  const EstimationOptions& opts = {});

}  // namespace vsg
