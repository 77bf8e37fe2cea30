#include "vsg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace vsg {

namespace {

void check_series(std::span<const double> t, std::span<const double> y) {
  if (t.size() != y.size() || t.empty()) throw Error(ErrorCode::InvalidInput, "series length mismatch or empty");
}

std::size_t first_at_or_after(std::span<const double> t, double time) {
  return std::size_t(std::lower_bound(t.begin(), t.end(), time - 1e-12) - t.begin());
}

}  // namespace

std::optional<double> settling_time(std::span<const double> t, std::span<const double> y, double event_time,
                                    double initial, double final_value, double band) {
  check_series(t, y);
  const double step = std::abs(final_value - initial);
  const double reference = step > 0 ? step : std::abs(final_value);
  if (!(reference > 0)) throw Error(ErrorCode::InvalidInput, "settling band needs a nonzero reference");
  const double tol = band * reference;
  const std::size_t i0 = first_at_or_after(t, event_time);
  if (i0 >= t.size()) throw Error(ErrorCode::InvalidInput, "series does not cover the event");

  auto outside = [&](std::size_t i) { return std::abs(y[i] - final_value) > tol; };
  if (outside(t.size() - 1)) return std::nullopt;
  std::size_t last = t.size();
  for (std::size_t i = t.size(); i-- > i0;)
    if (outside(i)) {
      last = i;
      break;
    }
  if (last == t.size()) return 0.0;

  // Interpolate the exit between sample `last` (outside) and `last + 1` (inside).
  const double e0 = std::abs(y[last] - final_value) - tol;
  const double e1 = std::abs(y[last + 1] - final_value) - tol;
  const double f = e0 / (e0 - e1);
  return t[last] + f * (t[last + 1] - t[last]) - event_time;
}

double percent_overshoot(std::span<const double> t, std::span<const double> y, double event_time, double initial,
                         double final_value) {
  check_series(t, y);
  const double step = final_value - initial;
  if (step == 0) throw Error(ErrorCode::InvalidInput, "overshoot needs final != initial");
  double worst = 0;
  for (std::size_t i = first_at_or_after(t, event_time); i < t.size(); ++i)
    worst = std::max(worst, (y[i] - final_value) / step);
  return worst * 100.0;
}

double deviation_energy(std::span<const double> t, std::span<const double> y, double event_time, double window,
                        double final_value) {
  check_series(t, y);
  double acc = 0;
  const double t_end = event_time + window;
  for (std::size_t i = first_at_or_after(t, event_time); i + 1 < t.size() && t[i] < t_end - 1e-12; ++i) {
    const double a = y[i] - final_value;
    const double b = y[i + 1] - final_value;
    acc += 0.5 * (a * a + b * b) * (t[i + 1] - t[i]);
  }
  return acc;
}

double oscillation_energy(std::span<const double> t, std::span<const double> y, double event_time, double window,
                          double initial, double final_value) {
  check_series(t, y);
  const double sign = final_value >= initial ? 1.0 : -1.0;
  const double t_end = event_time + window;
  std::size_t i = first_at_or_after(t, event_time);
  while (i < t.size() && t[i] < t_end && sign * (y[i] - final_value) < 0) ++i;
  if (i == 0 || i >= t.size() || t[i] >= t_end) return 0.0;

  // Start exactly at the interpolated crossing.
  double acc = 0;
  if (i > first_at_or_after(t, event_time)) {
    const double a = y[i - 1] - final_value;
    const double b = y[i] - final_value;
    const double f = a / (a - b);
    acc += 0.5 * b * b * (1.0 - f) * (t[i] - t[i - 1]);
  }
  for (; i + 1 < t.size() && t[i] < t_end - 1e-12; ++i) {
    const double a = y[i] - final_value;
    const double b = y[i + 1] - final_value;
    acc += 0.5 * (a * a + b * b) * (t[i + 1] - t[i]);
  }
  return acc;
}

double window_mean(std::span<const double> t, std::span<const double> y, double from, double to) {
  check_series(t, y);
  double acc = 0;
  long n = 0;
  for (std::size_t i = first_at_or_after(t, from); i < t.size() && t[i] <= to + 1e-12; ++i) {
    acc += y[i];
    ++n;
  }
  if (n == 0) throw Error(ErrorCode::InvalidInput, "empty averaging window");
  return acc / double(n);
}

double rule_band_p() { return 5.0 * std::exp(-4.0); }
double rule_band_q() { return std::exp(-4.0); }

StepMetrics step_metrics(std::span<const double> t, std::span<const double> y, const StepWindow& w, double band) {
  check_series(t, y);
  // Restrict to [0, horizon_end] so the next event does not leak in.
  const std::size_t end = first_at_or_after(t, w.horizon_end + 1e-12);
  const auto tt = t.first(std::min(end, t.size()));
  const auto yy = y.first(tt.size());

  StepMetrics m;
  m.band = band;
  const std::size_t i0 = first_at_or_after(tt, w.event_time);
  if (i0 == 0 || i0 >= tt.size()) throw Error(ErrorCode::InvalidInput, "event not inside the series");
  m.initial = yy[i0 - 1];
  m.final_value = window_mean(tt, yy, w.horizon_end - w.final_average, w.horizon_end);
  // Disturbances have no commanded step; their band is relative to the final value.
  const double band_initial = w.reference_step != 0 ? m.initial : m.final_value;
  m.settling = settling_time(tt, yy, w.event_time, band_initial, m.final_value, band);
  if (w.rule_band > 0)
    m.settling_rule = settling_time(tt, yy, w.event_time, band_initial, m.final_value, w.rule_band);
  if (w.reference_step != 0) {
    m.overshoot_pct = percent_overshoot(tt, yy, w.event_time, m.initial, m.final_value);
    m.steady_state_error_pct = (w.reference_step - (m.final_value - m.initial)) / w.reference_step * 100.0;
  } else {
    m.overshoot_pct = std::numeric_limits<double>::quiet_NaN();
    m.steady_state_error_pct = std::numeric_limits<double>::quiet_NaN();
  }
  m.deviation_energy = deviation_energy(tt, yy, w.event_time, w.energy_window, m.final_value);
  m.oscillation_energy = oscillation_energy(tt, yy, w.event_time, w.energy_window, m.initial, m.final_value);
  return m;
}

std::vector<SegmentEstimation> estimation_metrics(const std::vector<EstimateLogEntry>& log,
                                                  const std::vector<ScenarioEvent>& events, double duration,
                                                  const EstimationOptions& opts) {
  std::vector<double> bounds{0.0};
  for (const auto& e : events)
    if (e.kind == EventKind::SetScr) bounds.push_back(e.time);
  bounds.push_back(duration);

  std::vector<SegmentEstimation> out;
  for (std::size_t s = 0; s + 1 < bounds.size(); ++s) {
    SegmentEstimation seg;
    seg.t_start = bounds[s];
    seg.t_end = bounds[s + 1];
    double r_sum = 0, l_sum = 0;
    bool truth_set = false;
    for (const auto& entry : log) {
      const auto& est = entry.estimate;
      if (est.window_end <= seg.t_start + 1e-9 || est.window_end > seg.t_end + 1e-9) continue;
      if (!truth_set) {
        seg.r_true = entry.r_g_true;
        seg.l_true = entry.l_g_true;
        truth_set = true;
      }
      const double r_err = std::abs(est.r_g_hat - entry.r_g_true) / entry.r_g_true;
      const double l_err = std::abs(est.l_g_hat - entry.l_g_true) / entry.l_g_true;

      // Windows that are not entirely inside the segment or that sit within the
      // guard interval after any event are transient.
      bool steady = est.window_start >= seg.t_start - 1e-9;
      for (const auto& e : events)
        if (est.window_end > e.time - 1e-9 && est.window_start < e.time + opts.settle_guard) steady = false;
      if (seg.t_start > 0 && est.window_start < seg.t_start + opts.settle_guard) steady = false;

      if (steady) {
        ++seg.steady_windows;
        seg.r_steady_err_max = std::max(seg.r_steady_err_max, r_err);
        seg.l_steady_err_max = std::max(seg.l_steady_err_max, l_err);
        r_sum += r_err;
        l_sum += l_err;
      } else {
        ++seg.transient_windows;
        seg.r_peak_err = std::max(seg.r_peak_err, r_err);
        seg.l_peak_err = std::max(seg.l_peak_err, l_err);
      }
      if (!seg.detection_delay && est.window_start >= seg.t_start - 1e-9 && r_err <= opts.detect_tolerance &&
          l_err <= opts.detect_tolerance)
        seg.detection_delay = est.t - seg.t_start;
    }
    if (seg.steady_windows > 0) {
      seg.r_steady_err_mean = r_sum / seg.steady_windows;
      seg.l_steady_err_mean = l_sum / seg.steady_windows;
    }
    out.push_back(seg);
  }
  return out;
}

}  // namespace vsg
