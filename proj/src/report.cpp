#include "vsg/report.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "vsg/io.hpp"

namespace vsg {

namespace {

const std::vector<std::string> kSeriesHeader{"t",        "p_pcc",    "q_pcc",    "delta", "omega",
                                             "v_cmd",    "r_g_true", "l_g_true", "r_g_est", "l_g_est",
                                             "d_p",      "k_ip",     "d_q",      "k_iq"};

std::string fmt(double v, int digits) {
  if (!std::isfinite(v)) return std::isnan(v) ? "-" : (v > 0 ? "inf" : "-inf");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string fmt(const std::optional<double>& v, int digits) { return v ? fmt(*v, digits) : "n/s"; }

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? " " + s : std::string(width - s.size(), ' ') + s;
}

}  // namespace

void write_timeseries_csv(const TimeSeries& ts, const std::string& path) {
  io::CsvWriter w(path, kSeriesHeader);
  for (const auto& r : ts.rows) {
    for (double v : {r.t, r.p_pcc, r.q_pcc, r.delta, r.omega, r.v_cmd, r.r_g_true, r.l_g_true, r.r_g_est, r.l_g_est,
                     r.d_p, r.k_ip, r.d_q, r.k_iq})
      w.cell(v);
    w.end_row();
  }
}

TimeSeries read_timeseries_csv(const std::string& path) {
  const io::CsvTable t = io::read_csv(path);
  if (t.header != kSeriesHeader) throw Error(ErrorCode::Io, path + ": unexpected time-series columns");
  TimeSeries ts;
  ts.rows.reserve(t.rows.size());
  for (const auto& row : t.rows) {
    double v[14];
    for (std::size_t c = 0; c < 14; ++c) v[c] = io::parse_double(row[c]);
    ts.rows.push_back({v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8], v[9], v[10], v[11], v[12], v[13]});
  }
  for (std::size_t i = 1; i < ts.rows.size(); ++i)
    if (!(ts.rows[i].t > ts.rows[i - 1].t)) throw Error(ErrorCode::Io, path + ": time column is not increasing");
  if (ts.rows.size() > 1) ts.dt = ts.rows[1].t - ts.rows[0].t;
  return ts;
}

void write_estimates_csv(const std::vector<EstimateLogEntry>& log, const std::string& path) {
  io::CsvWriter w(path, {"t", "r_g_hat", "l_g_hat", "r_g_true", "l_g_true", "applied"});
  for (const auto& e : log) {
    w.cell(e.estimate.t).cell(e.estimate.r_g_hat).cell(e.estimate.l_g_hat).cell(e.r_g_true).cell(e.l_g_true);
    w.cell(static_cast<long long>(e.applied ? 1 : 0));
    w.end_row();
  }
}

std::vector<EstimateLogEntry> read_estimates_csv(const std::string& path, double window_span) {
  const io::CsvTable t = io::read_csv(path);
  if (t.header != std::vector<std::string>{"t", "r_g_hat", "l_g_hat", "r_g_true", "l_g_true", "applied"})
    throw Error(ErrorCode::Io, path + ": unexpected estimate-log columns");
  std::vector<EstimateLogEntry> out;
  for (const auto& row : t.rows) {
    EstimateLogEntry e;
    e.estimate.t = io::parse_double(row[0]);
    e.estimate.r_g_hat = io::parse_double(row[1]);
    e.estimate.l_g_hat = io::parse_double(row[2]);
    e.estimate.window_end = e.estimate.t;
    e.estimate.window_start = e.estimate.t - window_span;
    e.r_g_true = io::parse_double(row[3]);
    e.l_g_true = io::parse_double(row[4]);
    e.applied = row[5] == "1";
    out.push_back(e);
  }
  return out;
}

void write_gain_updates_csv(const std::vector<GainUpdate>& updates, const std::string& path) {
  io::CsvWriter w(path, {"t", "r_g_design", "l_g_design", "d_p", "k_ip", "d_q", "k_iq"});
  for (const auto& u : updates) {
    w.cell(u.t).cell(u.impedance.r_g).cell(u.impedance.l_g);
    w.cell(u.gains.d_p).cell(u.gains.k_ip).cell(u.gains.d_q).cell(u.gains.k_iq);
    w.end_row();
  }
}

Signal event_signal(const ScenarioEvent& e) { return e.kind == EventKind::SetQRef ? Signal::Q : Signal::P; }

std::vector<double> signal_column(const TimeSeries& ts, Signal s) {
  std::vector<double> out;
  out.reserve(ts.rows.size());
  for (const auto& r : ts.rows) out.push_back(s == Signal::P ? r.p_pcc : r.q_pcc);
  return out;
}

std::vector<double> time_column(const TimeSeries& ts) {
  std::vector<double> out;
  out.reserve(ts.rows.size());
  for (const auto& r : ts.rows) out.push_back(r.t);
  return out;
}

std::vector<double> scr_after_events(const std::vector<ScenarioEvent>& events, double initial_scr) {
  std::vector<double> out;
  double scr = initial_scr;
  for (const auto& e : events) {
    if (e.kind == EventKind::SetScr) scr = e.value;
    out.push_back(scr);
  }
  return out;
}

StepMetrics event_metrics(const TimeSeries& ts, const std::vector<ScenarioEvent>& events, std::size_t index,
                          const EvaluationConfig& eval) {
  if (index >= events.size() || ts.rows.empty()) throw Error(ErrorCode::InvalidInput, "event index out of range");
  const ScenarioEvent& e = events[index];
  StepWindow w;
  w.event_time = e.time;
  w.horizon_end = ts.rows.back().t;
  for (std::size_t k = index + 1; k < events.size(); ++k)
    if (events[k].time > e.time) {
      w.horizon_end = std::min(w.horizon_end, events[k].time);
      break;
    }
  w.energy_window = eval.energy_window;
  w.final_average = eval.final_average;
  const Signal sig = event_signal(e);
  w.rule_band = sig == Signal::P ? rule_band_p() : rule_band_q();

  // The commanded change is the difference to the previous value of the same reference.
  if (e.kind != EventKind::SetScr) {
    double previous = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t k = index; k-- > 0;)
      if (events[k].kind == e.kind) {
        previous = events[k].value;
        break;
      }
    w.reference_step = std::isnan(previous) ? 0.0 : e.value - previous;
  }
  const auto t = time_column(ts);
  const auto y = signal_column(ts, sig);
  return step_metrics(t, y, w, eval.settling_band);
}

ComparisonReport compare_runs(const TimeSeries* cvsg, const TimeSeries* avsg,
                              const std::vector<EstimateLogEntry>* avsg_estimates, const TimeSeries* avsg_weak,
                              const ProjectConfig& cfg) {
  const auto& events = cfg.events;
  const auto& eval = cfg.evaluation;

  // Setpoint steps need the initial reference to know the commanded change.
  std::vector<ScenarioEvent> ext;
  ext.push_back({0.0, EventKind::SetPRef, cfg.sim.p_ref0, 5.0});
  ext.push_back({0.0, EventKind::SetQRef, cfg.sim.q_ref0, 5.0});
  ext.insert(ext.end(), events.begin(), events.end());
  const std::vector<ScenarioEvent> weak_ext = [&] {
    std::vector<ScenarioEvent> w;
    for (const auto& e : ext)
      if (e.kind != EventKind::SetScr) w.push_back(e);
    return w;
  }();
  const auto scr = scr_after_events(events, cfg.sim.grid.initial_scr);

  ComparisonReport rep;
  rep.target_ts = cfg.sim.targets.t_s;
  rep.evaluation = eval;
  rep.avsg_pass = avsg != nullptr;
  for (std::size_t i = 0; i < events.size(); ++i) {
    EventComparison c;
    c.event = events[i];
    c.signal = event_signal(events[i]);
    c.scr = scr[i];
    if (cvsg) c.cvsg = event_metrics(*cvsg, ext, i + 2, eval);
    if (avsg) c.avsg = event_metrics(*avsg, ext, i + 2, eval);
    c.judged = events[i].kind != EventKind::SetScr;
    if (c.judged && c.avsg) {
      const auto& m = *c.avsg;
      const bool ts_ok = m.settling_rule &&
                         std::abs(*m.settling_rule - rep.target_ts) <= eval.ts_tolerance * rep.target_ts;
      const bool os_ok = m.overshoot_pct <= eval.overshoot_tolerance_pct;
      c.avsg_within_targets = ts_ok && os_ok;
      rep.avsg_pass = rep.avsg_pass && c.avsg_within_targets;

      // Weak-grid reference: the first step of the same kind before any SCR
      // change in this run, otherwise the same event in the weak-grid run.
      std::optional<StepMetrics> ref;
      for (std::size_t k = 0; k < events.size() && events[k].kind != EventKind::SetScr; ++k)
        if (events[k].kind == events[i].kind) {
          ref = event_metrics(*avsg, ext, k + 2, eval);
          break;
        }
      if (!ref && avsg_weak) {
        for (std::size_t k = 0; k < weak_ext.size(); ++k)
          if (weak_ext[k] == events[i]) ref = event_metrics(*avsg_weak, weak_ext, k, eval);
      }
      if (ref) {
        if (ref->settling && m.settling) c.ts_deviation = (*m.settling - *ref->settling) / *ref->settling;
        if (ref->settling_rule && m.settling_rule)
          c.ts_rule_deviation = (*m.settling_rule - *ref->settling_rule) / *ref->settling_rule;
        c.overshoot_deviation_pp = m.overshoot_pct - ref->overshoot_pct;
      }
    }
    rep.events.push_back(c);
  }
  if (avsg_estimates) rep.estimation = estimation_metrics(*avsg_estimates, events, cfg.sim.duration, eval.estimation);
  return rep;
}

std::string report_to_text(const ComparisonReport& rep) {
  std::ostringstream o;
  o << "CVSG vs AVSG step metrics (band " << fmt(rep.evaluation.settling_band * 100, 1)
    << "%, rule band for the 4/(xi wn) settling time, target Ts " << fmt(rep.target_ts, 3) << " s)\n";
  o << "  time  event        scr   sig | mode  ts_band   ts_rule  overshoot%  ss_err%  dev_energy     osc_energy\n";
  for (const auto& c : rep.events) {
    auto line = [&](const char* mode, const std::optional<StepMetrics>& m) {
      if (!m) return;
      char head[96];
      std::snprintf(head, sizeof head, "%6.2f  %-11s %5.1f  %-3s | %-4s", c.event.time, to_string(c.event.kind),
                    c.scr, c.signal == Signal::P ? "P" : "Q", mode);
      o << head << pad(fmt(m->settling, 4), 9) << pad(fmt(m->settling_rule, 4), 10)
        << pad(fmt(m->overshoot_pct, 3), 12) << pad(fmt(m->steady_state_error_pct, 3), 9)
        << pad(fmt(m->deviation_energy, 1), 12) << pad(fmt(m->oscillation_energy, 3), 15) << "\n";
    };
    line("cvsg", c.cvsg);
    line("avsg", c.avsg);
  }
  o << "\nAVSG against design targets and the weak-grid step of the same kind\n";
  for (const auto& c : rep.events) {
    if (!c.judged || !c.avsg) continue;
    char buf[256];
    std::snprintf(buf, sizeof buf, "  %6.2f %-11s targets %-4s  ts dev %s%%  ts_rule dev %s%%  overshoot dev %s pp\n",
                  c.event.time, to_string(c.event.kind), c.avsg_within_targets ? "met" : "MISS",
                  fmt(c.ts_deviation ? std::optional<double>(*c.ts_deviation * 100) : std::nullopt, 2).c_str(),
                  fmt(c.ts_rule_deviation ? std::optional<double>(*c.ts_rule_deviation * 100) : std::nullopt, 2).c_str(),
                  fmt(c.overshoot_deviation_pp, 3).c_str());
    o << buf;
  }
  o << "  overall: " << (rep.avsg_pass ? "PASS" : "FAIL") << " (ts within " << fmt(rep.evaluation.ts_tolerance * 100, 1)
    << "% of target, overshoot <= " << fmt(rep.evaluation.overshoot_tolerance_pct, 2) << "%)\n";

  if (!rep.estimation.empty()) {
    o << "\nImpedance estimation per constant-impedance segment (relative errors)\n";
    o << "   start    end   R_true     L_true      steady  R_max   L_max   R_mean  L_mean | transient  R_peak  L_peak | delay\n";
    for (const auto& s : rep.estimation) {
      char buf[256];
      std::snprintf(buf, sizeof buf,
                    "  %6.2f %6.2f  %8.5f  %9.6f  %6d  %6.4f  %6.4f  %6.4f  %6.4f | %9d  %6.4f  %6.4f | %s\n", s.t_start,
                    s.t_end, s.r_true, s.l_true, s.steady_windows, s.r_steady_err_max, s.l_steady_err_max,
                    s.r_steady_err_mean, s.l_steady_err_mean, s.transient_windows, s.r_peak_err, s.l_peak_err,
                    fmt(s.detection_delay, 4).c_str());
      o << buf;
    }
  }
  return o.str();
}

void write_report_csv(const ComparisonReport& rep, const std::string& path) {
  io::CsvWriter w(path, {"time", "event", "value", "scr", "signal", "mode", "settling_s", "settling_rule_s",
                         "overshoot_pct", "steady_state_error_pct", "deviation_energy", "oscillation_energy",
                         "within_targets", "ts_deviation", "ts_rule_deviation", "overshoot_deviation_pp"});
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& c : rep.events) {
    for (int mode = 0; mode < 2; ++mode) {
      const auto& m = mode == 0 ? c.cvsg : c.avsg;
      if (!m) continue;
      w.cell(c.event.time).cell(to_string(c.event.kind)).cell(c.event.value).cell(c.scr);
      w.cell(c.signal == Signal::P ? "P" : "Q").cell(mode == 0 ? "cvsg" : "avsg");
      w.cell(m->settling.value_or(nan)).cell(m->settling_rule.value_or(nan)).cell(m->overshoot_pct);
      w.cell(m->steady_state_error_pct).cell(m->deviation_energy).cell(m->oscillation_energy);
      if (mode == 1 && c.judged) {
        w.cell(static_cast<long long>(c.avsg_within_targets ? 1 : 0));
        w.cell(c.ts_deviation.value_or(nan)).cell(c.ts_rule_deviation.value_or(nan));
        w.cell(c.overshoot_deviation_pp.value_or(nan));
      } else {
        w.cell("").cell(nan).cell(nan).cell(nan);
      }
      w.end_row();
    }
  }
}

void write_estimation_csv(const ComparisonReport& rep, const std::string& path) {
  io::CsvWriter w(path, {"t_start", "t_end", "r_true", "l_true", "steady_windows", "r_steady_err_max",
                         "l_steady_err_max", "r_steady_err_mean", "l_steady_err_mean", "transient_windows",
                         "r_peak_err", "l_peak_err", "detection_delay"});
  for (const auto& s : rep.estimation) {
    w.cell(s.t_start).cell(s.t_end).cell(s.r_true).cell(s.l_true).cell(static_cast<long long>(s.steady_windows));
    w.cell(s.r_steady_err_max).cell(s.l_steady_err_max).cell(s.r_steady_err_mean).cell(s.l_steady_err_mean);
    w.cell(static_cast<long long>(s.transient_windows)).cell(s.r_peak_err).cell(s.l_peak_err);
    w.cell(s.detection_delay.value_or(std::numeric_limits<double>::quiet_NaN()));
    w.end_row();
  }
}

}  // namespace vsg
