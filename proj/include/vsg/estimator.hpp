#pragma once

// Online impedance estimation: rate transition from the simulation step to the
// estimator sample period, tumbling one-cycle windows of v/i samples, and the
// hysteresis gate that decides when a new estimate reschedules the gains.

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "vsg/ann.hpp"
#include "vsg/grid_model.hpp"

namespace vsg {

struct EstimatorConfig {
  double dt_sim = 50e-6;
  double sample_period = 200e-6;
  int window = ann::kWindowSamples;

  /// Number of simulation steps per accepted sample; throws unless the
  /// sample period is an integer multiple of dt_sim.
  int decimation() const;
  double window_span() const { return double(window) * sample_period; }
};

struct EstimateRecord {
  double t = 0;  // emission time = window_end
  double r_g_hat = 0;
  double l_g_hat = 0;
  double window_start = 0;
  double window_end = 0;
};

class SampleBuffer {
 public:
  explicit SampleBuffer(int capacity);

  /// Returns true once the buffer holds `capacity` samples per channel.
  bool push(double t, double v, double i);
  void clear();

  int capacity() const { return capacity_; }
  int size() const { return fill_; }
  bool full() const { return fill_ == capacity_; }
  double first_time() const { return first_t_; }
  std::span<const double> voltage() const { return {v_.data(), std::size_t(fill_)}; }
  std::span<const double> current() const { return {i_.data(), std::size_t(fill_)}; }

 private:
  int capacity_;
  int fill_ = 0;
  double first_t_ = 0;
  std::vector<double> v_;
  std::vector<double> i_;
};

/// Maps one full window (voltage samples, current samples) to (R_g ohms, L_g henries).
using ImpedanceRegressor = std::function<std::array<double, 2>(std::span<const double>, std::span<const double>)>;

/// z-score, forward pass, de-normalize.
ImpedanceRegressor ann_regressor(ann::MlpModel model, ann::Normalizer normalizer);

/// Reports whatever impedance `truth` holds when the window completes.
ImpedanceRegressor oracle_regressor(const GridImpedance<double>* truth);

class OnlineEstimator {
 public:
  OnlineEstimator(EstimatorConfig cfg, ImpedanceRegressor regressor);

  /// Called once per simulation step. Every decimation()-th call is buffered;
  /// a full window yields one record stamped at window_start + window span.
  std::optional<EstimateRecord> push_sample(double t, double v, double i);

  /// Whether the next push_sample call lands on an accepted (decimated) sample.
  bool accepts_next() const { return pushes_ % decimation_ == 0; }

  const EstimatorConfig& config() const { return cfg_; }
  long accepted_samples() const { return accepted_; }
  long estimates() const { return emitted_; }

 private:
  EstimatorConfig cfg_;
  ImpedanceRegressor regressor_;
  SampleBuffer buffer_;
  int decimation_;
  long pushes_ = 0;
  long accepted_ = 0;
  long emitted_ = 0;
};

/// True on the first estimate or when R or L moved by more than `threshold`
/// (relative) since the last applied estimate.
bool gate_gain_update(const EstimateRecord& est, const std::optional<EstimateRecord>& last_applied,
                      double threshold = 0.05);

}  // namespace vsg
