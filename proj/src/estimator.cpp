#include "vsg/estimator.hpp"

#include <cmath>

namespace vsg {

int EstimatorConfig::decimation() const {
  if (!(dt_sim > 0) || !(sample_period > 0) || window < 1)
    throw Error(ErrorCode::InvalidInput, "estimator periods and window must be positive");
  const double ratio = sample_period / dt_sim;
  const long k = std::lround(ratio);
  if (k < 1 || std::abs(ratio - double(k)) > 1e-9 * ratio)
    throw Error(ErrorCode::InvalidInput, "estimator sample period must be an integer multiple of dt_sim");
  return int(k);
}

SampleBuffer::SampleBuffer(int capacity) : capacity_(capacity), v_(std::size_t(capacity)), i_(std::size_t(capacity)) {
  if (capacity < 1) throw Error(ErrorCode::InvalidInput, "buffer capacity must be positive");
}

bool SampleBuffer::push(double t, double v, double i) {
  if (full()) clear();
  if (fill_ == 0) first_t_ = t;
  v_[std::size_t(fill_)] = v;
  i_[std::size_t(fill_)] = i;
  ++fill_;
  return full();
}

void SampleBuffer::clear() { fill_ = 0; }

ImpedanceRegressor ann_regressor(ann::MlpModel model, ann::Normalizer normalizer) {
  model.validate();
  normalizer.validate();
  if (model.input_size() != normalizer.input_mean.size() || model.output_size() != 2)
    throw Error(ErrorCode::DimensionMismatch, "model and normalizer do not describe an impedance estimator");
  return [model = std::move(model), norm = std::move(normalizer)](std::span<const double> v,
                                                                  std::span<const double> i) {
    Eigen::VectorXd x(Eigen::Index(v.size() + i.size()));
    if (x.size() != model.input_size()) throw Error(ErrorCode::DimensionMismatch, "window length != model inputs");
    for (std::size_t k = 0; k < v.size(); ++k) x(Eigen::Index(k)) = v[k];
    for (std::size_t k = 0; k < i.size(); ++k) x(Eigen::Index(v.size() + k)) = i[k];
    const Eigen::VectorXd y =
        ann::zscore_inverse(model.forward(ann::zscore(x, norm.input_mean, norm.input_std)), norm.target_mean,
                            norm.target_std);
    return std::array<double, 2>{y(0), y(1)};
  };
}

ImpedanceRegressor oracle_regressor(const GridImpedance<double>* truth) {
  return [truth](std::span<const double>, std::span<const double>) {
    return std::array<double, 2>{truth->r_g, truth->l_g};
  };
}

OnlineEstimator::OnlineEstimator(EstimatorConfig cfg, ImpedanceRegressor regressor)
    : cfg_(cfg), regressor_(std::move(regressor)), buffer_(cfg.window), decimation_(cfg.decimation()) {}

std::optional<EstimateRecord> OnlineEstimator::push_sample(double t, double v, double i) {
  const bool take = pushes_ % decimation_ == 0;
  ++pushes_;
  if (!take) return std::nullopt;
  if (!std::isfinite(v) || !std::isfinite(i)) {
    buffer_.clear();
    return std::nullopt;
  }
  ++accepted_;
  if (!buffer_.push(t, v, i)) return std::nullopt;

  const auto [r, l] = regressor_(buffer_.voltage(), buffer_.current());
  const double start = buffer_.first_time();
  buffer_.clear();
  if (!std::isfinite(r) || !std::isfinite(l)) return std::nullopt;
  ++emitted_;
  const double end = start + cfg_.window_span();
  return EstimateRecord{end, r, l, start, end};
}

bool gate_gain_update(const EstimateRecord& est, const std::optional<EstimateRecord>& last, double threshold) {
  if (!last) return true;
  auto rel = [](double now, double before) {
    const double scale = std::abs(before);
    return scale > 0 ? std::abs(now - before) / scale : (now == before ? 0.0 : INFINITY);
  };
  return std::max(rel(est.r_g_hat, last->r_g_hat), rel(est.l_g_hat, last->l_g_hat)) > threshold;
}

}  // namespace vsg
