#include "vsg/ann.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "vsg/io.hpp"

namespace vsg::ann {

const char* to_string(Activation a) {
  switch (a) {
    case Activation::Linear: return "linear";
    case Activation::Tansig: return "tansig";
  }
  return "linear";
}

Activation activation_from_string(const std::string& name) {
  if (name == "linear" || name == "purelin") return Activation::Linear;
  if (name == "tansig") return Activation::Tansig;
  throw Error(ErrorCode::InvalidInput, "unknown activation '" + name + "'");
}

double tansig(double x) {
  if (x < 0) return -tansig(-x);
  const double em = std::expm1(-2.0 * x);
  return -em / (2.0 + em);
}

namespace {

MatrixXd activate(const MatrixXd& z, Activation a) {
  if (a == Activation::Linear) return z;
  return z.unaryExpr([](double v) { return tansig(v); });
}

// Derivative expressed through the activation output.
MatrixXd activation_slope(const MatrixXd& out, Activation a) {
  if (a == Activation::Linear) return MatrixXd::Ones(out.rows(), out.cols());
  return (1.0 - out.array().square()).matrix();
}

}  // namespace

MlpModel::MlpModel(std::vector<DenseLayer> layers) : layers_(std::move(layers)) { validate(); }

MlpModel MlpModel::impedance_estimator() {
  std::vector<DenseLayer> layers;
  layers.push_back({MatrixXd::Zero(kHiddenSize, kInputSize), VectorXd::Zero(kHiddenSize), Activation::Tansig});
  layers.push_back({MatrixXd::Zero(kOutputSize, kHiddenSize), VectorXd::Zero(kOutputSize), Activation::Linear});
  return MlpModel(std::move(layers));
}

Eigen::Index MlpModel::input_size() const { return layers_.empty() ? 0 : layers_.front().inputs(); }
Eigen::Index MlpModel::output_size() const { return layers_.empty() ? 0 : layers_.back().outputs(); }

Eigen::Index MlpModel::parameter_count() const {
  Eigen::Index n = 0;
  for (const auto& l : layers_) n += l.weights.size() + l.bias.size();
  return n;
}

VectorXd MlpModel::parameters() const {
  VectorXd theta(parameter_count());
  Eigen::Index off = 0;
  for (const auto& l : layers_) {
    for (Eigen::Index o = 0; o < l.outputs(); ++o) {
      theta.segment(off, l.inputs()) = l.weights.row(o).transpose();
      off += l.inputs();
    }
    theta.segment(off, l.bias.size()) = l.bias;
    off += l.bias.size();
  }
  return theta;
}

void MlpModel::set_parameters(const VectorXd& theta) {
  if (theta.size() != parameter_count())
    throw Error(ErrorCode::DimensionMismatch, "parameter vector length does not match model");
  Eigen::Index off = 0;
  for (auto& l : layers_) {
    for (Eigen::Index o = 0; o < l.outputs(); ++o) {
      l.weights.row(o) = theta.segment(off, l.inputs()).transpose();
      off += l.inputs();
    }
    l.bias = theta.segment(off, l.bias.size());
    off += l.bias.size();
  }
}

VectorXd MlpModel::forward(const VectorXd& x) const {
  if (x.size() != input_size())
    throw Error(ErrorCode::DimensionMismatch, "input length " + std::to_string(x.size()) +
                                                  " != " + std::to_string(input_size()));
  VectorXd a = x;
  for (const auto& l : layers_) {
    VectorXd z = l.weights * a + l.bias;
    a = activate(z, l.activation);
  }
  return a;
}

MatrixXd MlpModel::forward_batch(const MatrixXd& x) const {
  if (x.cols() != input_size()) throw Error(ErrorCode::DimensionMismatch, "batch width != model inputs");
  MatrixXd a = x;
  for (const auto& l : layers_) {
    MatrixXd z = a * l.weights.transpose();
    z.rowwise() += l.bias.transpose();
    a = activate(z, l.activation);
  }
  return a;
}

void MlpModel::validate() const {
  if (layers_.empty()) throw Error(ErrorCode::DimensionMismatch, "model has no layers");
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const auto& l = layers_[i];
    if (l.bias.size() != l.outputs())
      throw Error(ErrorCode::DimensionMismatch, "bias length does not match layer outputs");
    if (i > 0 && l.inputs() != layers_[i - 1].outputs())
      throw Error(ErrorCode::DimensionMismatch, "layer widths do not chain");
    if (!l.weights.allFinite() || !l.bias.allFinite())
      throw Error(ErrorCode::NumericFailure, "non-finite model parameters");
  }
}

bool MlpModel::operator==(const MlpModel& other) const {
  if (layers_.size() != other.layers_.size()) return false;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const auto& a = layers_[i];
    const auto& b = other.layers_[i];
    if (a.activation != b.activation || a.weights.rows() != b.weights.rows() ||
        a.weights.cols() != b.weights.cols() || a.weights != b.weights || a.bias != b.bias)
      return false;
  }
  return true;
}

RowMatrixXd error_jacobian(const MlpModel& model, const MatrixXd& inputs) {
  const auto& layers = model.layers();
  const Eigen::Index n = inputs.rows();
  const Eigen::Index outs = model.output_size();
  if (n == 0) throw Error(ErrorCode::InvalidInput, "jacobian of an empty batch");
  if (inputs.cols() != model.input_size()) throw Error(ErrorCode::DimensionMismatch, "batch width != model inputs");

  // acts[0] = inputs, acts[l + 1] = output of layer l.
  std::vector<MatrixXd> acts{inputs};
  for (const auto& l : layers) {
    MatrixXd z = acts.back() * l.weights.transpose();
    z.rowwise() += l.bias.transpose();
    acts.push_back(activate(z, l.activation));
  }

  std::vector<Eigen::Index> offsets(layers.size());
  Eigen::Index off = 0;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    offsets[i] = off;
    off += layers[i].weights.size() + layers[i].bias.size();
  }

  RowMatrixXd jac = RowMatrixXd::Zero(n * outs, model.parameter_count());
  const MatrixXd out_slope = activation_slope(acts.back(), layers.back().activation);
  for (Eigen::Index k = 0; k < outs; ++k) {
    MatrixXd delta = MatrixXd::Zero(n, outs);
    delta.col(k) = out_slope.col(k);
    for (std::size_t li = layers.size(); li-- > 0;) {
      const auto& l = layers[li];
      const MatrixXd& a_in = acts[li];
      const Eigen::Index in = l.inputs();
      for (Eigen::Index s = 0; s < n; ++s) {
        auto row = jac.row(s * outs + k);
        for (Eigen::Index o = 0; o < l.outputs(); ++o) {
          const double d = delta(s, o);
          if (d == 0.0) continue;
          row.segment(offsets[li] + o * in, in) = d * a_in.row(s);
          row(offsets[li] + l.weights.size() + o) = d;
        }
      }
      if (li > 0) {
        delta = (delta * l.weights).cwiseProduct(activation_slope(acts[li], layers[li - 1].activation));
      }
    }
  }
  return jac;
}

VectorXd residuals(const MlpModel& model, const MatrixXd& inputs, const MatrixXd& targets) {
  if (targets.rows() != inputs.rows() || targets.cols() != model.output_size())
    throw Error(ErrorCode::DimensionMismatch, "targets do not match batch");
  const RowMatrixXd diff = model.forward_batch(inputs) - targets;
  return Eigen::Map<const VectorXd>(diff.data(), diff.size());
}

double mse(const MlpModel& model, const MatrixXd& inputs, const MatrixXd& targets) {
  if (inputs.rows() == 0) return 0.0;
  return residuals(model, inputs, targets).squaredNorm() / double(targets.size());
}

VectorXd damped_step(const MatrixXd& jtj, const VectorXd& jtr, double mu) {
  if (!(mu > 0)) throw Error(ErrorCode::InvalidInput, "damping must be positive");
  MatrixXd h = jtj;
  h.diagonal().array() += mu;
  Eigen::LLT<MatrixXd, Eigen::Lower> llt(h);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorCode::NumericFailure, "damped normal equations are not positive definite");
  VectorXd step = llt.solve(-jtr);
  if (!step.allFinite()) throw Error(ErrorCode::NumericFailure, "non-finite LM step");
  return step;
}

namespace {

struct NormalEquations {
  MatrixXd jtj;  // lower triangle valid
  VectorXd jtr;
};

NormalEquations normal_equations(const MlpModel& model, const MatrixXd& inputs, const VectorXd& r) {
  const RowMatrixXd jac = error_jacobian(model, inputs);
  NormalEquations ne;
  ne.jtj = MatrixXd::Zero(jac.cols(), jac.cols());
  ne.jtj.selfadjointView<Eigen::Lower>().rankUpdate(jac.transpose());
  ne.jtr = jac.transpose() * r;
  return ne;
}

}  // namespace

MlpModel lm_step(const MlpModel& model, const MatrixXd& inputs, const MatrixXd& targets, double mu) {
  const VectorXd r = residuals(model, inputs, targets);
  const NormalEquations ne = normal_equations(model, inputs, r);
  MlpModel out = model;
  out.set_parameters(model.parameters() + damped_step(ne.jtj, ne.jtr, mu));
  return out;
}

VectorXd zscore(const VectorXd& x, const VectorXd& mean, const VectorXd& std) {
  if (x.size() != mean.size() || x.size() != std.size())
    throw Error(ErrorCode::DimensionMismatch, "zscore length mismatch");
  if ((std.array() <= 0).any()) throw Error(ErrorCode::Normalization, "standard deviation must be positive");
  return ((x - mean).array() / std.array()).matrix();
}

VectorXd zscore_inverse(const VectorXd& z, const VectorXd& mean, const VectorXd& std) {
  if (z.size() != mean.size() || z.size() != std.size())
    throw Error(ErrorCode::DimensionMismatch, "zscore length mismatch");
  return (z.array() * std.array() + mean.array()).matrix();
}

namespace {

void column_stats(const MatrixXd& m, VectorXd& mean, VectorXd& std, const char* what) {
  if (m.rows() < 2) throw Error(ErrorCode::Normalization, "need at least two rows to fit statistics");
  mean = m.colwise().mean().transpose();
  std = ((m.rowwise() - mean.transpose()).colwise().squaredNorm() / double(m.rows() - 1))
            .cwiseSqrt()
            .transpose();
  for (Eigen::Index j = 0; j < std.size(); ++j)
    if (!(std(j) > 0))
      throw Error(ErrorCode::Normalization, std::string("constant ") + what + " column " + std::to_string(j));
}

}  // namespace

Normalizer Normalizer::fit(const MatrixXd& inputs, const MatrixXd& targets) {
  Normalizer n;
  column_stats(inputs, n.input_mean, n.input_std, "input");
  column_stats(targets, n.target_mean, n.target_std, "target");
  return n;
}

Normalizer Normalizer::identity(Eigen::Index inputs, Eigen::Index outputs) {
  return {VectorXd::Zero(inputs), VectorXd::Ones(inputs), VectorXd::Zero(outputs), VectorXd::Ones(outputs)};
}

MatrixXd Normalizer::normalize_inputs(const MatrixXd& x) const {
  if (x.cols() != input_mean.size()) throw Error(ErrorCode::DimensionMismatch, "input width mismatch");
  return ((x.rowwise() - input_mean.transpose()).array().rowwise() / input_std.transpose().array()).matrix();
}

MatrixXd Normalizer::normalize_targets(const MatrixXd& y) const {
  if (y.cols() != target_mean.size()) throw Error(ErrorCode::DimensionMismatch, "target width mismatch");
  return ((y.rowwise() - target_mean.transpose()).array().rowwise() / target_std.transpose().array()).matrix();
}

MatrixXd Normalizer::denormalize_targets(const MatrixXd& y) const {
  if (y.cols() != target_mean.size()) throw Error(ErrorCode::DimensionMismatch, "target width mismatch");
  return ((y.array().rowwise() * target_std.transpose().array()).rowwise() + target_mean.transpose().array())
      .matrix();
}

void Normalizer::validate() const {
  if (input_mean.size() != input_std.size() || target_mean.size() != target_std.size())
    throw Error(ErrorCode::DimensionMismatch, "normalizer vectors disagree in length");
  if ((input_std.array() <= 0).any() || (target_std.array() <= 0).any())
    throw Error(ErrorCode::Normalization, "normalizer standard deviations must be positive");
}

bool Normalizer::operator==(const Normalizer& o) const {
  return input_mean.size() == o.input_mean.size() && target_mean.size() == o.target_mean.size() &&
         input_mean == o.input_mean && input_std == o.input_std && target_mean == o.target_mean &&
         target_std == o.target_std;
}

void TrainConfig::validate() const {
  if (max_epochs < 1 || !(goal_mse >= 0) || !(mu_initial > 0) || !(mu_max > mu_initial) ||
      !(mu_min > 0) || validation_patience < 1 || hidden_units < 0 || histogram_bins < 1 ||
      !(init_scale > 0))
    throw Error(ErrorCode::InvalidInput, "invalid training configuration");
  if (!(mu_decrease > 0 && mu_decrease < 1 && mu_increase > 1))
    throw Error(ErrorCode::InvalidInput, "LM damping factors must satisfy 0 < decrease < 1 < increase");
}

std::uint64_t TrainConfig::fingerprint() const {
  // FNV-1a over the textual form of each field.
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
    h ^= 0xff;
    h *= 1099511628211ull;
  };
  mix(std::to_string(max_epochs));
  mix(io::format_fixed(goal_mse));
  mix(io::format_fixed(mu_initial));
  mix(io::format_fixed(mu_decrease));
  mix(io::format_fixed(mu_increase));
  mix(io::format_fixed(mu_max));
  mix(io::format_fixed(mu_min));
  mix(std::to_string(validation_patience));
  mix(io::format_fixed(init_scale));
  mix(std::to_string(seed));
  mix(std::to_string(hidden_units));
  mix(std::to_string(histogram_bins));
  return h;
}

MlpModel initialize(Eigen::Index inputs, Eigen::Index hidden, Eigen::Index outputs, double scale,
                    std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-scale, scale);
  auto layer = [&](Eigen::Index in, Eigen::Index out, Activation act) {
    const double s = 1.0 / std::sqrt(double(in));
    DenseLayer l{MatrixXd(out, in), VectorXd(out), act};
    for (Eigen::Index i = 0; i < out; ++i)
      for (Eigen::Index j = 0; j < in; ++j) l.weights(i, j) = u(rng) * s;
    for (Eigen::Index i = 0; i < out; ++i) l.bias(i) = u(rng) * s;
    return l;
  };
  std::vector<DenseLayer> layers;
  if (hidden > 0) {
    layers.push_back(layer(inputs, hidden, Activation::Tansig));
    layers.push_back(layer(hidden, outputs, Activation::Linear));
  } else {
    layers.push_back(layer(inputs, outputs, Activation::Linear));
  }
  return MlpModel(std::move(layers));
}

TrainReport train_normalized(MlpModel& model, const Split& train, const Split& val, const Split& test,
                             const TrainConfig& cfg) {
  cfg.validate();
  if (train.rows() == 0 || val.rows() == 0 || test.rows() == 0)
    throw Error(ErrorCode::EmptySplit, "every split must be nonempty");

  TrainReport rep;
  VectorXd theta = model.parameters();
  VectorXd r = residuals(model, train.inputs, train.targets);
  double train_err = r.squaredNorm() / double(r.size());
  double best_val = mse(model, val.inputs, val.targets);
  VectorXd best_theta = theta;
  double mu = cfg.mu_initial;
  int fails = 0;

  if (train_err <= cfg.goal_mse) rep.stop_reason = "goal";

  for (int epoch = 1; epoch <= cfg.max_epochs && rep.stop_reason.empty(); ++epoch) {
    const NormalEquations ne = normal_equations(model, train.inputs, r);
    const double grad = 2.0 * ne.jtr.norm() / double(r.size());

    bool accepted = false;
    while (mu <= cfg.mu_max) {
      VectorXd step;
      try {
        step = damped_step(ne.jtj, ne.jtr, mu);
      } catch (const Error&) {
        mu *= cfg.mu_increase;
        continue;
      }
      MlpModel candidate = model;
      candidate.set_parameters(theta + step);
      const VectorXd rc = residuals(candidate, train.inputs, train.targets);
      const double err = rc.squaredNorm() / double(rc.size());
      if (std::isfinite(err) && err < train_err) {
        model = std::move(candidate);
        theta += step;
        r = rc;
        train_err = err;
        mu = std::max(mu * cfg.mu_decrease, cfg.mu_min);
        accepted = true;
        break;
      }
      mu *= cfg.mu_increase;
    }

    const double val_err = mse(model, val.inputs, val.targets);
    const double test_err = mse(model, test.inputs, test.targets);
    if (!std::isfinite(train_err) || !std::isfinite(val_err))
      throw TrainingError("non-finite loss at epoch " + std::to_string(epoch), rep);

    if (accepted) {
      if (val_err < best_val) {
        best_val = val_err;
        best_theta = theta;
        rep.best_epoch = epoch;
        fails = 0;
      } else {
        ++fails;
      }
    }

    rep.train_mse.push_back(train_err);
    rep.val_mse.push_back(val_err);
    rep.test_mse.push_back(test_err);
    rep.gradient.push_back(grad);
    rep.mu.push_back(mu);
    rep.validation_checks.push_back(fails);
    rep.epochs = epoch;

    if (!accepted) rep.stop_reason = "mu_max";
    else if (train_err <= cfg.goal_mse) rep.stop_reason = "goal";
    else if (fails >= cfg.validation_patience) rep.stop_reason = "validation";
  }
  if (rep.stop_reason.empty()) rep.stop_reason = "max_epochs";

  // Goal reached on the last accepted step keeps those weights; otherwise
  // fall back to the best validation point.
  if (rep.stop_reason != "goal") model.set_parameters(best_theta);
  else rep.best_epoch = rep.epochs;
  return rep;
}

Histogram error_histogram(const std::vector<double>& errors, double lo, double hi, int bins) {
  if (bins < 1) throw Error(ErrorCode::InvalidInput, "histogram needs at least one bin");
  if (!(hi > lo)) {
    const double half = std::max(std::abs(lo), 1.0) * 0.5;
    lo -= half;
    hi += half;
  }
  Histogram h;
  h.edges.resize(std::size_t(bins) + 1);
  for (int i = 0; i <= bins; ++i) h.edges[std::size_t(i)] = lo + (hi - lo) * double(i) / double(bins);
  h.counts.assign(std::size_t(bins), 0);
  for (double e : errors) {
    auto idx = static_cast<long>(std::floor((e - lo) / (hi - lo) * bins));
    idx = std::clamp(idx, 0L, long(bins) - 1);
    ++h.counts[std::size_t(idx)];
  }
  return h;
}

RegressionFit regression(const std::vector<std::pair<double, double>>& pts) {
  RegressionFit fit;
  if (pts.size() < 2) return fit;
  double mt = 0, mo = 0;
  for (const auto& [t, o] : pts) {
    mt += t;
    mo += o;
  }
  mt /= double(pts.size());
  mo /= double(pts.size());
  double stt = 0, soo = 0, sto = 0;
  for (const auto& [t, o] : pts) {
    stt += (t - mt) * (t - mt);
    soo += (o - mo) * (o - mo);
    sto += (t - mt) * (o - mo);
  }
  if (stt > 0) {
    fit.slope = sto / stt;
    fit.intercept = mo - fit.slope * mt;
  }
  if (stt > 0 && soo > 0) fit.r = sto / std::sqrt(stt * soo);
  else if (stt > 0 && soo == 0) fit.r = 0;
  else fit.r = 1;
  // A perfect fit of a constant target collapses to slope 1 by convention.
  if (stt == 0 && soo == 0) {
    fit.slope = 1;
    fit.intercept = mo - mt;
  }
  return fit;
}

namespace {

std::vector<std::pair<double, double>> scatter(const MlpModel& model, const Split& s) {
  const MatrixXd out = model.forward_batch(s.inputs);
  std::vector<std::pair<double, double>> pts;
  pts.reserve(std::size_t(out.size()));
  for (Eigen::Index i = 0; i < out.rows(); ++i)
    for (Eigen::Index k = 0; k < out.cols(); ++k) pts.emplace_back(s.targets(i, k), out(i, k));
  return pts;
}

}  // namespace

TrainResult train(const Split& train, const Split& val, const Split& test, const TrainConfig& cfg) {
  cfg.validate();
  if (train.rows() == 0 || val.rows() == 0 || test.rows() == 0)
    throw Error(ErrorCode::EmptySplit, "every split must be nonempty");

  TrainResult res;
  res.normalizer = Normalizer::fit(train.inputs, train.targets);
  auto norm = [&](const Split& s) {
    return Split{res.normalizer.normalize_inputs(s.inputs), res.normalizer.normalize_targets(s.targets)};
  };
  const Split ntrain = norm(train), nval = norm(val), ntest = norm(test);

  res.model = initialize(train.inputs.cols(), cfg.hidden_units, train.targets.cols(), cfg.init_scale, cfg.seed);
  res.report = train_normalized(res.model, ntrain, nval, ntest, cfg);

  auto& rep = res.report;
  rep.train_scatter = scatter(res.model, ntrain);
  rep.val_scatter = scatter(res.model, nval);
  rep.test_scatter = scatter(res.model, ntest);

  auto errors = [](const std::vector<std::pair<double, double>>& pts) {
    std::vector<double> e;
    e.reserve(pts.size());
    for (const auto& [t, o] : pts) e.push_back(t - o);
    return e;
  };
  const auto e_train = errors(rep.train_scatter), e_val = errors(rep.val_scatter), e_test = errors(rep.test_scatter);
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto* v : {&e_train, &e_val, &e_test})
    for (double e : *v) {
      lo = std::min(lo, e);
      hi = std::max(hi, e);
    }
  rep.train_hist = error_histogram(e_train, lo, hi, cfg.histogram_bins);
  rep.val_hist = error_histogram(e_val, lo, hi, cfg.histogram_bins);
  rep.test_hist = error_histogram(e_test, lo, hi, cfg.histogram_bins);
  rep.train_fit = regression(rep.train_scatter);
  rep.val_fit = regression(rep.val_scatter);
  rep.test_fit = regression(rep.test_scatter);
  return res;
}

void export_diagnostics(const TrainReport& rep, const std::string& dir) {
  io::ensure_directory(dir);
  {
    io::CsvWriter w(io::join_path(dir, "training_progress.csv"),
                    {"epoch", "train_mse", "val_mse", "test_mse", "gradient", "mu", "validation_checks"});
    for (std::size_t i = 0; i < rep.train_mse.size(); ++i) {
      w.cell(static_cast<long long>(i + 1)).cell(rep.train_mse[i]).cell(rep.val_mse[i]).cell(rep.test_mse[i]);
      w.cell(rep.gradient[i]).cell(rep.mu[i]).cell(static_cast<long long>(rep.validation_checks[i]));
      w.end_row();
    }
  }
  {
    io::CsvWriter w(io::join_path(dir, "error_histogram.csv"), {"split", "bin_lo", "bin_hi", "count"});
    auto emit = [&](const char* name, const Histogram& h) {
      for (std::size_t b = 0; b < h.counts.size(); ++b) {
        w.cell(name).cell(h.edges[b]).cell(h.edges[b + 1]).cell(static_cast<long long>(h.counts[b]));
        w.end_row();
      }
    };
    emit("train", rep.train_hist);
    emit("validation", rep.val_hist);
    emit("test", rep.test_hist);
  }
  {
    io::CsvWriter w(io::join_path(dir, "regression.csv"), {"split", "slope", "intercept", "r"});
    auto emit = [&](const char* name, const RegressionFit& f) {
      w.cell(name).cell(f.slope).cell(f.intercept).cell(f.r);
      w.end_row();
    };
    emit("train", rep.train_fit);
    emit("validation", rep.val_fit);
    emit("test", rep.test_fit);
  }
  {
    io::CsvWriter w(io::join_path(dir, "regression_scatter.csv"), {"split", "target", "output"});
    auto emit = [&](const char* name, const std::vector<std::pair<double, double>>& pts) {
      for (const auto& [t, o] : pts) {
        w.cell(name).cell(t).cell(o);
        w.end_row();
      }
    };
    emit("train", rep.train_scatter);
    emit("validation", rep.val_scatter);
    emit("test", rep.test_scatter);
  }
}

}  // namespace vsg::ann
