#pragma once

// Small fully connected regression network trained with Levenberg-Marquardt.
// The impedance estimator uses 200 inputs (100 voltage then 100 current
// samples), 8 tansig hidden units and 2 linear outputs (R_g, L_g); the layer
// container is general so the trainer can be checked on linear models.

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vsg/error.hpp"

namespace vsg::ann {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using RowMatrixXd = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline constexpr int kWindowSamples = 100;
inline constexpr int kInputSize = 2 * kWindowSamples;
inline constexpr int kHiddenSize = 8;
inline constexpr int kOutputSize = 2;

enum class Activation { Linear, Tansig };

const char* to_string(Activation a);
Activation activation_from_string(const std::string& name);

/// 2 / (1 + exp(-2x)) - 1, evaluated without overflow for large |x|.
double tansig(double x);

struct DenseLayer {
  MatrixXd weights;  // out x in
  VectorXd bias;     // out
  Activation activation = Activation::Linear;

  Eigen::Index inputs() const { return weights.cols(); }
  Eigen::Index outputs() const { return weights.rows(); }
};

class MlpModel {
 public:
  MlpModel() = default;
  explicit MlpModel(std::vector<DenseLayer> layers);

  /// 200 -> 8 (tansig) -> 2 (linear), all parameters zero.
  static MlpModel impedance_estimator();

  const std::vector<DenseLayer>& layers() const { return layers_; }
  std::vector<DenseLayer>& layers() { return layers_; }

  Eigen::Index input_size() const;
  Eigen::Index output_size() const;
  Eigen::Index parameter_count() const;

  /// Layer by layer: weights row-major, then bias.
  VectorXd parameters() const;
  void set_parameters(const VectorXd& theta);

  VectorXd forward(const VectorXd& x) const;
  /// Row-wise forward pass, one sample per row.
  MatrixXd forward_batch(const MatrixXd& x) const;

  void validate() const;

  bool operator==(const MlpModel& other) const;

 private:
  std::vector<DenseLayer> layers_;
};

/// d(output)/d(parameters) for every (sample, output) pair. Row n * outputs + k
/// holds the gradient of output k for sample n; columns follow parameters().
RowMatrixXd error_jacobian(const MlpModel& model, const MatrixXd& inputs);

/// Residuals output - target flattened in the same row order as error_jacobian.
VectorXd residuals(const MlpModel& model, const MatrixXd& inputs, const MatrixXd& targets);

double mse(const MlpModel& model, const MatrixXd& inputs, const MatrixXd& targets);

/// Solves (J^T J + mu I) dw = -J^T r by Cholesky. Throws NumericFailure when
/// the damped system is not positive definite.
VectorXd damped_step(const MatrixXd& jtj, const VectorXd& jtr, double mu);

/// One Levenberg-Marquardt update of the model on a batch.
MlpModel lm_step(const MlpModel& model, const MatrixXd& inputs, const MatrixXd& targets, double mu);

struct Normalizer {
  VectorXd input_mean;
  VectorXd input_std;
  VectorXd target_mean;
  VectorXd target_std;

  /// Sample statistics (n - 1 denominator). Constant columns are rejected.
  static Normalizer fit(const MatrixXd& inputs, const MatrixXd& targets);
  static Normalizer identity(Eigen::Index inputs, Eigen::Index outputs);

  MatrixXd normalize_inputs(const MatrixXd& x) const;
  MatrixXd normalize_targets(const MatrixXd& y) const;
  MatrixXd denormalize_targets(const MatrixXd& y) const;

  void validate() const;
  bool operator==(const Normalizer& other) const;
};

VectorXd zscore(const VectorXd& x, const VectorXd& mean, const VectorXd& std);
VectorXd zscore_inverse(const VectorXd& z, const VectorXd& mean, const VectorXd& std);

struct TrainConfig {
  int max_epochs = 500;
  double goal_mse = 1e-5;
  double mu_initial = 1e-6;
  double mu_decrease = 0.1;
  double mu_increase = 10.0;
  double mu_max = 1e10;
  double mu_min = 1e-20;
  int validation_patience = 6;
  double init_scale = 0.5;  // weights ~ U(-init_scale, init_scale) / sqrt(fan_in)
  std::uint64_t seed = 1;
  int hidden_units = kHiddenSize;
  int histogram_bins = 20;

  void validate() const;
  /// Stable 64-bit digest of every field, stored in model files.
  std::uint64_t fingerprint() const;
};

struct Split {
  MatrixXd inputs;
  MatrixXd targets;
  Eigen::Index rows() const { return inputs.rows(); }
};

struct Histogram {
  std::vector<double> edges;  // bins + 1
  std::vector<long> counts;
};

struct RegressionFit {
  double slope = 0;
  double intercept = 0;
  double r = 0;
};

struct TrainReport {
  std::vector<double> train_mse;
  std::vector<double> val_mse;
  std::vector<double> test_mse;
  std::vector<double> gradient;
  std::vector<double> mu;
  std::vector<int> validation_checks;

  std::string stop_reason;
  int epochs = 0;
  int best_epoch = 0;

  // Final diagnostics in normalized target units, outputs flattened.
  Histogram train_hist, val_hist, test_hist;
  RegressionFit train_fit, val_fit, test_fit;
  std::vector<std::pair<double, double>> train_scatter, val_scatter, test_scatter;
};

/// Training diverged; carries the traces recorded up to the failure.
class TrainingError : public Error {
 public:
  TrainingError(const std::string& what, TrainReport report)
      : Error(ErrorCode::TrainingFailure, what), report_(std::move(report)) {}
  const TrainReport& report() const { return report_; }

 private:
  TrainReport report_;
};

struct TrainResult {
  MlpModel model;
  Normalizer normalizer;
  TrainReport report;
};

/// Fits a fresh seeded network. Normalization statistics come from the
/// training split only; the returned weights are those with the best
/// validation error.
TrainResult train(const Split& train, const Split& val, const Split& test, const TrainConfig& cfg);

/// Levenberg-Marquardt on an already normalized problem starting from `model`.
/// Exposed separately so the loop can be checked on small models.
TrainReport train_normalized(MlpModel& model, const Split& train, const Split& val,
                             const Split& test, const TrainConfig& cfg);

MlpModel initialize(Eigen::Index inputs, Eigen::Index hidden, Eigen::Index outputs, double scale,
                    std::uint64_t seed);

Histogram error_histogram(const std::vector<double>& errors, double lo, double hi, int bins);
RegressionFit regression(const std::vector<std::pair<double, double>>& target_output);

/// CSV files: training_progress.csv, error_histogram.csv, regression.csv,
/// regression_scatter.csv.
void export_diagnostics(const TrainReport& report, const std::string& directory);

}  // namespace vsg::ann
