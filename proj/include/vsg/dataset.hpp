#pragma once

// Steady-state training windows for the impedance estimator.

#include <array>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "vsg/ann.hpp"

namespace vsg::ann {

struct DatasetConfig {
  std::vector<double> scr_list{2.0, 4.5, 7.0, 9.5, 15.0};
  std::vector<double> xr_list{5.0};
  double p_min_pu = 0.2;
  double p_max_pu = 0.8;
  double q_min_pu = 0.0;
  double q_max_pu = 0.4;
  double v_g = 110.0;
  double s_rated = 5000.0;
  double omega0 = 100.0 * std::numbers::pi;
  double sample_period = 200e-6;
  // Window start phase ~ U(-jitter, jitter) rad relative to the grid voltage
  // zero crossing; the default is one estimator sample period of carrier phase.
  double phase_jitter = 100.0 * std::numbers::pi * 200e-6;
  double noise_v_std = 0.0;  // volts
  double noise_i_std = 0.0;  // amperes
  int n_total = 5000;

  void validate() const;
};

struct SampleMeta {
  double scr = 0;
  double xr_ratio = 0;
  double p_ref = 0;
  double q_ref = 0;
  double delta0 = 0;
  double v_pcc0 = 0;
  double window_phase = 0;
};

struct Dataset {
  MatrixXd inputs;   // N x 200: v[1..100], i[1..100]
  MatrixXd targets;  // N x 2: R_g ohms, L_g henries
  std::vector<SampleMeta> meta;

  Eigen::Index rows() const { return inputs.rows(); }
  void validate() const;
  Dataset subset(const std::vector<Eigen::Index>& rows) const;
  Split as_split() const { return {inputs, targets}; }
};

Dataset generate_dataset(const DatasetConfig& cfg, std::uint64_t seed);

struct DatasetSplits {
  Dataset train;
  Dataset val;
  Dataset test;
};

/// Seeded shuffle followed by contiguous slices of the given fractions.
DatasetSplits split_dataset(const Dataset& ds, std::array<double, 3> fractions, std::uint64_t seed);

void write_dataset_csv(const Dataset& ds, const std::string& path);
Dataset read_dataset_csv(const std::string& path);

}  // namespace vsg::ann
