#include "vsg/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "vsg/grid_model.hpp"
#include "vsg/io.hpp"
#include "vsg/waveform.hpp"

namespace vsg::ann {

void DatasetConfig::validate() const {
  if (n_total < 1) throw Error(ErrorCode::InvalidInput, "dataset needs at least one sample");
  if (scr_list.empty() || xr_list.empty()) throw Error(ErrorCode::InvalidInput, "empty scr or x/r list");
  if (!(p_max_pu >= p_min_pu) || !(q_max_pu >= q_min_pu))
    throw Error(ErrorCode::InvalidInput, "inverted power range");
  if (!(v_g > 0) || !(s_rated > 0) || !(omega0 > 0) || !(sample_period > 0))
    throw Error(ErrorCode::InvalidInput, "non-positive dataset constants");
  if (!(phase_jitter >= 0) || !(noise_v_std >= 0) || !(noise_i_std >= 0))
    throw Error(ErrorCode::InvalidInput, "negative jitter or noise level");
}

void Dataset::validate() const {
  const auto n = inputs.rows();
  if (targets.rows() != n || Eigen::Index(meta.size()) != n)
    throw Error(ErrorCode::DimensionMismatch, "dataset fields disagree in row count");
  if (!inputs.allFinite() || !targets.allFinite())
    throw Error(ErrorCode::NumericFailure, "dataset contains non-finite entries");
}

Dataset Dataset::subset(const std::vector<Eigen::Index>& idx) const {
  Dataset out;
  out.inputs.resize(Eigen::Index(idx.size()), inputs.cols());
  out.targets.resize(Eigen::Index(idx.size()), targets.cols());
  out.meta.reserve(idx.size());
  for (std::size_t r = 0; r < idx.size(); ++r) {
    out.inputs.row(Eigen::Index(r)) = inputs.row(idx[r]);
    out.targets.row(Eigen::Index(r)) = targets.row(idx[r]);
    out.meta.push_back(meta[std::size_t(idx[r])]);
  }
  return out;
}

Dataset generate_dataset(const DatasetConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick_scr(0, cfg.scr_list.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_xr(0, cfg.xr_list.size() - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  Dataset ds;
  ds.inputs.resize(cfg.n_total, kInputSize);
  ds.targets.resize(cfg.n_total, kOutputSize);
  ds.meta.reserve(std::size_t(cfg.n_total));

  constexpr int kMaxResamples = 1000;
  for (int row = 0; row < cfg.n_total; ++row) {
    SampleMeta m;
    OperatingPoint<double> op;
    GridImpedance<double> z;
    bool ok = false;
    for (int attempt = 0; attempt < kMaxResamples && !ok; ++attempt) {
      m.scr = cfg.scr_list[pick_scr(rng)];
      m.xr_ratio = cfg.xr_list[pick_xr(rng)];
      m.p_ref = (cfg.p_min_pu + (cfg.p_max_pu - cfg.p_min_pu) * unit(rng)) * cfg.s_rated;
      m.q_ref = (cfg.q_min_pu + (cfg.q_max_pu - cfg.q_min_pu) * unit(rng)) * cfg.s_rated;
      m.window_phase = cfg.phase_jitter * (2.0 * unit(rng) - 1.0);
      z = scr_to_impedance(m.scr, m.xr_ratio, cfg.v_g, cfg.s_rated, cfg.omega0);
      try {
        NewtonOptions opts;
        opts.power_scale = cfg.s_rated;
        op = solve_operating_point(m.p_ref, m.q_ref, z, cfg.v_g, opts);
        ok = true;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::InfeasibleOperatingPoint) throw;
      }
    }
    if (!ok) throw Error(ErrorCode::InfeasibleOperatingPoint, "could not draw a feasible operating point");
    m.delta0 = op.delta0;
    m.v_pcc0 = op.v_pcc0;

    const Waveforms w =
        synth_waveforms(op, z, kWindowSamples, cfg.sample_period, m.window_phase / cfg.omega0, cfg.omega0);
    for (int k = 0; k < kWindowSamples; ++k) {
      double v = w.v[std::size_t(k)];
      double i = w.i[std::size_t(k)];
      if (cfg.noise_v_std > 0) v += cfg.noise_v_std * gauss(rng);
      if (cfg.noise_i_std > 0) i += cfg.noise_i_std * gauss(rng);
      ds.inputs(row, k) = v;
      ds.inputs(row, kWindowSamples + k) = i;
    }
    ds.targets(row, 0) = z.r_g;
    ds.targets(row, 1) = z.l_g;
    ds.meta.push_back(m);
  }
  ds.validate();
  return ds;
}

DatasetSplits split_dataset(const Dataset& ds, std::array<double, 3> fractions, std::uint64_t seed) {
  ds.validate();
  for (double f : fractions)
    if (!(f >= 0)) throw Error(ErrorCode::InvalidInput, "split fractions must be non-negative");
  if (std::abs(fractions[0] + fractions[1] + fractions[2] - 1.0) > 1e-9)
    throw Error(ErrorCode::InvalidInput, "split fractions must sum to 1");

  const Eigen::Index n = ds.rows();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index(0));
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  const auto n_train = static_cast<std::size_t>(std::llround(fractions[0] * double(n)));
  const auto n_val = static_cast<std::size_t>(std::llround(fractions[1] * double(n)));
  if (n_train == 0 || n_val == 0 || n_train + n_val >= order.size())
    throw Error(ErrorCode::EmptySplit, "fractions leave an empty split for " + std::to_string(n) + " rows");

  auto slice = [&](std::size_t lo, std::size_t hi) {
    return ds.subset(std::vector<Eigen::Index>(order.begin() + long(lo), order.begin() + long(hi)));
  };
  return {slice(0, n_train), slice(n_train, n_train + n_val), slice(n_train + n_val, order.size())};
}

namespace {

std::vector<std::string> dataset_header() {
  std::vector<std::string> h;
  for (int k = 1; k <= kWindowSamples; ++k) h.push_back("v" + std::to_string(k));
  for (int k = 1; k <= kWindowSamples; ++k) h.push_back("i" + std::to_string(k));
  for (const char* name : {"r_g", "l_g", "scr", "xr_ratio", "p_ref", "q_ref", "delta0", "v_pcc0", "window_phase"})
    h.emplace_back(name);
  return h;
}

}  // namespace

void write_dataset_csv(const Dataset& ds, const std::string& path) {
  ds.validate();
  io::CsvWriter w(path, dataset_header());
  for (Eigen::Index r = 0; r < ds.rows(); ++r) {
    for (Eigen::Index c = 0; c < ds.inputs.cols(); ++c) w.cell(ds.inputs(r, c));
    w.cell(ds.targets(r, 0)).cell(ds.targets(r, 1));
    const auto& m = ds.meta[std::size_t(r)];
    w.cell(m.scr).cell(m.xr_ratio).cell(m.p_ref).cell(m.q_ref).cell(m.delta0).cell(m.v_pcc0).cell(m.window_phase);
    w.end_row();
  }
}

Dataset read_dataset_csv(const std::string& path) {
  const io::CsvTable t = io::read_csv(path);
  if (t.header != dataset_header()) throw Error(ErrorCode::Io, path + ": unexpected dataset columns");
  Dataset ds;
  const auto n = Eigen::Index(t.rows.size());
  ds.inputs.resize(n, kInputSize);
  ds.targets.resize(n, kOutputSize);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto& row = t.rows[std::size_t(r)];
    for (int c = 0; c < kInputSize; ++c) ds.inputs(r, c) = io::parse_double(row[std::size_t(c)]);
    ds.targets(r, 0) = io::parse_double(row[kInputSize]);
    ds.targets(r, 1) = io::parse_double(row[kInputSize + 1]);
    SampleMeta m;
    std::size_t c = kInputSize + 2;
    m.scr = io::parse_double(row[c++]);
    m.xr_ratio = io::parse_double(row[c++]);
    m.p_ref = io::parse_double(row[c++]);
    m.q_ref = io::parse_double(row[c++]);
    m.delta0 = io::parse_double(row[c++]);
    m.v_pcc0 = io::parse_double(row[c++]);
    m.window_phase = io::parse_double(row[c++]);
    ds.meta.push_back(m);
  }
  ds.validate();
  return ds;
}

}  // namespace vsg::ann
