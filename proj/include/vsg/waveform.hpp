#pragma once

// Single-phase instantaneous PCC voltage and current synthesized from the
// phasor state. The carrier phase omega * t is global, so the waveform stays
// continuous when the angle, magnitude or impedance change between samples.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "vsg/grid_model.hpp"

namespace vsg {

struct WaveSample {
  double v;  // volts
  double i;  // amperes, positive from PCC towards the grid
};

struct Waveforms {
  std::vector<double> v;
  std::vector<double> i;
};

/// Current phasor (V_pcc at angle delta minus V_g at 0) / Z_g, RMS amperes.
inline std::complex<double> pcc_current(const OperatingPoint<double>& op, const GridImpedance<double>& z) {
  if (!(z.r_g * z.r_g + z.x_g * z.x_g > 0)) throw Error(ErrorCode::DegenerateImpedance, "r_g^2 + x_g^2 = 0");
  return (std::polar(op.v_pcc0, op.delta0) - std::complex<double>(op.v_g, 0.0)) / z.complex();
}

inline WaveSample synth_sample(const OperatingPoint<double>& op, const GridImpedance<double>& z, double t,
                               double omega) {
  const std::complex<double> cur = pcc_current(op, z);
  const double phase = omega * t;
  return {std::numbers::sqrt2 * op.v_pcc0 * std::sin(phase + op.delta0),
          std::numbers::sqrt2 * std::abs(cur) * std::sin(phase + std::arg(cur))};
}

/// n samples at t0 + k dt_s.
inline Waveforms synth_waveforms(const OperatingPoint<double>& op, const GridImpedance<double>& z, int n,
                                 double dt_s, double t0, double omega) {
  if (n < 1) throw Error(ErrorCode::InvalidInput, "sample count must be at least 1");
  if (!(dt_s > 0)) throw Error(ErrorCode::InvalidInput, "sample period must be positive");
  Waveforms w;
  w.v.reserve(std::size_t(n));
  w.i.reserve(std::size_t(n));
  for (int k = 0; k < n; ++k) {
    const WaveSample s = synth_sample(op, z, t0 + double(k) * dt_s, omega);
    w.v.push_back(s.v);
    w.i.push_back(s.i);
  }
  return w;
}

}  // namespace vsg
