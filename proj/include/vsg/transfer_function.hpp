#pragma once

// Rational continuous-time transfer functions with coefficients stored in
// ascending powers of s, plus Bode evaluation, phase margin and step response.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "vsg/error.hpp"
#include "vsg/ode.hpp"

namespace vsg {

template <typename Scalar>
using Poly = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

namespace detail {

template <typename Scalar>
Poly<Scalar> trim(const Poly<Scalar>& p) {
  Eigen::Index n = p.size();
  while (n > 1 && p(n - 1) == Scalar(0)) --n;
  return p.head(n);
}

template <typename Scalar>
Poly<Scalar> convolve(const Poly<Scalar>& a, const Poly<Scalar>& b) {
  Poly<Scalar> out = Poly<Scalar>::Zero(a.size() + b.size() - 1);
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i, b.size()) += a(i) * b;
  return out;
}

template <typename Scalar>
Poly<Scalar> add(const Poly<Scalar>& a, const Poly<Scalar>& b) {
  Poly<Scalar> out = Poly<Scalar>::Zero(std::max(a.size(), b.size()));
  out.head(a.size()) += a;
  out.head(b.size()) += b;
  return out;
}

template <typename Scalar>
std::complex<Scalar> horner(const Poly<Scalar>& p, std::complex<Scalar> s) {
  std::complex<Scalar> acc(0);
  for (Eigen::Index i = p.size() - 1; i >= 0; --i) acc = acc * s + p(i);
  return acc;
}

/// Number of leading zero coefficients, i.e. roots at s = 0.
template <typename Scalar>
int origin_multiplicity(const Poly<Scalar>& p) {
  int k = 0;
  while (k < p.size() - 1 && p(k) == Scalar(0)) ++k;
  return k;
}

}  // namespace detail

template <typename Scalar = double>
class TransferFunction {
 public:
  TransferFunction(Poly<Scalar> num, Poly<Scalar> den)
      : num_(detail::trim(num)), den_(detail::trim(den)) {
    if (num_.size() == 0 || den_.size() == 0)
      throw Error(ErrorCode::InvalidInput, "empty transfer function coefficients");
    if (!num_.allFinite() || !den_.allFinite())
      throw Error(ErrorCode::InvalidInput, "non-finite transfer function coefficients");
    if (den_(den_.size() - 1) == Scalar(0))
      throw Error(ErrorCode::InvalidInput, "denominator leading coefficient is zero");
  }

  static TransferFunction gain(Scalar k) {
    return {Poly<Scalar>::Constant(1, k), Poly<Scalar>::Constant(1, Scalar(1))};
  }

  const Poly<Scalar>& num() const { return num_; }
  const Poly<Scalar>& den() const { return den_; }
  int order() const { return int(den_.size()) - 1; }

  std::complex<Scalar> operator()(std::complex<Scalar> s) const {
    return detail::horner(num_, s) / detail::horner(den_, s);
  }

  /// Value at s = 0; infinite when the denominator has a root at the origin.
  Scalar dc_gain() const { return num_(0) / den_(0); }

  TransferFunction operator*(const TransferFunction& rhs) const {
    return {detail::convolve(num_, rhs.num_), detail::convolve(den_, rhs.den_)};
  }

  TransferFunction operator*(Scalar k) const { return {Poly<Scalar>(num_ * k), den_}; }

  /// Unity negative feedback: G / (1 + G).
  TransferFunction feedback() const { return {num_, detail::add(den_, num_)}; }

 private:
  Poly<Scalar> num_;
  Poly<Scalar> den_;
};

template <typename Scalar>
TransferFunction<Scalar> operator*(Scalar k, const TransferFunction<Scalar>& tf) {
  return tf * k;
}

template <typename Scalar = double>
struct FrequencyPoint {
  Scalar omega;
  Scalar mag_db;
  Scalar phase_deg;
};

template <typename Scalar = double>
struct FrequencyResponse {
  std::vector<FrequencyPoint<Scalar>> points;
};

template <typename Scalar = double>
std::vector<Scalar> logspace(Scalar lo, Scalar hi, int n) {
  if (!(lo > 0) || !(hi > lo) || n < 2) throw Error(ErrorCode::InvalidInput, "bad logspace range");
  std::vector<Scalar> out(static_cast<std::size_t>(n));
  const Scalar a = std::log10(lo);
  const Scalar b = std::log10(hi);
  for (int i = 0; i < n; ++i) out[std::size_t(i)] = std::pow(Scalar(10), a + (b - a) * Scalar(i) / Scalar(n - 1));
  return out;
}

template <typename Scalar = double>
std::vector<Scalar> default_omega_grid() {
  return logspace<Scalar>(Scalar(1e-2), Scalar(1e3), 400);
}

/// Magnitude in dB and phase in degrees on an increasing grid. Roots at the
/// origin contribute exactly -90 degrees each; the remaining numerator and
/// denominator phases are unwrapped separately along the grid.
template <typename Scalar>
FrequencyResponse<Scalar> bode(const TransferFunction<Scalar>& tf, const std::vector<Scalar>& omega) {
  using C = std::complex<Scalar>;
  constexpr Scalar rad2deg = Scalar(180) / std::numbers::pi_v<Scalar>;
  for (std::size_t i = 0; i < omega.size(); ++i) {
    if (!(omega[i] > 0)) throw Error(ErrorCode::InvalidInput, "frequency grid must be positive");
    if (i > 0 && !(omega[i] > omega[i - 1]))
      throw Error(ErrorCode::InvalidInput, "frequency grid must be strictly increasing");
  }

  const int kz = detail::origin_multiplicity(tf.num());
  const int kp = detail::origin_multiplicity(tf.den());
  const Poly<Scalar> num_rest = tf.num().tail(tf.num().size() - kz);
  const Poly<Scalar> den_rest = tf.den().tail(tf.den().size() - kp);
  const Scalar den_scale = den_rest.cwiseAbs().maxCoeff();

  FrequencyResponse<Scalar> fr;
  fr.points.reserve(omega.size());
  Scalar prev_num = 0, prev_den = 0;
  for (std::size_t i = 0; i < omega.size(); ++i) {
    const C s(0, omega[i]);
    const C n = detail::horner(num_rest, s);
    const C d = detail::horner(den_rest, s);
    if (std::abs(d) <= Scalar(64) * std::numeric_limits<Scalar>::epsilon() * den_scale)
      throw Error(ErrorCode::ExcludedPoint, "pole on the imaginary axis at the evaluation grid");

    Scalar an = std::arg(n);
    Scalar ad = std::arg(d);
    if (i > 0) {
      const Scalar two_pi = 2 * std::numbers::pi_v<Scalar>;
      an += two_pi * std::round((prev_num - an) / two_pi);
      ad += two_pi * std::round((prev_den - ad) / two_pi);
    }
    prev_num = an;
    prev_den = ad;

    const Scalar mag = std::abs(n) / std::abs(d) * std::pow(omega[i], Scalar(kz - kp));
    const Scalar phase = Scalar(-90 * (kp - kz)) + (an - ad) * rad2deg;
    fr.points.push_back({omega[i], Scalar(20) * std::log10(mag), phase});
  }
  return fr;
}

template <typename Scalar = double>
struct Crossover {
  Scalar omega;
  Scalar phase_deg;
};

/// First downward 0 dB crossing, interpolated linearly in (log omega, dB).
template <typename Scalar>
Crossover<Scalar> gain_crossover(const FrequencyResponse<Scalar>& fr) {
  const auto& p = fr.points;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    if (p[i].mag_db >= 0 && p[i + 1].mag_db < 0) {
      const Scalar f = p[i].mag_db / (p[i].mag_db - p[i + 1].mag_db);
      const Scalar lw = std::log(p[i].omega) + f * (std::log(p[i + 1].omega) - std::log(p[i].omega));
      return {std::exp(lw), p[i].phase_deg + f * (p[i + 1].phase_deg - p[i].phase_deg)};
    }
  }
  throw Error(ErrorCode::NoCrossover, "response does not cross 0 dB within the grid");
}

template <typename Scalar>
Scalar phase_margin(const FrequencyResponse<Scalar>& fr) {
  return Scalar(180) + gain_crossover(fr).phase_deg;
}

template <typename Scalar = double>
struct StepTrace {
  std::vector<Scalar> t;
  std::vector<Scalar> y;
};

/// Unit step response from rest, integrated in controllable canonical form.
template <typename Scalar>
StepTrace<Scalar> step_response(const TransferFunction<Scalar>& tf, Scalar t_end, Scalar dt) {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const int n = tf.order();
  if (tf.num().size() > tf.den().size())
    throw Error(ErrorCode::InvalidInput, "step response requires a proper transfer function");
  if (!(dt > 0) || !(t_end > 0)) throw Error(ErrorCode::InvalidInput, "bad step response horizon");

  const Scalar lead = tf.den()(n);
  const Vec a = tf.den() / lead;
  Vec b = Vec::Zero(n + 1);
  b.head(tf.num().size()) = tf.num() / lead;
  const Scalar feedthrough = b(n);

  Mat A = Mat::Zero(n, n);
  if (n > 1) A.topRightCorner(n - 1, n - 1).setIdentity();
  A.row(n - 1) = -a.head(n).transpose();
  Vec c = b.head(n) - feedthrough * a.head(n);

  const auto steps = static_cast<std::size_t>(std::llround(t_end / dt));
  StepTrace<Scalar> out;
  if (n == 0) {
    for (std::size_t k = 0; k <= steps; ++k) {
      out.t.push_back(Scalar(k) * dt);
      out.y.push_back(tf.num()(0) / lead);
    }
    return out;
  }
  out.t.reserve(steps + 1);
  out.y.reserve(steps + 1);
  Vec x = Vec::Zero(n);
  auto f = [&](Scalar, const Vec& s) -> Vec {
    Vec dx = A * s;
    dx(n - 1) += Scalar(1);
    return dx;
  };
  for (std::size_t k = 0; k <= steps; ++k) {
    out.t.push_back(Scalar(k) * dt);
    out.y.push_back(c.dot(x) + feedthrough);
    if (k < steps) x = rk4_step(f, Scalar(k) * dt, x, dt);
  }
  return out;
}

}  // namespace vsg
