// Closed-form Fourier-series evaluation of the pole voltage and the
// direct-projection Fourier oracle used to cross-check the FFT path.

#ifndef PWMLAB_ANALYTIC_HPP
#define PWMLAB_ANALYTIC_HPP

#include <cmath>
#include <stdexcept>

#include "pwmlab/spectrum.hpp"
#include "pwmlab/waveform.hpp"

namespace pwmlab {

template <typename Scalar = double>
struct AnalyticVoltageParams {
  CarrierSpec<Scalar> spec;
  ModulatingWave<Scalar> mod;
  Scalar dc_link = Scalar(1);
  int n_max = 200;  // series truncation index
};

// Commutation half-width of the pulse train: alpha = pi/2 * (1 + H), with H
// the modulating function in the synthesis origin (positive peak at phase 0).
template <typename Scalar>
Scalar commutation_angle_alpha(const ModulatingWave<Scalar>& mod, Scalar phase) {
  return Scalar(kPi) / Scalar(2) *
         (Scalar(1) + detail::modulator_sample(mod, phase));
}

// Series form of the pole voltage: (E/2)H + (4/pi)(E/2) sum (1/n) sin(n*alpha)
// cos(n*theta) on the active windows, clamped +-E/2 on the frozen windows.
template <typename Scalar>
Scalar analytic_pole_voltage(Scalar t, const AnalyticVoltageParams<Scalar>& p) {
  const Scalar pi = Scalar(kPi);
  const Scalar e2 = p.dc_link / Scalar(2);
  const Scalar u = p.spec.omega_m * t + p.mod.phase_offset_rad;

  if (p.spec.law == CarrierLaw::TruncatedCosSquared && p.spec.k > Scalar(0)) {
    const Scalar xf = std::asin(std::sqrt(p.spec.k));
    Scalar x = std::fmod(u, Scalar(2) * pi);
    if (x < Scalar(0)) x += Scalar(2) * pi;
    const bool frozen = (x <= xf) || (x >= Scalar(2) * pi - xf) ||
                        (x >= pi - xf && x <= pi + xf);
    if (frozen) {
      const Scalar h = detail::modulator_sample(p.mod, p.spec.omega_m * t);
      return h >= Scalar(0) ? e2 : -e2;
    }
  }

  const Scalar h = detail::modulator_sample(p.mod, p.spec.omega_m * t);
  const Scalar alpha = pi / Scalar(2) * (Scalar(1) + h);
  const Scalar theta = detail::carrier_phase_at(u, p.spec);
  Scalar acc = Scalar(0);
  for (int n = 1; n <= p.n_max; ++n)
    acc += std::sin(Scalar(n) * alpha) * std::cos(Scalar(n) * theta) / Scalar(n);
  return e2 * h + Scalar(4) / pi * e2 * acc;
}

// Brute-force Fourier coefficients by trapezoidal projection of the sampled
// waveform onto sin/cos of the fundamental; on the synchronous periodic grid
// the trapezoidal rule reduces to the plain sample sum. Independent of the
// FFT path by construction.
template <typename Scalar>
HarmonicSpectrum<Scalar> fourier_coefficients_numeric(const SampledWaveform<Scalar>& w,
                                                      int max_order) {
  const int n_per = w.samples_per_period();
  if (std::abs(double(w.sample_rate / w.fundamental_hz) - double(n_per)) > 1e-9 * n_per ||
      n_per % 2 != 0)
    throw std::invalid_argument("fourier_coefficients_numeric: not synchronously sampled");
  if (max_order < 0 || max_order >= n_per / 2)
    throw std::domain_error("fourier_coefficients_numeric: max_order beyond Nyquist");

  const long len = long(w.samples.size());
  HarmonicSpectrum<Scalar> s;
  s.fundamental_hz = w.fundamental_hz;
  s.amplitudes.resize(max_order + 1);
  s.phases.resize(max_order + 1);

  const Scalar step = Scalar(2) * Scalar(kPi) / Scalar(n_per);
  for (int order = 0; order <= max_order; ++order) {
    Scalar a = Scalar(0), b = Scalar(0);
    for (long i = 0; i < len; ++i) {
      const Scalar ang = step * Scalar(order) * Scalar(i % n_per);
      a += w.samples[i] * std::cos(ang);
      b += w.samples[i] * std::sin(ang);
    }
    const Scalar scale = (order == 0 ? Scalar(1) : Scalar(2)) / Scalar(len);
    a *= scale;
    b *= scale;
    s.amplitudes[order] = std::sqrt(a * a + b * b);
    s.phases[order] = (s.amplitudes[order] > Scalar(0)) ? std::atan2(-b, a) : Scalar(0);
  }
  return s;
}

}  // namespace pwmlab

#endif  // PWMLAB_ANALYTIC_HPP
