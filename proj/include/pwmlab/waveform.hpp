// Carrier-based PWM synthesis with a truncated squared-sinusoid
// frequency-modulated triangular carrier (HIPWM-FMTC3) and the classic
// fixed-frequency baselines (SPWM, harmonic-injection SPWM).
//
// Time origin used throughout: the modulating wave has its positive peak at
// t = 0, the carrier-frequency law is A_M*w_m*(sin^2(w_m t) - K) clipped at
// zero, so the carrier switches fastest at the modulator zero crossings
// (w_m t = pi/2, 3pi/2) and is frozen on windows centered at w_m t = 0, pi.

#ifndef PWMLAB_WAVEFORM_HPP
#define PWMLAB_WAVEFORM_HPP

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace pwmlab {

inline constexpr double kPi = 3.14159265358979323846;

enum class ModulatorKind { Sinusoidal, HarmonicInjection };

template <typename Scalar = double>
struct ModulatingWave {
  ModulatorKind kind = ModulatorKind::HarmonicInjection;
  Scalar amplitude_index = Scalar(1);   // in (0, 1.2]
  Scalar phase_offset_rad = Scalar(0);  // 0, -2pi/3, +2pi/3 for legs A, B, C
};

enum class CarrierLaw { FixedFrequency, TruncatedCosSquared };

template <typename Scalar = double>
struct CarrierSpec {
  CarrierLaw law = CarrierLaw::FixedFrequency;
  Scalar omega_m = Scalar(100) * Scalar(kPi);  // rad/s
  // FixedFrequency
  int m = 15;
  // TruncatedCosSquared
  Scalar a_m = Scalar(0);
  Scalar k = Scalar(0);

  static CarrierSpec fixed(int m, Scalar omega_m) {
    if (m < 1) throw std::domain_error("CarrierSpec: M must be a positive integer");
    if (!(omega_m > Scalar(0))) throw std::domain_error("CarrierSpec: omega_m must be > 0");
    CarrierSpec s;
    s.law = CarrierLaw::FixedFrequency;
    s.m = m;
    s.omega_m = omega_m;
    return s;
  }

  static CarrierSpec truncated(Scalar a_m, Scalar k, Scalar omega_m) {
    if (!(a_m > Scalar(0))) throw std::domain_error("CarrierSpec: A_M must be > 0");
    if (!(k >= Scalar(0)) || !(k < Scalar(1)))
      throw std::domain_error("CarrierSpec: K must lie in [0, 1); K = 1 never switches");
    if (!(omega_m > Scalar(0))) throw std::domain_error("CarrierSpec: omega_m must be > 0");
    CarrierSpec s;
    s.law = CarrierLaw::TruncatedCosSquared;
    s.a_m = a_m;
    s.k = k;
    s.omega_m = omega_m;
    return s;
  }

  Scalar fundamental_hz() const { return omega_m / (Scalar(2) * Scalar(kPi)); }
};

template <typename Scalar = double>
struct SwitchingWindows {
  Scalar t1, t2, t3, t4;          // seconds; active on (t1,t2) and (t3,t4)
  Scalar active_halfwidth_rad;    // arccos(sqrt(K))
  Scalar frozen_halfwidth_rad;    // arcsin(sqrt(K))
};

template <typename Scalar = double>
struct SampledWaveform {
  Eigen::Vector<Scalar, Eigen::Dynamic> samples;  // volts (or pu of E)
  Scalar sample_rate = Scalar(0);                 // Hz
  Scalar fundamental_hz = Scalar(0);              // Hz
  int n_periods = 1;

  int samples_per_period() const {
    return static_cast<int>(std::lround(double(sample_rate / fundamental_hz)));
  }
};

struct SamplingSpec {
  double sample_rate = 16384.0 * 50.0;  // Hz; default 2^14 samples per 50 Hz period
  int n_periods = 1;
};

// --- modulating wave -------------------------------------------------------

// H realized as the pi/2-shifted sine form; the synthesis path evaluates it
// at phase + pi/2 which recovers the printed cosine form peaked at t = 0.
template <typename Scalar>
Scalar modulator_value(const ModulatingWave<Scalar>& w, Scalar phase) {
  const Scalar x = phase + w.phase_offset_rad;
  if (w.kind == ModulatorKind::Sinusoidal) return w.amplitude_index * std::sin(x);
  return w.amplitude_index *
         (Scalar(1.15) * std::sin(x) + Scalar(0.27) * std::sin(Scalar(3) * x) -
          Scalar(0.029) * std::sin(Scalar(9) * x));
}

// --- carrier law: K, A_M, M_bar -------------------------------------------

// sin(2*theta1)/2 + (1 - 2K)*theta1 with theta1 = arccos(sqrt(K)); the
// bracket of the mean-order expression.
template <typename Scalar>
Scalar mean_order_bracket(Scalar k) {
  const Scalar theta1 = std::acos(std::sqrt(k));
  return std::sin(Scalar(2) * theta1) / Scalar(2) + (Scalar(1) - Scalar(2) * k) * theta1;
}

// Closed-form A_M for a requested mean modulation order M_bar at truncation
// level K.
template <typename Scalar>
Scalar solve_a_m(Scalar k, Scalar m_bar) {
  if (!(k >= Scalar(0)) || !(k < Scalar(1)))
    throw std::domain_error("solve_a_m: K must lie in [0, 1)");
  if (!(m_bar > Scalar(0))) throw std::domain_error("solve_a_m: M_bar must be > 0");
  return Scalar(kPi) * m_bar / mean_order_bracket(k);
}

template <typename Scalar>
Scalar mean_modulation_order(const CarrierSpec<Scalar>& spec) {
  if (spec.law == CarrierLaw::FixedFrequency) return Scalar(spec.m);
  return spec.a_m / Scalar(kPi) * mean_order_bracket(spec.k);
}

template <typename Scalar>
SwitchingWindows<Scalar> switching_windows(Scalar k, Scalar omega_m) {
  if (!(k >= Scalar(0)) || !(k < Scalar(1)))
    throw std::domain_error("switching_windows: K must lie in [0, 1)");
  if (!(omega_m > Scalar(0))) throw std::domain_error("switching_windows: omega_m must be > 0");
  const Scalar ha = std::acos(std::sqrt(k));
  const Scalar hf = std::asin(std::sqrt(k));
  const Scalar half_pi = Scalar(kPi) / Scalar(2);
  SwitchingWindows<Scalar> w;
  w.active_halfwidth_rad = ha;
  w.frozen_halfwidth_rad = hf;
  w.t1 = (half_pi - ha) / omega_m;
  w.t2 = (half_pi + ha) / omega_m;
  w.t3 = (Scalar(3) * half_pi - ha) / omega_m;
  w.t4 = (Scalar(3) * half_pi + ha) / omega_m;
  return w;
}

namespace detail {

// Accrued carrier phase as a function of the modulating phase u = w_m*t,
// for the truncated law. Piecewise closed form; continuous, nondecreasing,
// constant across frozen windows, 2*pi*M_bar per fundamental period.
template <typename Scalar>
Scalar truncated_phase(Scalar u, Scalar a_m, Scalar k) {
  const Scalar pi = Scalar(kPi);
  const auto prim = [a_m, k](Scalar x) {  // antiderivative of A_M*(sin^2 x - K)
    return a_m * ((Scalar(0.5) - k) * x - std::sin(Scalar(2) * x) / Scalar(4));
  };
  const Scalar xf = std::asin(std::sqrt(k));      // first active-window start
  const Scalar half = prim(pi - xf) - prim(xf);   // = pi * M_bar
  const Scalar per_period = Scalar(2) * half;

  const Scalar n = std::floor(u / (Scalar(2) * pi));
  const Scalar x = u - Scalar(2) * pi * n;
  Scalar f;
  if (x <= xf)
    f = Scalar(0);
  else if (x < pi - xf)
    f = prim(x) - prim(xf);
  else if (x <= pi + xf)
    f = half;
  else if (x < Scalar(2) * pi - xf)
    f = half + prim(x - pi) - prim(xf);
  else
    f = per_period;
  return per_period * n + f;
}

template <typename Scalar>
Scalar carrier_phase_at(Scalar u, const CarrierSpec<Scalar>& spec) {
  if (spec.law == CarrierLaw::FixedFrequency) return Scalar(spec.m) * u;
  return truncated_phase(u, spec.a_m, spec.k);
}

}  // namespace detail

template <typename Scalar>
Scalar carrier_phase(Scalar t, const CarrierSpec<Scalar>& spec) {
  return detail::carrier_phase_at(spec.omega_m * t, spec);
}

// Unit triangle wave: period 2*pi, tri(0) = 0 rising, tri(pi/2) = 1.
template <typename Scalar>
Scalar carrier_value(Scalar theta) {
  return Scalar(2) / Scalar(kPi) * std::asin(std::sin(theta));
}

// --- comparator synthesis ---------------------------------------------------

namespace detail {

template <typename Scalar>
int checked_samples_per_period(const CarrierSpec<Scalar>& spec, const SamplingSpec& sampling) {
  const double ratio = double(sampling.sample_rate) / double(spec.fundamental_hz());
  const long n = std::lround(ratio);
  if (sampling.n_periods < 1)
    throw std::invalid_argument("synthesize: n_periods must be >= 1");
  if (n < 2 || std::abs(ratio - double(n)) > 1e-9 * ratio || n % 2 != 0)
    throw std::invalid_argument(
        "synthesize: sample_rate / fundamental_hz must be an even integer "
        "(synchronous sampling), got " + std::to_string(ratio));
  return static_cast<int>(n);
}

// Carrier sample at modulating phase u: the triangle of the accrued phase,
// anchored at its negative peak at u = 0 (center of a frozen window). This
// keeps the pulse train even about t = 0 and half-wave antisymmetric for odd
// M_bar, and pins the frozen-window carrier at +-1.
template <typename Scalar>
Scalar carrier_sample(Scalar u, const CarrierSpec<Scalar>& spec) {
  return carrier_value(carrier_phase_at(u, spec) - Scalar(kPi) / Scalar(2));
}

// Modulator sample in the synthesis origin (positive peak at u = 0).
template <typename Scalar>
Scalar modulator_sample(const ModulatingWave<Scalar>& w, Scalar u_no_offset) {
  return modulator_value(w, u_no_offset + Scalar(kPi) / Scalar(2));
}

}  // namespace detail

// Sample-by-sample comparator: +E/2 where the modulator rides above the
// carrier, -E/2 below; ties hold the previous level. Differences at float
// rounding noise count as ties, so crossings that land exactly on the sample
// grid (e.g. the modulator zero meeting the carrier zero at a quarter period)
// resolve the same way on both half-waves.
template <typename Scalar>
SampledWaveform<Scalar> synthesize_pole_voltage(const ModulatingWave<Scalar>& mod,
                                                const CarrierSpec<Scalar>& spec,
                                                Scalar dc_link,
                                                const SamplingSpec& sampling) {
  const int n = detail::checked_samples_per_period(spec, sampling);
  if (spec.law == CarrierLaw::TruncatedCosSquared) {
    const Scalar m_bar = mean_modulation_order(spec);
    if (std::abs(m_bar - std::round(m_bar)) > Scalar(1e-6))
      throw std::invalid_argument("synthesize: derived M_bar = " + std::to_string(double(m_bar)) +
                                  " is not an integer; carrier and modulator cannot synchronize");
  }

  SampledWaveform<Scalar> out;
  out.sample_rate = Scalar(sampling.sample_rate);
  out.fundamental_hz = spec.fundamental_hz();
  out.n_periods = sampling.n_periods;
  const long total = long(n) * sampling.n_periods;
  out.samples.resize(total);

  const Scalar hi = dc_link / Scalar(2);
  const Scalar step = Scalar(2) * Scalar(kPi) / Scalar(n);
  Scalar prev = hi;
  for (long i = 0; i < total; ++i) {
    const Scalar x = step * Scalar(i);  // w_m * t, leg offset applied below
    const Scalar m = detail::modulator_sample(mod, x);
    const Scalar c = detail::carrier_sample(x + mod.phase_offset_rad, spec);
    const Scalar d = m - c;
    Scalar v;
    if (d > Scalar(1e-12))
      v = hi;
    else if (d < Scalar(-1e-12))
      v = -hi;
    else
      v = prev;
    out.samples[i] = v;
    prev = v;
  }
  return out;
}

template <typename Scalar = double>
struct ThreePhaseVoltages {
  std::array<SampledWaveform<Scalar>, 3> pole;          // V_A, V_B, V_C
  std::array<SampledWaveform<Scalar>, 3> line_to_line;  // V_AB, V_BC, V_CA
  std::vector<std::string> warnings;
};

// Three legs with modulators offset 0, -2pi/3, +2pi/3; each leg's carrier is
// synchronized to its own modulator, so each pole voltage is an exact T/3
// time shift of the previous one and triplen orders cancel line-to-line.
template <typename Scalar>
ThreePhaseVoltages<Scalar> synthesize_three_phase(const ModulatingWave<Scalar>& mod,
                                                  const CarrierSpec<Scalar>& spec,
                                                  Scalar dc_link,
                                                  const SamplingSpec& sampling) {
  ThreePhaseVoltages<Scalar> out;
  const Scalar m_bar = mean_modulation_order(spec);
  const long m_int = std::lround(double(m_bar));
  if (std::abs(m_bar - Scalar(m_int)) > Scalar(1e-6) || m_int % 2 == 0 || m_int % 3 != 0)
    out.warnings.push_back("M_bar = " + std::to_string(double(m_bar)) +
                           " is not an odd multiple of 3; pair/triplen harmonics "
                           "will not cancel line-to-line");

  const Scalar third = Scalar(2) * Scalar(kPi) / Scalar(3);
  const std::array<Scalar, 3> offsets = {Scalar(0), -third, third};
  for (int p = 0; p < 3; ++p) {
    ModulatingWave<Scalar> leg = mod;
    leg.phase_offset_rad = mod.phase_offset_rad + offsets[p];
    out.pole[p] = synthesize_pole_voltage(leg, spec, dc_link, sampling);
  }
  for (int p = 0; p < 3; ++p) {
    out.line_to_line[p] = out.pole[p];
    out.line_to_line[p].samples = out.pole[p].samples - out.pole[(p + 1) % 3].samples;
  }
  return out;
}

}  // namespace pwmlab

#endif  // PWMLAB_WAVEFORM_HPP
