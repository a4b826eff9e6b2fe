// Harmonic spectra of synchronously sampled waveforms and the derived
// figures of merit: fundamental, THD, DF, lowest-order harmonic, sideband
// cluster centroid.

#ifndef PWMLAB_SPECTRUM_HPP
#define PWMLAB_SPECTRUM_HPP

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <vector>

#include "pwmlab/waveform.hpp"

namespace pwmlab {

template <typename Scalar = double>
struct HarmonicSpectrum {
  Scalar fundamental_hz = Scalar(0);
  Eigen::Vector<Scalar, Eigen::Dynamic> amplitudes;  // peak amplitude, index = harmonic order
  Eigen::Vector<Scalar, Eigen::Dynamic> phases;      // radians

  int max_order() const { return static_cast<int>(amplitudes.size()) - 1; }
};

// FFT-path spectrum at integer multiples of the fundamental.
template <typename Scalar>
HarmonicSpectrum<Scalar> harmonic_spectrum(const SampledWaveform<Scalar>& w, int max_order) {
  const int n = w.samples_per_period();
  if (std::abs(double(w.sample_rate / w.fundamental_hz) - double(n)) > 1e-9 * n || n % 2 != 0)
    throw std::invalid_argument("harmonic_spectrum: waveform is not synchronously sampled");
  if (max_order < 0 || max_order > n / 2)
    throw std::domain_error("harmonic_spectrum: max_order beyond Nyquist order " +
                            std::to_string(n / 2));
  const long len = long(w.samples.size());
  if (len != long(n) * w.n_periods)
    throw std::invalid_argument("harmonic_spectrum: sample count does not cover whole periods");

  std::vector<Scalar> time(w.samples.data(), w.samples.data() + len);
  std::vector<std::complex<Scalar>> freq;
  Eigen::FFT<Scalar> fft;
  fft.fwd(freq, time);

  HarmonicSpectrum<Scalar> s;
  s.fundamental_hz = w.fundamental_hz;
  s.amplitudes.resize(max_order + 1);
  s.phases.resize(max_order + 1);
  for (int k = 0; k <= max_order; ++k) {
    const std::complex<Scalar> bin = freq[std::size_t(k) * w.n_periods];
    const Scalar scale = (k == 0 ? Scalar(1) : Scalar(2)) / Scalar(len);
    s.amplitudes[k] = std::abs(bin) * scale;
    s.phases[k] = (s.amplitudes[k] > Scalar(0)) ? std::arg(bin) : Scalar(0);
  }
  return s;
}

template <typename Scalar>
Scalar thd(const HarmonicSpectrum<Scalar>& spec, int harmonic_limit) {
  if (!(spec.amplitudes.size() > 1) || !(spec.amplitudes[1] > Scalar(0)))
    throw std::domain_error("thd: zero fundamental, measure undefined");
  const int top = std::min(harmonic_limit, spec.max_order());
  Scalar acc = Scalar(0);
  for (int n = 2; n <= top; ++n) acc += spec.amplitudes[n] * spec.amplitudes[n];
  return Scalar(100) * std::sqrt(acc) / spec.amplitudes[1];
}

// Distortion factor: each harmonic attenuated by 1/n^2 (second-order filter
// convention).
template <typename Scalar>
Scalar df(const HarmonicSpectrum<Scalar>& spec, int harmonic_limit) {
  if (!(spec.amplitudes.size() > 1) || !(spec.amplitudes[1] > Scalar(0)))
    throw std::domain_error("df: zero fundamental, measure undefined");
  const int top = std::min(harmonic_limit, spec.max_order());
  Scalar acc = Scalar(0);
  for (int n = 2; n <= top; ++n) {
    const Scalar a = spec.amplitudes[n] / (Scalar(n) * Scalar(n));
    acc += a * a;
  }
  return Scalar(100) * std::sqrt(acc) / spec.amplitudes[1];
}

// Smallest order n >= 2 whose amplitude reaches threshold_pu * V1.
template <typename Scalar>
std::optional<int> lowest_order_harmonic(const HarmonicSpectrum<Scalar>& spec,
                                         Scalar threshold_pu = Scalar(0.02)) {
  if (!(threshold_pu > Scalar(0)))
    throw std::domain_error("lowest_order_harmonic: threshold must be > 0");
  if (!(spec.amplitudes.size() > 1) || !(spec.amplitudes[1] > Scalar(0)))
    throw std::domain_error("lowest_order_harmonic: zero fundamental");
  const Scalar floor = threshold_pu * spec.amplitudes[1];
  for (int n = 2; n <= spec.max_order(); ++n)
    if (spec.amplitudes[n] >= floor) return n;
  return std::nullopt;
}

// Amplitude-weighted centroid of the dominant sideband cluster. The cluster
// maximum is searched at orders >= min_search_order (pass M_bar + 1 for a
// switched waveform); the contiguous expansion may extend below it so that
// symmetric sidebands keep the centroid centered.
template <typename Scalar>
std::optional<Scalar> central_cluster_order(const HarmonicSpectrum<Scalar>& spec,
                                            int min_search_order = 2) {
  const int top = spec.max_order();
  const int lo_bound = std::max(min_search_order, 2);
  if (lo_bound > top) return std::nullopt;

  int peak = -1;
  for (int n = lo_bound; n <= top; ++n)
    if (peak < 0 || spec.amplitudes[n] > spec.amplitudes[peak]) peak = n;
  if (peak < 0 || !(spec.amplitudes[peak] > Scalar(1e-9))) return std::nullopt;

  const Scalar floor = Scalar(0.15) * spec.amplitudes[peak];
  // Cluster lines sit 2 apart; even orders (and triplens, line-to-line) are
  // suppressed, so tolerate holes up to `gap` before declaring the edge.
  const int gap = 4;
  const int reach = 20;  // hard cap so a neighbouring cluster is never merged
  int lo = peak, hi = peak;
  while (lo > 2 && peak - lo < reach) {
    int next = -1;
    for (int n = lo - 1; n >= 2 && n >= lo - gap; --n)
      if (spec.amplitudes[n] >= floor) next = n;
    if (next < 0) break;
    lo = next;
  }
  while (hi < top && hi - peak < reach) {
    int next = -1;
    for (int n = hi + 1; n <= top && n <= hi + gap; ++n)
      if (spec.amplitudes[n] >= floor) next = n;
    if (next < 0) break;
    hi = next;
  }

  Scalar num = Scalar(0), den = Scalar(0);
  for (int n = lo; n <= hi; ++n) {
    if (spec.amplitudes[n] < floor) continue;
    num += Scalar(n) * spec.amplitudes[n];
    den += spec.amplitudes[n];
  }
  if (!(den > Scalar(0))) return std::nullopt;
  return num / den;
}

template <typename Scalar = double>
struct DistortionReport {
  Scalar fundamental_pu = Scalar(0);
  Scalar thd_percent = Scalar(0);
  Scalar df_percent = Scalar(0);
  int loh_order = 0;  // 0 = no harmonic above threshold
  Scalar central_cluster = Scalar(0);  // 0 = none
  int harmonic_limit = 100;
};

template <typename Scalar>
DistortionReport<Scalar> make_distortion_report(const HarmonicSpectrum<Scalar>& spec,
                                                int harmonic_limit,
                                                int cluster_min_order = 2,
                                                Scalar loh_threshold = Scalar(0.02)) {
  DistortionReport<Scalar> r;
  r.fundamental_pu = spec.amplitudes[1];
  r.thd_percent = thd(spec, harmonic_limit);
  r.df_percent = df(spec, harmonic_limit);
  r.loh_order = lowest_order_harmonic(spec, loh_threshold).value_or(0);
  r.central_cluster = central_cluster_order(spec, cluster_min_order).value_or(Scalar(0));
  r.harmonic_limit = harmonic_limit;
  return r;
}

}  // namespace pwmlab

#endif  // PWMLAB_SPECTRUM_HPP
