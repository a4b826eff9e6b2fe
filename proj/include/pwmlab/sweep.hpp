// Parameter studies over the truncation level K, strategy comparisons, and
// the motor slot-harmonic sensitivity proxy that stands in for vibration
// measurements.

#ifndef PWMLAB_SWEEP_HPP
#define PWMLAB_SWEEP_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "pwmlab/analytic.hpp"
#include "pwmlab/spectrum.hpp"
#include "pwmlab/waveform.hpp"

namespace pwmlab {

template <typename Scalar = double>
struct AnalysisConfig {
  Scalar fundamental_hz = Scalar(50);
  Scalar dc_link = Scalar(1);
  int samples_per_period = 16384;
  int n_periods = 1;
  int harmonic_limit = 100;
  Scalar loh_threshold = Scalar(0.02);
  Scalar amplitude_index = Scalar(1);

  Scalar omega_m() const { return Scalar(2) * Scalar(kPi) * fundamental_hz; }
  SamplingSpec sampling() const {
    return SamplingSpec{double(fundamental_hz) * samples_per_period, n_periods};
  }
};

// --- strategies -------------------------------------------------------------

enum class StrategyKind { SPWM, HISPWM, FMTC3 };

template <typename Scalar = double>
struct StrategySpec {
  StrategyKind kind = StrategyKind::FMTC3;
  int m = 15;            // SPWM / HISPWM carrier order
  Scalar k = Scalar(0.5);  // FMTC3 truncation level
  Scalar m_bar = Scalar(15);

  static StrategySpec spwm(int m) { return {StrategyKind::SPWM, m, Scalar(0), Scalar(m)}; }
  static StrategySpec hispwm(int m) { return {StrategyKind::HISPWM, m, Scalar(0), Scalar(m)}; }
  static StrategySpec fmtc3(Scalar k, Scalar m_bar) {
    return {StrategyKind::FMTC3, 0, k, m_bar};
  }

  std::string label() const {
    switch (kind) {
      case StrategyKind::SPWM: return "SPWM(M=" + std::to_string(m) + ")";
      case StrategyKind::HISPWM: return "HISPWM(M=" + std::to_string(m) + ")";
      default: {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "HIPWM-FMTC3(K=%g,Mbar=%g)", double(k), double(m_bar));
        return buf;
      }
    }
  }

  ModulatingWave<Scalar> modulator(Scalar amplitude_index) const {
    ModulatingWave<Scalar> w;
    w.kind = (kind == StrategyKind::SPWM) ? ModulatorKind::Sinusoidal
                                          : ModulatorKind::HarmonicInjection;
    w.amplitude_index = amplitude_index;
    return w;
  }

  CarrierSpec<Scalar> carrier(Scalar omega_m) const {
    if (kind == StrategyKind::FMTC3)
      return CarrierSpec<Scalar>::truncated(solve_a_m(k, m_bar), k, omega_m);
    return CarrierSpec<Scalar>::fixed(m, omega_m);
  }
};

template <typename Scalar = double>
struct StrategyAnalysis {
  DistortionReport<Scalar> report;
  HarmonicSpectrum<Scalar> spectrum;  // line-to-line V_AB, pu of E
};

// Synthesize three-phase voltages for a strategy and analyze the line-to-line
// spectrum in pu of the DC link.
template <typename Scalar>
StrategyAnalysis<Scalar> analyze_strategy(const StrategySpec<Scalar>& strat,
                                          const AnalysisConfig<Scalar>& cfg) {
  const auto carrier = strat.carrier(cfg.omega_m());
  const auto mod = strat.modulator(cfg.amplitude_index);
  const auto phases = synthesize_three_phase(mod, carrier, cfg.dc_link, cfg.sampling());

  SampledWaveform<Scalar> vab = phases.line_to_line[0];
  vab.samples /= cfg.dc_link;  // pu of E

  const int m_bar = int(std::lround(double(mean_modulation_order(carrier))));
  const int max_order = std::min(std::max(cfg.harmonic_limit, 120), vab.samples_per_period() / 2);
  StrategyAnalysis<Scalar> out;
  out.spectrum = harmonic_spectrum(vab, max_order);
  out.report = make_distortion_report(out.spectrum, cfg.harmonic_limit, m_bar + 1,
                                      cfg.loh_threshold);
  return out;
}

// --- motor sensitivity proxy -------------------------------------------------

template <typename Scalar = double>
struct MotorSensitivityProfile {
  int rotor_bars = 30;
  int pole_pairs = 2;
  Scalar slip = Scalar(0);
  Scalar supply_hz = Scalar(50);
  std::map<int, Scalar> weights;  // per-order; missing orders weigh 1
};

// Slot-harmonic orders n*bars/pp*(1-s) with +-2 sidebands, plus the
// rotor-MMF product family 2*((bars/pp)*n +- 1), filtered to [2, max_order].
template <typename Scalar>
std::vector<int> derive_sensitive_orders(const MotorSensitivityProfile<Scalar>& profile,
                                         int n_max, int max_order = 100) {
  if (profile.rotor_bars < 1 || profile.pole_pairs < 1)
    throw std::domain_error("derive_sensitive_orders: rotor_bars and pole_pairs must be >= 1");
  std::set<int> orders;
  const Scalar slot_base = Scalar(profile.rotor_bars) / Scalar(profile.pole_pairs) *
                           (Scalar(1) - profile.slip);
  const Scalar mmf_base = Scalar(profile.rotor_bars) / Scalar(profile.pole_pairs);
  for (int n = 1; n <= n_max; ++n) {
    const int slot = int(std::lround(double(slot_base * Scalar(n))));
    orders.insert(slot - 2);
    orders.insert(slot);
    orders.insert(slot + 2);
    orders.insert(int(std::lround(2.0 * (double(mmf_base) * n + 1.0))));
    orders.insert(int(std::lround(2.0 * (double(mmf_base) * n - 1.0))));
  }
  std::vector<int> out;
  for (int o : orders)
    if (o >= 2 && o <= max_order) out.push_back(o);
  return out;
}

// RMS of the weighted sensitive-order amplitudes relative to the fundamental.
template <typename Scalar>
Scalar sensitivity_score(const HarmonicSpectrum<Scalar>& spec,
                         const MotorSensitivityProfile<Scalar>& profile, int n_max = 2) {
  if (!(spec.amplitudes.size() > 1) || !(spec.amplitudes[1] > Scalar(0)))
    throw std::domain_error("sensitivity_score: zero fundamental, measure undefined");
  Scalar acc = Scalar(0);
  for (int order : derive_sensitive_orders(profile, n_max, spec.max_order())) {
    const auto it = profile.weights.find(order);
    const Scalar w = (it == profile.weights.end()) ? Scalar(1) : it->second;
    const Scalar term = w * spec.amplitudes[order] / spec.amplitudes[1];
    acc += term * term;
  }
  return std::sqrt(acc);
}

// --- K sweep ------------------------------------------------------------------

template <typename Scalar = double>
struct SweepEntry {
  Scalar k = Scalar(0);
  Scalar a_m = Scalar(0);
  DistortionReport<Scalar> report;
  std::string error;  // empty on success
};

template <typename Scalar = double>
struct SweepResult {
  Scalar m_bar = Scalar(15);
  std::vector<SweepEntry<Scalar>> entries;  // ordered by K
};

template <typename Scalar>
SweepResult<Scalar> sweep_k(std::vector<Scalar> k_values, Scalar m_bar,
                            const AnalysisConfig<Scalar>& cfg) {
  std::sort(k_values.begin(), k_values.end());
  SweepResult<Scalar> result;
  result.m_bar = m_bar;
  for (Scalar k : k_values) {
    SweepEntry<Scalar> e;
    e.k = k;
    try {
      e.a_m = solve_a_m(k, m_bar);
      e.report = analyze_strategy(StrategySpec<Scalar>::fmtc3(k, m_bar), cfg).report;
    } catch (const std::exception& ex) {
      e.error = std::string("K=") + std::to_string(double(k)) + ": " + ex.what();
    }
    result.entries.push_back(std::move(e));
  }
  return result;
}

// --- optimizer ------------------------------------------------------------------

enum class Objective { THD, DF, Sensitivity };

template <typename Scalar = double>
struct OptimizeResult {
  Scalar k = Scalar(0);
  Scalar value = Scalar(0);
  bool grid_only = false;
  std::vector<std::pair<Scalar, Scalar>> trace;  // (K, objective) evaluations
};

namespace detail {

template <typename Scalar>
Scalar objective_value(Objective obj, const StrategyAnalysis<Scalar>& a,
                       const MotorSensitivityProfile<Scalar>& profile) {
  switch (obj) {
    case Objective::THD: return a.report.thd_percent;
    case Objective::DF: return a.report.df_percent;
    default: return sensitivity_score(a.spectrum, profile);
  }
}

}  // namespace detail

// Coarse 0.05 grid followed by golden-section refinement on the bracket
// around the best grid point. Falls back to the best grid point (flagged
// grid_only) if refinement fails to improve, which guards against
// non-unimodal brackets.
template <typename Scalar>
OptimizeResult<Scalar> optimize_k(Objective objective, Scalar m_bar, Scalar k_lo, Scalar k_hi,
                                  Scalar tolerance, const AnalysisConfig<Scalar>& cfg,
                                  const MotorSensitivityProfile<Scalar>& profile = {}) {
  if (!(k_lo >= Scalar(0)) || !(k_hi <= Scalar(0.9)) || !(k_lo <= k_hi))
    throw std::domain_error("optimize_k: bounds must satisfy 0 <= k_lo <= k_hi <= 0.9");
  if (!(tolerance > Scalar(0))) throw std::domain_error("optimize_k: tolerance must be > 0");

  OptimizeResult<Scalar> result;
  const auto eval = [&](Scalar k) {
    const Scalar v =
        detail::objective_value(objective, analyze_strategy(StrategySpec<Scalar>::fmtc3(k, m_bar), cfg),
                                profile);
    result.trace.emplace_back(k, v);
    return v;
  };

  if (k_hi - k_lo < tolerance) {  // collapsed bounds
    result.k = k_lo;
    result.value = eval(k_lo);
    return result;
  }

  // coarse grid, step 0.05
  std::vector<Scalar> grid;
  for (Scalar k = k_lo; k < k_hi - Scalar(0.025); k += Scalar(0.05)) grid.push_back(k);
  grid.push_back(k_hi);
  Scalar best_k = grid[0], best_v = eval(grid[0]);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const Scalar v = eval(grid[i]);
    if (v < best_v) {
      best_v = v;
      best_k = grid[i];
    }
  }

  // golden-section refinement on the bracket around the best grid point
  Scalar a = std::max(k_lo, best_k - Scalar(0.05));
  Scalar b = std::min(k_hi, best_k + Scalar(0.05));
  const Scalar inv_phi = Scalar(0.6180339887498949);
  Scalar x1 = b - inv_phi * (b - a);
  Scalar x2 = a + inv_phi * (b - a);
  Scalar f1 = eval(x1), f2 = eval(x2);
  int guard = 0;
  while (b - a > tolerance && guard++ < 200) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = eval(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = eval(x2);
    }
  }
  const Scalar k_ref = (f1 <= f2) ? x1 : x2;
  const Scalar v_ref = std::min(f1, f2);
  if (v_ref <= best_v) {
    result.k = k_ref;
    result.value = v_ref;
  } else {
    result.k = best_k;
    result.value = best_v;
    result.grid_only = true;
  }
  return result;
}

// --- strategy comparison -----------------------------------------------------

template <typename Scalar = double>
struct CompareRow {
  std::string label;
  DistortionReport<Scalar> report;
};

template <typename Scalar>
std::vector<CompareRow<Scalar>> compare_strategies(const std::vector<StrategySpec<Scalar>>& strategies,
                                                   const AnalysisConfig<Scalar>& cfg) {
  std::vector<CompareRow<Scalar>> rows;
  rows.reserve(strategies.size());
  for (const auto& s : strategies)
    rows.push_back({s.label(), analyze_strategy(s, cfg).report});
  return rows;
}

}  // namespace pwmlab

#endif  // PWMLAB_SWEEP_HPP
