#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "pwmlab/waveform.hpp"

using namespace pwmlab;

namespace {
constexpr double kOmega = 100.0 * kPi;  // 50 Hz

ModulatingWave<double> hi_wave(double amp = 1.0, double offset = 0.0) {
  return {ModulatorKind::HarmonicInjection, amp, offset};
}

ModulatingWave<double> sine_wave(double amp = 1.0, double offset = 0.0) {
  return {ModulatorKind::Sinusoidal, amp, offset};
}
}  // namespace

TEST_CASE("modulator: harmonic-injection values") {
  const auto w = hi_wave();
  CHECK(modulator_value(w, 0.0) == doctest::Approx(0.0).epsilon(1e-12));
  // peak of the shifted-sine form: 1.15 - 0.27 - 0.029... evaluated at pi/2
  CHECK(modulator_value(w, kPi / 2) == doctest::Approx(1.15 - 0.27 - 0.029).epsilon(1e-12));
  // amplitude index scales linearly
  CHECK(modulator_value(hi_wave(0.5), 0.7) ==
        doctest::Approx(0.5 * modulator_value(w, 0.7)).epsilon(1e-12));
}

TEST_CASE("modulator: sinusoidal kind is a plain sine") {
  const auto w = sine_wave(0.8);
  for (double x : {0.0, 0.3, 1.1, 2.9, 4.4})
    CHECK(modulator_value(w, x) == doctest::Approx(0.8 * std::sin(x)).epsilon(1e-14));
}

TEST_CASE("modulator: half-wave antisymmetry and bounded peak") {
  const auto w = hi_wave();
  double peak = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const double x = 2 * kPi * i / 20000.0;
    CHECK(modulator_value(w, x + kPi) == doctest::Approx(-modulator_value(w, x)).epsilon(1e-12));
    peak = std::max(peak, std::abs(modulator_value(w, x)));
  }
  // the injected 3rd/9th harmonics flatten the crest: |H| stays within ~1
  CHECK(peak <= 1.005);
  CHECK(peak > 0.99);
}

TEST_CASE("modulator: phase offset shifts the argument") {
  const auto w = hi_wave(1.0, -2 * kPi / 3);
  CHECK(modulator_value(w, 0.4) ==
        doctest::Approx(modulator_value(hi_wave(), 0.4 - 2 * kPi / 3)).epsilon(1e-14));
}

TEST_CASE("solve_a_m: printed table rows") {
  // K=0.5 lands exactly on 30*pi
  CHECK(solve_a_m(0.5, 15.0) == doctest::Approx(30.0 * kPi).epsilon(1e-12));
  CHECK(solve_a_m(0.2, 15.0) == doctest::Approx(44.277).epsilon(1e-4));
  CHECK(solve_a_m(0.8, 15.0) == doctest::Approx(386.859).epsilon(1e-4));
  // untruncated law: mean order equals A_M/2
  CHECK(solve_a_m(0.0, 15.0) == doctest::Approx(30.0).epsilon(1e-12));
}

TEST_CASE("solve_a_m: domain errors") {
  CHECK_THROWS_AS(solve_a_m(-0.1, 15.0), std::domain_error);
  CHECK_THROWS_AS(solve_a_m(1.0, 15.0), std::domain_error);
  CHECK_THROWS_AS(solve_a_m(0.5, 0.0), std::domain_error);
}

TEST_CASE("mean_modulation_order: direct and fixed-carrier cases") {
  CHECK(mean_modulation_order(CarrierSpec<double>::truncated(30.0 * kPi, 0.5, kOmega)) ==
        doctest::Approx(15.0).epsilon(1e-12));
  CHECK(mean_modulation_order(CarrierSpec<double>::truncated(55.134, 0.3, kOmega)) ==
        doctest::Approx(15.0).epsilon(1e-3));
  CHECK(mean_modulation_order(CarrierSpec<double>::fixed(21, kOmega)) == 21.0);
}

TEST_CASE("mean_modulation_order: inverse of solve_a_m on the K grid") {
  for (int i = 0; i <= 18; ++i) {
    const double k = 0.05 * i;
    const double a_m = solve_a_m(k, 15.0);
    const auto spec = CarrierSpec<double>::truncated(a_m, k, kOmega);
    CHECK(mean_modulation_order(spec) == doctest::Approx(15.0).epsilon(1e-12));
  }
}

TEST_CASE("carrier spec factories validate") {
  CHECK_THROWS_AS(CarrierSpec<double>::truncated(-1.0, 0.5, kOmega), std::domain_error);
  CHECK_THROWS_AS(CarrierSpec<double>::truncated(30.0, 1.0, kOmega), std::domain_error);
  CHECK_THROWS_AS(CarrierSpec<double>::fixed(0, kOmega), std::domain_error);
  CHECK_THROWS_AS(CarrierSpec<double>::fixed(15, -kOmega), std::domain_error);
}

TEST_CASE("switching_windows: K=0.5 gives the quarter-split") {
  const auto w = switching_windows(0.5, kOmega);
  CHECK(w.t1 == doctest::Approx(2.5e-3).epsilon(1e-12));
  CHECK(w.t2 == doctest::Approx(7.5e-3).epsilon(1e-12));
  CHECK(w.t3 == doctest::Approx(12.5e-3).epsilon(1e-12));
  CHECK(w.t4 == doctest::Approx(17.5e-3).epsilon(1e-12));
  CHECK(w.active_halfwidth_rad == doctest::Approx(kPi / 4).epsilon(1e-12));
}

TEST_CASE("switching_windows: K=0 degenerates to back-to-back active halves") {
  const auto w = switching_windows(0.0, kOmega);
  CHECK(w.t1 == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(w.t2 == doctest::Approx(10e-3).epsilon(1e-12));
  CHECK(w.t3 == doctest::Approx(10e-3).epsilon(1e-12));
  CHECK(w.t4 == doctest::Approx(20e-3).epsilon(1e-12));
}

TEST_CASE("switching_windows: K=0.8 half-width") {
  const auto w = switching_windows(0.8, kOmega);
  CHECK(w.active_halfwidth_rad == doctest::Approx(std::acos(std::sqrt(0.8))).epsilon(1e-12));
  CHECK((w.t2 - w.t1) / 2 == doctest::Approx(1.476e-3).epsilon(1e-3));
}

TEST_CASE("switching_windows: structural invariants on random K") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(0.0, 0.95);
  for (int i = 0; i < 200; ++i) {
    const double k = dist(rng);
    const auto w = switching_windows(k, kOmega);
    CHECK(w.t1 >= 0.0);
    CHECK(w.t1 <= w.t2);
    CHECK(w.t2 <= w.t3);
    CHECK(w.t3 <= w.t4);
    CHECK(w.t4 <= 20e-3 + 1e-15);
    // active + frozen half-widths tile the quarter period
    CHECK(w.active_halfwidth_rad + w.frozen_halfwidth_rad ==
          doctest::Approx(kPi / 2).epsilon(1e-12));
    // window pattern is symmetric about the half period
    CHECK(w.t3 - 10e-3 == doctest::Approx(w.t1).epsilon(1e-9));
  }
  CHECK_THROWS_AS(switching_windows(1.0, kOmega), std::domain_error);
}

TEST_CASE("carrier_phase: untruncated closed form at K=0") {
  const auto spec = CarrierSpec<double>::truncated(30.0, 0.0, kOmega);
  for (double t : {0.0, 1e-3, 3.7e-3, 9.9e-3, 14.2e-3, 19.9e-3}) {
    const double x = kOmega * t;
    const double expected = 30.0 * (0.5 * x - std::sin(2 * x) / 4);
    CHECK(carrier_phase(t, spec) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("carrier_phase: frozen plateaus and active accrual at K=0.5") {
  const auto spec = CarrierSpec<double>::truncated(30.0 * kPi, 0.5, kOmega);
  const auto w = switching_windows(0.5, kOmega);
  // constant on the frozen windows
  CHECK(carrier_phase(0.0, spec) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(carrier_phase(w.t1, spec) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(carrier_phase(w.t2, spec) == doctest::Approx(15.0 * kPi).epsilon(1e-9));
  CHECK(carrier_phase(w.t3, spec) == doctest::Approx(15.0 * kPi).epsilon(1e-9));
  // per-period accrual is 2*pi*M_bar, and additive across periods
  CHECK(carrier_phase(20e-3, spec) == doctest::Approx(30.0 * kPi).epsilon(1e-12));
  CHECK(carrier_phase(20e-3 + 3e-3, spec) ==
        doctest::Approx(30.0 * kPi + carrier_phase(3e-3, spec)).epsilon(1e-12));
}

TEST_CASE("carrier_phase: quadrature oracle on random (K, M_bar)") {
  // integrate the clipped frequency law numerically and compare with the
  // closed form at several probe times
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> kdist(0.0, 0.9);
  std::uniform_int_distribution<int> mdist(6, 33);
  for (int trial = 0; trial < 10; ++trial) {
    const double k = kdist(rng);
    const double m_bar = mdist(rng);
    const double a_m = solve_a_m(k, m_bar);
    const auto spec = CarrierSpec<double>::truncated(a_m, k, kOmega);

    const int steps = 400000;
    const double dt = 20e-3 / steps;
    double acc = 0.0;
    int probe = 1;
    for (int i = 0; i < steps; ++i) {
      // Simpson-free trapezoid on a fine grid is ample at 1e-6 relative
      const double ta = i * dt, tb = (i + 1) * dt;
      const auto wi = [&](double t) {
        const double s = std::sin(kOmega * t);
        return std::max(0.0, a_m * kOmega * (s * s - k));
      };
      acc += 0.5 * (wi(ta) + wi(tb)) * dt;
      const double t_probe = probe * 2e-3;
      if (tb >= t_probe - 1e-15 && probe <= 10) {
        const double closed = carrier_phase(t_probe, spec);
        CHECK(std::abs(acc - closed) <= 1e-6 * std::max(1.0, closed));
        ++probe;
      }
    }
    CHECK(acc == doctest::Approx(2 * kPi * m_bar).epsilon(1e-6));
  }
}

TEST_CASE("carrier_phase: nondecreasing and continuous") {
  const auto spec = CarrierSpec<double>::truncated(solve_a_m(0.35, 15.0), 0.35, kOmega);
  double prev = carrier_phase(0.0, spec);
  for (int i = 1; i <= 40000; ++i) {
    const double cur = carrier_phase(i * 20e-3 / 40000.0, spec);
    CHECK(cur >= prev - 1e-12);
    CHECK(cur - prev <= spec.a_m * kOmega * 20e-3 / 40000.0 + 1e-9);  // no jumps
    prev = cur;
  }
}

TEST_CASE("carrier_value: unit triangle") {
  CHECK(carrier_value(0.0) == doctest::Approx(0.0));
  CHECK(carrier_value(kPi / 2) == doctest::Approx(1.0));
  CHECK(carrier_value(kPi) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(carrier_value(3 * kPi / 2) == doctest::Approx(-1.0));
  CHECK(carrier_value(kPi / 4) == doctest::Approx(0.5));
  CHECK(carrier_value(7.3 + 2 * kPi) == doctest::Approx(carrier_value(7.3)).epsilon(1e-12));
}

TEST_CASE("synthesize: SPWM fundamental near half the DC link") {
  const auto spec = CarrierSpec<double>::fixed(15, kOmega);
  const auto v = synthesize_pole_voltage(sine_wave(), spec, 1.0, SamplingSpec{});
  // project onto the fundamental directly
  const int n = v.samples_per_period();
  double a = 0, b = 0;
  for (int i = 0; i < n; ++i) {
    const double ang = 2 * kPi * i / n;
    a += v.samples[i] * std::cos(ang);
    b += v.samples[i] * std::sin(ang);
  }
  const double v1 = 2.0 * std::hypot(a, b) / n;
  CHECK(v1 == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("synthesize: frozen windows clamp to the modulator sign") {
  for (double k : {0.2, 0.5, 0.8}) {
    const auto spec = CarrierSpec<double>::truncated(solve_a_m(k, 15.0), k, kOmega);
    const auto w = switching_windows(k, kOmega);
    const auto v = synthesize_pole_voltage(hi_wave(), spec, 1.0, SamplingSpec{});
    const int n = v.samples_per_period();
    for (int i = 0; i < n; ++i) {
      const double t = 20e-3 * i / n;
      if (t < w.t1 || t > w.t4) CHECK(v.samples[i] == 0.5);
      if (t > w.t2 && t < w.t3) CHECK(v.samples[i] == -0.5);
    }
  }
}

TEST_CASE("synthesize: 30 edges per period and exact half-wave symmetry") {
  for (double k : {0.0, 0.2, 0.5, 0.7}) {
    const auto spec = CarrierSpec<double>::truncated(solve_a_m(k, 15.0), k, kOmega);
    const auto v = synthesize_pole_voltage(hi_wave(), spec, 1.0, SamplingSpec{});
    const int n = v.samples_per_period();
    int edges = 0;
    for (int i = 0; i < n; ++i)
      if (v.samples[i] != v.samples[(i + 1) % n]) ++edges;
    CHECK(edges == 30);
    for (int i = 0; i < n / 2; ++i)
      CHECK(v.samples[i] == -v.samples[i + n / 2]);
  }
}

TEST_CASE("synthesize: rejects non-integer mean order and bad sampling") {
  const auto bad = CarrierSpec<double>::truncated(solve_a_m(0.5, 15.3), 0.5, kOmega);
  CHECK_THROWS_AS(synthesize_pole_voltage(hi_wave(), bad, 1.0, SamplingSpec{}),
                  std::invalid_argument);
  const auto spec = CarrierSpec<double>::truncated(30.0 * kPi, 0.5, kOmega);
  CHECK_THROWS_AS(synthesize_pole_voltage(hi_wave(), spec, 1.0, SamplingSpec{50.0 * 1000.5, 1}),
                  std::invalid_argument);
  CHECK_THROWS_AS(synthesize_pole_voltage(hi_wave(), spec, 1.0, SamplingSpec{50.0 * 16384, 0}),
                  std::invalid_argument);
}

TEST_CASE("three-phase: line-to-line is the pole difference, poles are T/3 shifts") {
  const auto spec = CarrierSpec<double>::truncated(30.0 * kPi, 0.5, kOmega);
  const auto v = synthesize_three_phase(hi_wave(), spec, 1.0, SamplingSpec{});
  CHECK(v.warnings.empty());
  const int n = v.pole[0].samples_per_period();
  for (int i = 0; i < n; ++i) {
    CHECK(v.line_to_line[0].samples[i] == v.pole[0].samples[i] - v.pole[1].samples[i]);
    CHECK(v.line_to_line[1].samples[i] == v.pole[1].samples[i] - v.pole[2].samples[i]);
  }
  // each pole carries the same fundamental, a third of a period apart
  for (int p = 0; p < 3; ++p) {
    double a = 0, b = 0;
    for (int i = 0; i < n; ++i) {
      a += v.pole[p].samples[i] * std::cos(2 * kPi * i / n);
      b += v.pole[p].samples[i] * std::sin(2 * kPi * i / n);
    }
    CHECK(std::hypot(a, b) * 2 / n == doctest::Approx(0.5986).epsilon(0.02));
  }
}

TEST_CASE("three-phase: SPWM line-to-line takes three levels") {
  const auto spec = CarrierSpec<double>::fixed(15, kOmega);
  const auto v = synthesize_three_phase(sine_wave(), spec, 1.0, SamplingSpec{});
  for (long i = 0; i < v.line_to_line[0].samples.size(); ++i) {
    const double s = v.line_to_line[0].samples[i];
    CHECK((s == 1.0 || s == 0.0 || s == -1.0));
  }
}

TEST_CASE("three-phase: warns when M_bar is not an odd multiple of 3") {
  const auto even = CarrierSpec<double>::fixed(16, kOmega);
  CHECK_FALSE(synthesize_three_phase(sine_wave(), even, 1.0, SamplingSpec{}).warnings.empty());
  const auto ok = CarrierSpec<double>::fixed(15, kOmega);
  CHECK(synthesize_three_phase(sine_wave(), ok, 1.0, SamplingSpec{}).warnings.empty());
}
