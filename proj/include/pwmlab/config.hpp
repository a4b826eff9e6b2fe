// Run configuration: flat key=value config files mirroring CLI flag names,
// flag overrides, validation of the (K, M_bar, A_M) constraint.

#ifndef PWMLAB_CONFIG_HPP
#define PWMLAB_CONFIG_HPP

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "pwmlab/sweep.hpp"

namespace pwmlab {

struct RunConfig {
  StrategySpec<double> strategy = StrategySpec<double>::fmtc3(0.5, 15);
  AnalysisConfig<double> analysis;
  std::string out_dir = ".";

  // sweep
  double k_min = 0.2, k_max = 0.7, k_step = 0.1;
  // optimize
  Objective objective = Objective::THD;
  double tolerance = 0.01;
  MotorSensitivityProfile<double> motor;
};

namespace detail_config {

inline std::map<std::string, std::string> read_kv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config: expected key=value, got: " + line);
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

}  // namespace detail_config

// Resolve the FMTC3 parameter triple. Exactly one of (k, m_bar) / (k, a_m)
// must pin the carrier; if both m_bar and a_m are given they must agree
// through the mean-order relation within 1e-6 relative.
inline StrategySpec<double> resolve_fmtc3(double k, std::optional<double> m_bar,
                                          std::optional<double> a_m) {
  if (!(k >= 0.0 && k <= 0.9))
    throw std::domain_error("K must lie in [0, 0.9], got " + std::to_string(k));
  if (!m_bar && !a_m)
    throw std::invalid_argument("fmtc3 needs --mbar or --am alongside --k");
  if (m_bar && a_m) {
    const double implied = solve_a_m(k, *m_bar);
    if (std::abs(implied - *a_m) > 1e-6 * std::abs(implied))
      throw std::invalid_argument(
          "inconsistent parameters: --mbar " + std::to_string(*m_bar) + " implies A_M = " +
          std::to_string(implied) + " at K = " + std::to_string(k) + ", but --am " +
          std::to_string(*a_m) + " was given");
    return StrategySpec<double>::fmtc3(k, *m_bar);
  }
  if (m_bar) return StrategySpec<double>::fmtc3(k, *m_bar);
  const double derived =
      mean_modulation_order(CarrierSpec<double>::truncated(*a_m, k, 100.0 * kPi));
  return StrategySpec<double>::fmtc3(k, derived);
}

// Output directory resolution: PWM_LAB_OUT env var wins over the configured
// value.
inline std::string resolve_out_dir(const std::string& configured) {
  if (const char* env = std::getenv("PWM_LAB_OUT"); env && *env) return env;
  return configured;
}

}  // namespace pwmlab

#endif  // PWMLAB_CONFIG_HPP
