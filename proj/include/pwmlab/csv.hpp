// CSV export/import: RFC-4180-style, header row, 12 significant digits,
// LF line endings, bit-exact across runs.

#ifndef PWMLAB_CSV_HPP
#define PWMLAB_CSV_HPP

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pwmlab/spectrum.hpp"
#include "pwmlab/sweep.hpp"
#include "pwmlab/waveform.hpp"

namespace pwmlab::csv {

inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

// t, V_A, V_B, V_C, V_AB, carrier, modulator (carrier/modulator of leg A)
template <typename Scalar>
std::string waveform_csv(const ThreePhaseVoltages<Scalar>& v, const CarrierSpec<Scalar>& spec,
                         const ModulatingWave<Scalar>& mod) {
  std::string s = "t,V_A,V_B,V_C,V_AB,carrier,modulator\n";
  const auto& a = v.pole[0];
  const Scalar dt = Scalar(1) / a.sample_rate;
  for (long i = 0; i < a.samples.size(); ++i) {
    const Scalar t = dt * Scalar(i);
    const Scalar u = spec.omega_m * t;
    s += format_number(double(t));
    s += ',';
    s += format_number(double(a.samples[i]));
    s += ',';
    s += format_number(double(v.pole[1].samples[i]));
    s += ',';
    s += format_number(double(v.pole[2].samples[i]));
    s += ',';
    s += format_number(double(v.line_to_line[0].samples[i]));
    s += ',';
    s += format_number(double(detail::carrier_sample(u + mod.phase_offset_rad, spec)));
    s += ',';
    s += format_number(double(detail::modulator_sample(mod, u)));
    s += '\n';
  }
  return s;
}

template <typename Scalar>
std::string spectrum_csv(const HarmonicSpectrum<Scalar>& spec) {
  std::string s = "order,amplitude_pu,phase\n";
  for (int n = 0; n <= spec.max_order(); ++n) {
    s += std::to_string(n);
    s += ',';
    s += format_number(double(spec.amplitudes[n]));
    s += ',';
    s += format_number(double(spec.phases[n]));
    s += '\n';
  }
  return s;
}

inline const char* kReportHeader = "K,A_M,V1_pu,THD_pct,DF_pct,LOH,cluster_order\n";

template <typename Scalar>
std::string report_row(Scalar k, Scalar a_m, const DistortionReport<Scalar>& r) {
  std::string s;
  s += format_number(double(k));
  s += ',';
  s += format_number(double(a_m));
  s += ',';
  s += format_number(double(r.fundamental_pu));
  s += ',';
  s += format_number(double(r.thd_percent));
  s += ',';
  s += format_number(double(r.df_percent));
  s += ',';
  s += std::to_string(r.loh_order);
  s += ',';
  s += format_number(double(r.central_cluster));
  s += '\n';
  return s;
}

template <typename Scalar>
std::string sweep_csv(const SweepResult<Scalar>& result) {
  std::string s = kReportHeader;
  for (const auto& e : result.entries) {
    if (!e.error.empty()) continue;
    s += report_row(e.k, e.a_m, e.report);
  }
  return s;
}

template <typename Scalar>
std::string trace_csv(const OptimizeResult<Scalar>& result) {
  std::string s = "K,objective\n";
  for (const auto& [k, v] : result.trace) {
    s += format_number(double(k));
    s += ',';
    s += format_number(double(v));
    s += '\n';
  }
  return s;
}

// --- import ------------------------------------------------------------------

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  int column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return int(i);
    throw std::runtime_error("csv: no column named " + name);
  }
};

inline Table read_table(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  Table t;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("csv: empty file " + path);
  std::stringstream hs(line);
  std::string cell;
  while (std::getline(hs, cell, ',')) t.header.push_back(cell);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ls(line);
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace pwmlab::csv

#endif  // PWMLAB_CSV_HPP
