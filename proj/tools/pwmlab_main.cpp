// pwmlab: synthesize PWM inverter voltages (HIPWM-FMTC3, SPWM, HISPWM),
// analyze harmonic spectra, sweep and optimize the truncation level K, and
// compare strategies. All outputs are CSV files plus a stdout summary.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pwmlab/config.hpp"
#include "pwmlab/csv.hpp"
#include "pwmlab/sweep.hpp"

namespace {

using namespace pwmlab;

struct CommonOpts {
  std::string strategy = "fmtc3";
  double k = 0.5;
  std::optional<double> m_bar;
  std::optional<double> a_m;
  int m = 15;
  double fundamental_hz = 50.0;
  double dc_link = 1.0;
  int samples_per_period = 16384;
  int n_periods = 1;
  int harmonic_limit = 100;
  std::string out_dir = ".";
  std::string config_path;
};

// Applies config-file values to flag targets; command-line flags win.
class ConfigApplier {
 public:
  ConfigApplier(CLI::App* cmd, const std::string& path)
      : cmd_(cmd), kv_(detail_config::read_kv_file(path)) {}

  template <typename T>
  void apply(const std::string& key, T& target) {
    const auto it = kv_.find(key);
    recognized_.insert(key);
    if (it == kv_.end()) return;
    if (cmd_->count("--" + key) > 0) return;  // explicit flag overrides
    parse_into(key, it->second, target);
  }

  void finish() const {
    for (const auto& [key, value] : kv_)
      if (!recognized_.count(key))
        throw std::invalid_argument("config: unknown key '" + key + "' for this subcommand");
  }

 private:
  static void parse_into(const std::string& key, const std::string& text, double& v) {
    v = parse_double(key, text);
  }
  static void parse_into(const std::string& key, const std::string& text,
                         std::optional<double>& v) {
    v = parse_double(key, text);
  }
  static void parse_into(const std::string& key, const std::string& text, int& v) {
    std::size_t used = 0;
    v = std::stoi(text, &used);
    if (used != text.size())
      throw std::invalid_argument("config: bad integer for '" + key + "': " + text);
  }
  static void parse_into(const std::string&, const std::string& text, std::string& v) {
    v = text;
  }
  static double parse_double(const std::string& key, const std::string& text) {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size())
      throw std::invalid_argument("config: bad number for '" + key + "': " + text);
    return v;
  }

  CLI::App* cmd_;
  std::map<std::string, std::string> kv_;
  std::set<std::string> recognized_;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_strategy) {
  if (with_strategy) {
    cmd->add_option("--strategy", o.strategy, "fmtc3 | spwm | hispwm")
        ->check(CLI::IsMember({"fmtc3", "spwm", "hispwm"}));
    cmd->add_option("--k", o.k, "FMTC3 truncation level K in [0, 0.9]");
    cmd->add_option("--mbar", o.m_bar, "mean modulation order M_bar");
    cmd->add_option("--am", o.a_m, "carrier frequency scale A_M");
    cmd->add_option("--m", o.m, "fixed carrier order M (spwm/hispwm)");
  }
  cmd->add_option("--fundamental-hz", o.fundamental_hz, "modulating frequency, Hz");
  cmd->add_option("--dc-link", o.dc_link, "DC link voltage E (default 1 pu)");
  cmd->add_option("--samples-per-period", o.samples_per_period, "synchronous samples per period");
  cmd->add_option("--n-periods", o.n_periods, "periods to synthesize");
  cmd->add_option("--harmonic-limit", o.harmonic_limit, "THD/DF harmonic limit");
  cmd->add_option("--out,-o", o.out_dir, "output directory");
  cmd->add_option("--config", o.config_path, "flat key=value config file; flags override");
}

// Merge config-file values under the parsed flags; returns the applier so
// subcommand-specific keys can be layered on before finish().
ConfigApplier apply_common_config(CLI::App* cmd, CommonOpts& o, bool with_strategy) {
  ConfigApplier cfg(cmd, o.config_path);
  if (with_strategy) {
    cfg.apply("strategy", o.strategy);
    cfg.apply("k", o.k);
    cfg.apply("mbar", o.m_bar);
    cfg.apply("am", o.a_m);
    cfg.apply("m", o.m);
  }
  cfg.apply("fundamental-hz", o.fundamental_hz);
  cfg.apply("dc-link", o.dc_link);
  cfg.apply("samples-per-period", o.samples_per_period);
  cfg.apply("n-periods", o.n_periods);
  cfg.apply("harmonic-limit", o.harmonic_limit);
  cfg.apply("out", o.out_dir);
  return cfg;
}

StrategySpec<double> make_strategy(const CommonOpts& o) {
  if (o.strategy == "spwm") return StrategySpec<double>::spwm(o.m);
  if (o.strategy == "hispwm") return StrategySpec<double>::hispwm(o.m);
  if (o.strategy != "fmtc3")
    throw std::invalid_argument("unknown strategy: " + o.strategy);
  return resolve_fmtc3(o.k, o.m_bar, o.a_m);
}

AnalysisConfig<double> make_analysis(const CommonOpts& o) {
  AnalysisConfig<double> cfg;
  cfg.fundamental_hz = o.fundamental_hz;
  cfg.dc_link = o.dc_link;
  cfg.samples_per_period = o.samples_per_period;
  cfg.n_periods = o.n_periods;
  cfg.harmonic_limit = o.harmonic_limit;
  return cfg;
}

std::string out_path(const CommonOpts& o, const std::string& name) {
  const std::string dir = resolve_out_dir(o.out_dir);
  std::filesystem::create_directories(dir);
  return (std::filesystem::path(dir) / name).string();
}

void print_report(const std::string& label, double k, double a_m,
                  const DistortionReport<double>& r) {
  std::printf("%-28s V1=%.4f pu  THD=%.2f%%  DF=%.3f%%  LOH=%d  cluster=%.2f  (limit %d)\n",
              label.c_str(), r.fundamental_pu, r.thd_percent, r.df_percent, r.loh_order,
              r.central_cluster, r.harmonic_limit);
  (void)k;
  (void)a_m;
}

int run_synth(const CommonOpts& o) {
  const auto strat = make_strategy(o);
  const auto cfg = make_analysis(o);
  const auto carrier = strat.carrier(cfg.omega_m());
  const auto mod = strat.modulator(cfg.amplitude_index);
  const auto v = synthesize_three_phase(mod, carrier, cfg.dc_link, cfg.sampling());
  for (const auto& w : v.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
  const std::string path = out_path(o, "synth.csv");
  csv::write_file(path, csv::waveform_csv(v, carrier, mod));
  std::printf("%s: %ld samples -> %s\n", strat.label().c_str(),
              long(v.pole[0].samples.size()), path.c_str());
  return 0;
}

int run_spectrum(const CommonOpts& o) {
  const auto strat = make_strategy(o);
  auto cfg = make_analysis(o);
  const auto analysis = analyze_strategy(strat, cfg);
  const double a_m = (strat.kind == StrategyKind::FMTC3) ? solve_a_m(strat.k, strat.m_bar) : 0.0;

  const std::string spath = out_path(o, "spectrum.csv");
  csv::write_file(spath, csv::spectrum_csv(analysis.spectrum));
  std::string report = csv::kReportHeader;
  report += csv::report_row(strat.k, a_m, analysis.report);
  const std::string rpath = out_path(o, "report.csv");
  csv::write_file(rpath, report);

  // convention-sensitivity: report THD/DF under limit 50 and 100 side by side
  print_report(strat.label(), strat.k, a_m, analysis.report);
  for (int limit : {50, 100})
    std::printf("  limit %3d: THD=%.2f%%  DF=%.3f%%\n", limit,
                thd(analysis.spectrum, limit), df(analysis.spectrum, limit));
  std::printf("wrote %s, %s\n", spath.c_str(), rpath.c_str());
  return 0;
}

int run_sweep(const CommonOpts& o, double k_min, double k_max, double k_step, double m_bar) {
  if (!(k_min >= 0.0 && k_max <= 0.9 && k_min <= k_max && k_step > 0.0))
    throw std::domain_error("sweep: require 0 <= k-min <= k-max <= 0.9 and k-step > 0");
  const auto cfg = make_analysis(o);
  std::vector<double> ks;
  for (double k = k_min; k <= k_max + 1e-9; k += k_step) ks.push_back(k);
  const auto result = sweep_k(ks, m_bar, cfg);
  const std::string path = out_path(o, "sweep.csv");
  csv::write_file(path, csv::sweep_csv(result));
  for (const auto& e : result.entries) {
    if (!e.error.empty()) {
      std::fprintf(stderr, "sweep point failed: %s\n", e.error.c_str());
      continue;
    }
    char label[32];
    std::snprintf(label, sizeof(label), "K=%.3f", e.k);
    print_report(label, e.k, e.a_m, e.report);
  }
  std::printf("wrote %s\n", path.c_str());
  return 0;
}

int run_optimize(const CommonOpts& o, const std::string& objective, double k_min, double k_max,
                 double tol, double m_bar, const MotorSensitivityProfile<double>& motor) {
  const auto cfg = make_analysis(o);
  Objective obj = Objective::THD;
  if (objective == "df") obj = Objective::DF;
  else if (objective == "sensitivity") obj = Objective::Sensitivity;
  const auto result = optimize_k(obj, m_bar, k_min, k_max, tol, cfg, motor);
  const std::string path = out_path(o, "optimize_trace.csv");
  csv::write_file(path, csv::trace_csv(result));
  std::printf("K* = %.6g  %s = %.6g%s  (%zu evaluations) -> %s\n", result.k, objective.c_str(),
              result.value, result.grid_only ? "  [grid-only: refinement did not improve]" : "",
              result.trace.size(), path.c_str());
  return 0;
}

// "spwm(15)", "hispwm(15)", "fmtc3(0.5,15)"
StrategySpec<double> parse_strategy_token(const std::string& token) {
  const auto open = token.find('(');
  const auto close = token.rfind(')');
  if (open == std::string::npos || close == std::string::npos || close < open)
    throw std::invalid_argument("compare: expected name(args), got: " + token);
  const std::string name = token.substr(0, open);
  const std::string args = token.substr(open + 1, close - open - 1);
  if (name == "spwm") return StrategySpec<double>::spwm(std::stoi(args));
  if (name == "hispwm") return StrategySpec<double>::hispwm(std::stoi(args));
  if (name == "fmtc3") {
    const auto comma = args.find(',');
    if (comma == std::string::npos)
      throw std::invalid_argument("compare: fmtc3 needs (K,M_bar), got: " + token);
    return resolve_fmtc3(std::stod(args.substr(0, comma)),
                         std::stod(args.substr(comma + 1)), std::nullopt);
  }
  throw std::invalid_argument("compare: unknown strategy: " + name);
}

int run_compare(const CommonOpts& o, const std::vector<std::string>& tokens) {
  if (tokens.empty()) throw std::invalid_argument("compare: no strategies given");
  std::vector<StrategySpec<double>> strategies;
  for (const auto& t : tokens) strategies.push_back(parse_strategy_token(t));
  const auto cfg = make_analysis(o);
  const auto rows = compare_strategies(strategies, cfg);
  std::string out = "strategy,V1_pu,THD_pct,DF_pct,LOH,cluster_order\n";
  for (const auto& row : rows) {
    print_report(row.label, 0, 0, row.report);
    out += row.label + ',' + csv::format_number(row.report.fundamental_pu) + ',' +
           csv::format_number(row.report.thd_percent) + ',' +
           csv::format_number(row.report.df_percent) + ',' +
           std::to_string(row.report.loh_order) + ',' +
           csv::format_number(row.report.central_cluster) + '\n';
  }
  const std::string path = out_path(o, "compare.csv");
  csv::write_file(path, out);
  std::printf("wrote %s\n", path.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PWM inverter waveform synthesis and harmonic analysis"};
  app.require_subcommand(1);

  CommonOpts o;

  auto* synth = app.add_subcommand("synth", "synthesize three-phase voltages to CSV");
  add_common(synth, o, true);

  auto* spectrum = app.add_subcommand("spectrum", "harmonic spectrum + distortion report");
  add_common(spectrum, o, true);

  auto* sweep = app.add_subcommand("sweep", "sweep K at fixed M_bar");
  double k_min = 0.2, k_max = 0.7, k_step = 0.1, m_bar = 15.0;
  sweep->add_option("--k-min", k_min);
  sweep->add_option("--k-max", k_max);
  sweep->add_option("--k-step", k_step);
  sweep->add_option("--mbar", m_bar, "mean modulation order");
  add_common(sweep, o, false);

  auto* optimize = app.add_subcommand("optimize", "search K minimizing an objective");
  std::string objective = "thd";
  double tol = 0.01;
  double opt_k_min = 0.2, opt_k_max = 0.7, opt_m_bar = 15.0;
  MotorSensitivityProfile<double> motor;
  optimize->add_option("--objective", objective, "thd | df | sensitivity")
      ->check(CLI::IsMember({"thd", "df", "sensitivity"}));
  optimize->add_option("--k-min", opt_k_min);
  optimize->add_option("--k-max", opt_k_max);
  optimize->add_option("--tol", tol, "bracket tolerance on K");
  optimize->add_option("--mbar", opt_m_bar, "mean modulation order");
  optimize->add_option("--rotor-bars", motor.rotor_bars);
  optimize->add_option("--pole-pairs", motor.pole_pairs);
  optimize->add_option("--slip", motor.slip);
  add_common(optimize, o, false);

  auto* compare = app.add_subcommand("compare", "compare strategies under one analysis config");
  std::vector<std::string> tokens;
  compare->add_option("--specs", tokens,
                      "strategies, e.g. \"spwm(15)\" \"hispwm(15)\" \"fmtc3(0.5,15)\"");
  add_common(compare, o, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed()) {
      if (!o.config_path.empty()) apply_common_config(synth, o, true).finish();
      return run_synth(o);
    }
    if (spectrum->parsed()) {
      if (!o.config_path.empty()) apply_common_config(spectrum, o, true).finish();
      return run_spectrum(o);
    }
    if (sweep->parsed()) {
      if (!o.config_path.empty()) {
        auto cfg = apply_common_config(sweep, o, false);
        cfg.apply("k-min", k_min);
        cfg.apply("k-max", k_max);
        cfg.apply("k-step", k_step);
        cfg.apply("mbar", m_bar);
        cfg.finish();
      }
      return run_sweep(o, k_min, k_max, k_step, m_bar);
    }
    if (optimize->parsed()) {
      if (!o.config_path.empty()) {
        auto cfg = apply_common_config(optimize, o, false);
        cfg.apply("objective", objective);
        cfg.apply("k-min", opt_k_min);
        cfg.apply("k-max", opt_k_max);
        cfg.apply("tol", tol);
        cfg.apply("mbar", opt_m_bar);
        cfg.apply("rotor-bars", motor.rotor_bars);
        cfg.apply("pole-pairs", motor.pole_pairs);
        cfg.apply("slip", motor.slip);
        cfg.finish();
      }
      return run_optimize(o, objective, opt_k_min, opt_k_max, tol, opt_m_bar, motor);
    }
    if (compare->parsed()) {
      if (!o.config_path.empty()) apply_common_config(compare, o, false).finish();
      return run_compare(o, tokens);
    }
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return 1;
  }
  return 0;
}
