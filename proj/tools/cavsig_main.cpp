// Command-line front end: coefficient reports, cutoff/time sweeps, envelope
// and power-law fit pipelines, signalling probabilities, and the oracle
// concordance suite.
//
// Exit codes: 0 success, 1 check failure, 2 invalid input, 3 cost guard.

#include <CLI11.hpp>
#include <cmath>
#include <complex>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "cavsig/channel.hpp"
#include "cavsig/oracle.hpp"
#include "cavsig/report.hpp"
#include "cavsig/run_config.hpp"
#include "cavsig/sweeps.hpp"
#include "cavsig/version.hpp"

namespace {

using namespace cavsig;

struct OutputTarget {
  std::unique_ptr<std::ofstream> file;
  std::ostream* stream = nullptr;
};

OutputTarget open_output(const std::string& path) {
  OutputTarget target;
  if (path.empty()) {
    target.stream = &std::cout;
    return target;
  }
  target.file = std::make_unique<std::ofstream>(path);
  if (!*target.file) throw std::invalid_argument("cannot open output file '" + path + "'");
  target.stream = target.file.get();
  return target;
}

void maybe_write_svg(const RunConfig& cfg, const SweepSeries& series, bool log_log) {
  if (!cfg.svg) return;
  if (cfg.output.empty()) {
    throw std::invalid_argument("--svg requires --out (no place to put the plot)");
  }
  std::ofstream svg(cfg.output + ".svg");
  if (!svg) throw std::invalid_argument("cannot open '" + cfg.output + ".svg'");
  write_series_svg(svg, series, log_log);
}

std::array<double, 2> effective_fit_window(const RunConfig& cfg) {
  if (cfg.fit_window[0] != 0.0 || cfg.fit_window[1] != 0.0) return cfg.fit_window;
  const double n = cfg.detector_b.resonance_mode;
  return {2.0 * n, 50.0 * n};
}

int run_coeffs(const RunConfig& cfg) {
  validate(cfg);
  const SecondOrderCoeffs second =
      compute_second_order(cfg.cavity, cfg.detector_a, cfg.detector_b, cfg.switching_time);
  OutputTarget out = open_output(cfg.output);
  write_header_comment(*out.stream, echo_config(cfg));
  *out.stream << "coefficient,value_re,value_im\n";
  const auto row = [&](const char* name, Complex v) {
    *out.stream << name << ',' << format_double(v.real()) << ',' << format_double(v.imag())
                << '\n';
  };
  row("P2", second.noise.p2);
  row("Q2", second.noise.q2);
  row("R2", second.noise.r2);
  row("S2", second.noise.s2);
  row("C2", second.signal.c2);
  row("D2", second.signal.d2);
  if (cfg.fourth_order) {
    const FourthOrderCoeffs fourth =
        compute_fourth_order(cfg.cavity, cfg.detector_a, cfg.detector_b, cfg.switching_time);
    row("A4", fourth.a4);
    row("B4", fourth.b4);
    row("P4", fourth.p4);
  }
  return 0;
}

SweepSeries envelope_pipeline(const RunConfig& cfg) {
  if (cfg.cutoff_grid.empty()) {
    throw std::invalid_argument("config field 'cutoff_grid': required for envelope pipelines");
  }
  SweepSeries series = cutoff_scan(cfg.coefficient, snapshot(cfg), cfg.cutoff_grid);
  series = envelope(series);
  if (cfg.normalize_reference) series = normalize_series(series, *cfg.normalize_reference);
  return series;
}

int run_sweep(const RunConfig& cfg) {
  validate(cfg);
  SweepSeries series;
  if (cfg.kind == "cutoff") {
    if (cfg.cutoff_grid.empty()) {
      throw std::invalid_argument("config field 'cutoff_grid': required for cutoff sweeps");
    }
    series = cutoff_scan(cfg.coefficient, snapshot(cfg), cfg.cutoff_grid);
  } else {
    if (cfg.time_grid.empty()) {
      throw std::invalid_argument("config field 'time_grid': required for time sweeps");
    }
    series = time_scan(cfg.coefficient, snapshot(cfg), cfg.time_grid, cfg.threads);
  }
  OutputTarget out = open_output(cfg.output);
  write_series_csv(*out.stream, series, echo_config(cfg));
  maybe_write_svg(cfg, series, cfg.kind == "cutoff");
  return 0;
}

int run_envelope(const RunConfig& cfg) {
  validate(cfg);
  const SweepSeries series = envelope_pipeline(cfg);
  OutputTarget out = open_output(cfg.output);
  write_series_csv(*out.stream, series, echo_config(cfg));
  maybe_write_svg(cfg, series, true);
  return 0;
}

int run_fit(const RunConfig& cfg, const std::string& fit_out) {
  validate(cfg);
  const SweepSeries series = envelope_pipeline(cfg);
  const auto window = effective_fit_window(cfg);
  const PowerLawFit fit = fit_power_law(series, window[0], window[1]);
  OutputTarget out = open_output(cfg.output);
  write_series_csv(*out.stream, series, echo_config(cfg));
  maybe_write_svg(cfg, series, true);
  const std::string fit_path =
      !fit_out.empty() ? fit_out : (cfg.output.empty() ? "" : cfg.output + ".fit.csv");
  OutputTarget fout = open_output(fit_path);
  write_fit_csv(*fout.stream, fit, echo_config(cfg));
  return 0;
}

int run_fermi(const RunConfig& cfg) {
  validate(cfg);
  const ChannelCoefficients coeffs =
      compute_channel(cfg.cavity, cfg.detector_a, cfg.detector_b, cfg.switching_time, true);
  if (const auto warning = regime_warning(coeffs)) {
    std::cerr << "warning: " << *warning << "\n";
  }
  const Probability pe = fermi_probability(FermiInput::kExcited, coeffs);
  const Probability pg = fermi_probability(FermiInput::kGround, coeffs);
  OutputTarget out = open_output(cfg.output);
  write_header_comment(*out.stream, echo_config(cfg));
  *out.stream << "input,probability,flagged\n";
  *out.stream << "excited," << format_double(pe.value) << ',' << (pe.flagged ? 1 : 0) << '\n';
  *out.stream << "ground," << format_double(pg.value) << ',' << (pg.flagged ? 1 : 0) << '\n';
  return 0;
}

int run_pm(const RunConfig& cfg) {
  validate(cfg);
  const ChannelCoefficients coeffs =
      compute_channel(cfg.cavity, cfg.detector_a, cfg.detector_b, cfg.switching_time, false);
  const Probability pp = optimal_pm_probability(PmSign::kPlus, coeffs);
  const Probability pm = optimal_pm_probability(PmSign::kMinus, coeffs);
  OutputTarget out = open_output(cfg.output);
  write_header_comment(*out.stream, echo_config(cfg));
  *out.stream << "quantity,value,flagged\n";
  *out.stream << "p_plus_given_plus," << format_double(pp.value) << ',' << (pp.flagged ? 1 : 0)
              << '\n';
  *out.stream << "p_plus_given_minus," << format_double(pm.value) << ',' << (pm.flagged ? 1 : 0)
              << '\n';
  if (cfg.measurement_time) {
    const double p = plus_probability_at(cfg.input_state_a, coeffs, *cfg.measurement_time);
    *out.stream << "p_plus_at_t," << format_double(p) << ','
                << ((p < 0.0 || p > 1.0) ? 1 : 0) << '\n';
  }
  return 0;
}

int run_oracle_check(const RunConfig& cfg) {
  const double scale = cfg.oracle.tolerance_scale;
  OutputTarget out = open_output(cfg.output);
  write_header_comment(*out.stream, echo_config(cfg));
  *out.stream << "check,value,bound,status\n";
  int failures = 0;
  const auto report = [&](const std::string& name, double value, double bound) {
    const bool ok = value <= bound;
    if (!ok) ++failures;
    *out.stream << name << ',' << format_double(value) << ',' << format_double(bound) << ','
                << (ok ? "pass" : "FAIL") << '\n';
  };
  const auto rel_diff = [](Complex a, Complex b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-12});
  };

  struct Instance {
    CavityConfig cavity;
    DetectorParams a, b;
    double T;
  };
  const std::vector<Instance> second_order_instances = {
      {{3.14159265358979312, 3}, {1.0, 1, 0.0}, {2.0, 1, 0.0}, 2.0},
      {{10.0, 8}, {4.0, 4, 0.0}, {6.0, 4, 0.0}, 5.0},
      {{4.0, 5}, {1.1, 2, 0.0}, {2.6, 2, 0.0}, 7.0},
  };
  for (std::size_t i = 0; i < second_order_instances.size(); ++i) {
    const Instance& inst = second_order_instances[i];
    const SecondOrderCoeffs engine = compute_second_order(inst.cavity, inst.a, inst.b, inst.T);
    const std::vector<std::pair<Coefficient, Complex>> values = {
        {Coefficient::kP2, engine.noise.p2}, {Coefficient::kQ2, engine.noise.q2},
        {Coefficient::kR2, engine.noise.r2}, {Coefficient::kS2, engine.noise.s2},
        {Coefficient::kC2, engine.signal.c2}, {Coefficient::kD2, engine.signal.d2},
    };
    for (const auto& [which, value] : values) {
      const Complex reference =
          quad_coefficient(which, inst.cavity, inst.a, inst.b, inst.T, cfg.oracle.nodes_2d);
      report("quad2d_" + std::to_string(i) + "_" + std::string(to_string(which)),
             rel_diff(value, reference), 1e-8 * scale);
    }
  }

  const Instance small4d{{3.14159265358979312, 2}, {1.0, 1, 0.0}, {2.0, 1, 0.0}, 3.0};
  const FourthOrderCoeffs fourth =
      compute_fourth_order(small4d.cavity, small4d.a, small4d.b, small4d.T);
  for (const auto& [which, value] :
       std::vector<std::pair<Coefficient, double>>{{Coefficient::kA4, fourth.a4},
                                                   {Coefficient::kB4, fourth.b4},
                                                   {Coefficient::kP4, fourth.p4}}) {
    const Complex reference =
        quad_coefficient(which, small4d.cavity, small4d.a, small4d.b, small4d.T,
                         cfg.oracle.nodes_4d);
    report("quad4d_" + std::string(to_string(which)), rel_diff(value, reference.real()),
           1e-6 * scale);
  }

  const FockBasis basis(2, 2);
  const CavityConfig trace_cavity{3.14159265358979312, 2};
  const DetectorParams trace_a{1.0, 1, 0.05};
  const DetectorParams trace_b{2.0, 1, 0.05};
  const double trace_T = 1.5;
  const DensityMatrix2 rho_a = DensityMatrix2::plus();
  const DensityMatrix2 rho_b = DensityMatrix2::ground();
  report("dyson_trace_n1",
         dyson_trace_check(trace_cavity, trace_a, trace_b, trace_T, basis, 1, rho_a, rho_b, 600),
         1e-12 * scale);
  report("dyson_trace_n2",
         dyson_trace_check(trace_cavity, trace_a, trace_b, trace_T, basis, 2, rho_a, rho_b, 600),
         1e-9 * scale);

  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  std::string config_path;
  // Load the file first so explicit flags can override its fields.
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--config") config_path = argv[i + 1];
  }
  try {
    if (!config_path.empty()) cfg = load_run_config(config_path);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  CLI::App app{"two-detector cavity signalling toolkit (version " + std::string(kVersion) + ")"};
  app.require_subcommand(1);
  std::string coefficient_name;
  std::string fit_out;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file (already applied)");
    sub->add_option("--out", cfg.output, "output CSV path (default: stdout)");
    sub->add_option("--threads", cfg.threads, "worker threads for sweep points");
    sub->add_flag("--svg", cfg.svg, "also write a standalone SVG plot next to --out");
    sub->add_option("--length", cfg.cavity.length, "cavity length L");
    sub->add_option("--cutoff", cfg.cavity.cutoff, "mode cutoff N_C");
    sub->add_option("--xa", cfg.detector_a.position, "sender position");
    sub->add_option("--xb", cfg.detector_b.position, "receiver position");
    sub->add_option("--na", cfg.detector_a.resonance_mode, "sender resonance mode");
    sub->add_option("--nb", cfg.detector_b.resonance_mode, "receiver resonance mode");
    sub->add_option("--lambda-a", cfg.detector_a.coupling, "sender coupling");
    sub->add_option("--lambda-b", cfg.detector_b.coupling, "receiver coupling");
    sub->add_option("-T,--switching-time", cfg.switching_time, "switching time T");
    sub->add_option("--coefficient", coefficient_name, "coefficient selector");
    sub->add_option("--kind", cfg.kind, "sweep axis: cutoff | time");
    sub->add_flag("--fourth", cfg.fourth_order, "include fourth-order coefficients");
    sub->add_option("--measurement-time", [&cfg](const std::vector<std::string>& vals) {
      cfg.measurement_time = std::stod(vals.front());
      return true;
    }, "projector readout time (pm)");
    sub->add_option("--tolerance-scale", cfg.oracle.tolerance_scale,
                    "scales oracle-check tolerances (test hook)");
  };

  CLI::App* cmd_coeffs = app.add_subcommand("coeffs", "print channel coefficients");
  CLI::App* cmd_sweep = app.add_subcommand("sweep", "coefficient scan over cutoff or time");
  CLI::App* cmd_envelope =
      app.add_subcommand("envelope", "cutoff scan -> max-over-higher-cutoffs envelope");
  CLI::App* cmd_fit = app.add_subcommand("fit", "envelope pipeline plus log-log power-law fit");
  CLI::App* cmd_fermi = app.add_subcommand("fermi", "energy-eigenstate coding probabilities");
  CLI::App* cmd_pm = app.add_subcommand("pm", "|+>/|-> coding probabilities");
  CLI::App* cmd_oracle = app.add_subcommand("oracle-check", "run the oracle concordance suite");
  for (CLI::App* sub :
       {cmd_coeffs, cmd_sweep, cmd_envelope, cmd_fit, cmd_fermi, cmd_pm, cmd_oracle}) {
    add_common(sub);
  }
  cmd_fit->add_option("--fit-out", fit_out, "fit CSV path (default: <out>.fit.csv)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (!coefficient_name.empty()) {
      const auto parsed = parse_coefficient(coefficient_name);
      if (!parsed) {
        throw std::invalid_argument("unknown coefficient selector '" + coefficient_name + "'");
      }
      cfg.coefficient = *parsed;
    }
    if (cmd_coeffs->parsed()) return run_coeffs(cfg);
    if (cmd_sweep->parsed()) return run_sweep(cfg);
    if (cmd_envelope->parsed()) return run_envelope(cfg);
    if (cmd_fit->parsed()) return run_fit(cfg, fit_out);
    if (cmd_fermi->parsed()) return run_fermi(cfg);
    if (cmd_pm->parsed()) return run_pm(cfg);
    if (cmd_oracle->parsed()) return run_oracle_check(cfg);
  } catch (const cost_guard_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
