#include "aging/cli.hpp"

#include <cmath>
#include <deque>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "aging/analysis.hpp"
#include "aging/errors.hpp"
#include "aging/exact.hpp"
#include "aging/io.hpp"
#include "aging/parallel.hpp"

namespace aging::cli {

namespace {

enum class Format { Csv, Json, Svg };

struct RunConfig {
  std::string subcommand;
  ModelParams params;
  std::string format = "csv";
  std::string output = "-";
  int threads = 0;
  bool serial = false;
  double t_max = IntegrationControls{}.t_max;
  double steady_tol = IntegrationControls{}.steady_tol;
  double jump_threshold = kDefaultJumpThreshold;

  std::string p_grid;
  std::string x_grid;
  std::string q0_grid = "0:1:0.01";
  std::string a0_grid = "0:1:0.01";
  std::string n_grid = "1:400:1";
  std::string axis = "g";
  std::string method = "collective";
  double p = 0.8;
  double q0 = 0.5;
  double a0 = 0.5;
  bool hysteresis = false;
};

nlohmann::json meta_json(const RunConfig& cfg) {
  nlohmann::json meta = {{"subcommand", cfg.subcommand},
                         {"params", io::to_json(cfg.params)},
                         {"units", "kappa"},
                         {"threads", cfg.threads},
                         {"serial", cfg.serial},
                         {"t_max", cfg.t_max},
                         {"steady_tol", cfg.steady_tol}};
  if (cfg.subcommand == "sweep" || cfg.subcommand == "cumulant-sweep") {
    meta["p_grid"] = cfg.p_grid;
    meta["init"] = {{"q0", cfg.q0}, {"a0", cfg.a0}};
    meta["method"] = cfg.subcommand == "sweep" ? cfg.method : "cumulant";
    meta["hysteresis"] = cfg.hysteresis;
    meta["jump_threshold"] = cfg.jump_threshold;
  } else if (cfg.subcommand == "sweep2d") {
    meta["axis"] = cfg.axis;
    meta["x_grid"] = cfg.x_grid;
    meta["p_grid"] = cfg.p_grid;
    meta["init"] = {{"q0", cfg.q0}, {"a0", cfg.a0}};
  } else if (cfg.subcommand == "basin") {
    meta["p"] = cfg.p;
    meta["q0_grid"] = cfg.q0_grid;
    meta["a0_grid"] = cfg.a0_grid;
  } else if (cfg.subcommand == "sizescan") {
    meta["p"] = cfg.p;
    meta["n_grid"] = cfg.n_grid;
    meta["init"] = {{"q0", cfg.q0}, {"a0", cfg.a0}};
    meta["jump_threshold"] = cfg.jump_threshold;
  } else if (cfg.subcommand == "compare") {
    meta["p_grid"] = cfg.p_grid;
    meta["init"] = {{"q0", cfg.q0}, {"a0", cfg.a0}};
  }
  return meta;
}

Format parse_format(const std::string& text) {
  if (text == "csv") return Format::Csv;
  if (text == "json") return Format::Json;
  return Format::Svg;
}

// Writes the artifact to --output, or to `out` for "-".
void emit(const RunConfig& cfg, std::ostream& out, const std::function<void(std::ostream&)>& csv,
          const std::function<nlohmann::json()>& json, const std::function<std::string()>& svg) {
  std::ofstream file;
  std::ostream* sink = &out;
  if (cfg.output != "-") {
    file.open(cfg.output);
    if (!file) throw Error(ErrorKind::Io, fmt::format("--output: cannot open '{}'", cfg.output));
    sink = &file;
  }
  switch (parse_format(cfg.format)) {
    case Format::Csv:
      csv(*sink);
      break;
    case Format::Json: {
      nlohmann::json doc = json();
      doc["meta"] = meta_json(cfg);
      *sink << doc.dump(2) << '\n';
      break;
    }
    case Format::Svg:
      if (!svg) {
        throw Error(ErrorKind::InvalidArgument,
                    fmt::format("--format svg is not available for '{}'", cfg.subcommand));
      }
      *sink << svg();
      break;
  }
  if (file.is_open() && !file) {
    throw Error(ErrorKind::Io, fmt::format("--output: write to '{}' failed", cfg.output));
  }
}

void report_jumps(const SweepResult& sweep, std::ostream& err) {
  for (const auto& jump : sweep.jumps) {
    fmt::print(err, "jump at {}={} drop={}\n", sweep.axis_name, io::format_real(jump.location),
               io::format_real(jump.drop));
  }
  std::size_t unconverged = 0;
  for (bool c : sweep.converged) unconverged += c ? 0 : 1;
  if (unconverged > 0) {
    fmt::print(err, "warning: {} of {} points did not reach the steady tolerance\n", unconverged,
               sweep.converged.size());
  }
}

SweepOptions make_options(const RunConfig& cfg) {
  SweepOptions opts;
  opts.jump_threshold = cfg.jump_threshold;
  opts.hysteresis = cfg.hysteresis;
  opts.execution = cfg.serial ? Execution::Serial : Execution::Parallel;
  opts.controls.t_max = cfg.t_max;
  opts.controls.steady_tol = cfg.steady_tol;
  return opts;
}

// Library validation messages name fields; point the user at the flag too.
std::string flag_hint(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::RequiresZeroV: return " (pass --v 0)";
    case ErrorKind::NonIntegerSplit: return " (adjust --p or --n)";
    case ErrorKind::TooLarge: return " (--n too large for the exact solver)";
    default: break;
  }
  const std::string msg = e.what();
  const std::pair<const char*, const char*> fields[] = {
      {"n_qubits", "--n"},          {"kappa", "--kappa"},  {"dissipative coupling", "--v"},
      {"drive", "--omega"},         {"detuning", "--delta"}, {"coherent coupling", "--g"},
      {"inactive ratio", "--p"}};
  for (const auto& [field, flag] : fields) {
    if (msg.find(field) != std::string::npos) return fmt::format(" (flag {})", flag);
  }
  return {};
}

void add_model_flags(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--n", cfg.params.n_qubits, "Total number of qubits N")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--delta", cfg.params.detuning, "Detuning Delta (units of kappa)")
      ->capture_default_str();
  sub->add_option("--omega", cfg.params.drive, "Coherent drive Omega (units of kappa)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  sub->add_option("--g", cfg.params.coherent_coupling, "Coherent zz coupling g (units of kappa)")
      ->capture_default_str();
  sub->add_option("--v", cfg.params.dissipative_coupling,
                  "Dissipative coupling V (units of kappa)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  sub->add_option("--kappa", cfg.params.kappa, "Pump/decay rate kappa; the unit of all rates")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

void add_run_flags(CLI::App* sub, RunConfig& cfg, bool svg) {
  auto* fmt_opt = sub->add_option("--format", cfg.format, "Artifact format")->capture_default_str();
  if (svg) {
    fmt_opt->check(CLI::IsMember({"csv", "json", "svg"}));
  } else {
    fmt_opt->check(CLI::IsMember({"csv", "json"}));
  }
  sub->add_option("--output,-o", cfg.output, "Artifact path; '-' writes to stdout")
      ->capture_default_str();
  sub->add_option("--threads", cfg.threads, "Worker threads; 0 uses every core")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  sub->add_flag("--serial", cfg.serial, "Use the serial reference loop instead of OpenMP");
  sub->add_option("--t-max", cfg.t_max, "Integration horizon per point (units of 1/kappa)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--steady-tol", cfg.steady_tol, "Residual below which a point counts as steady")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

void add_init_flags(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--q0", cfg.q0, "Initial <Q>")->capture_default_str();
  sub->add_option("--a0", cfg.a0, "Initial <A> (real)")->capture_default_str();
}

int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  set_thread_limit(cfg.threads);
  const SweepOptions opts = make_options(cfg);
  const SweepInit init{cfg.q0, cplx(cfg.a0, 0.0)};
  const auto& sub = cfg.subcommand;

  if (sub == "sweep" || sub == "cumulant-sweep") {
    const auto grid = io::parse_grid(cfg.p_grid, "--p");
    const Method method = sub == "sweep" ? parse_method(cfg.method) : Method::Cumulant;
    const auto sweep = sweep_p(cfg.params, grid, init, method, opts);
    report_jumps(sweep, err);
    emit(cfg, out, [&](std::ostream& s) { io::write_sweep_csv(s, sweep); },
         [&] { return io::to_json(sweep); },
         [&] { return io::svg_line_plot(sweep.axis, {{to_string(method), sweep.nbar}}, "p", "nbar"); });
    return kExitOk;
  }
  if (sub == "sweep2d") {
    const auto xs = io::parse_grid(cfg.x_grid, "--x");
    const auto ps = io::parse_grid(cfg.p_grid, "--p");
    const SweepAxis axis = cfg.axis == "g" ? SweepAxis::CoherentCoupling : SweepAxis::Drive;
    const auto grid = sweep_2d(cfg.params, axis, xs, ps, opts, init);
    emit(cfg, out, [&](std::ostream& s) { io::write_sweep2d_csv(s, grid); },
         [&] { return io::to_json(grid); },
         [&] { return io::svg_heatmap(grid.nbar, grid.x.size(), grid.p.size(), cfg.axis, "p"); });
    return kExitOk;
  }
  if (sub == "basin") {
    const auto qs = io::parse_grid(cfg.q0_grid, "--q0-grid");
    const auto as = io::parse_grid(cfg.a0_grid, "--a0-grid");
    const auto basin = basin_map(cfg.params, cfg.p, qs, as, opts);
    fmt::print(err, "toN1={} toN2={} undetermined={}\n", basin.count(BasinLabel::ToN1),
               basin.count(BasinLabel::ToN2), basin.count(BasinLabel::Undetermined));
    emit(cfg, out, [&](std::ostream& s) { io::write_basin_csv(s, basin); },
         [&] { return io::to_json(basin); },
         [&] {
           std::vector<double> shade(basin.labels.size());
           for (std::size_t k = 0; k < shade.size(); ++k) {
             shade[k] = basin.labels[k] == BasinLabel::ToN1   ? 1.0
                        : basin.labels[k] == BasinLabel::ToN2 ? 0.0
                                                              : 0.5;
           }
           return io::svg_heatmap(shade, basin.q0_axis.size(), basin.a0_axis.size(), "q0", "a0");
         });
    return kExitOk;
  }
  if (sub == "interval") {
    const auto interval = bistable_interval(cfg.params);
    std::ostream& summary = cfg.output == "-" && cfg.format != "csv" ? err : out;
    fmt::print(summary, "p_cmin={} p_cmax={}{}\n", io::format_real(interval.p_cmin),
               io::format_real(interval.p_cmax), interval.clamped_upper ? " (clamped at 1)" : "");
    if (interval.stability_window) {
      fmt::print(err, "lower branch stable on [{}, {}] of the scan grid\n",
                 io::format_real(interval.stability_window->first),
                 io::format_real(interval.stability_window->second));
    }
    if (!interval.lower_branch_stable) {
      fmt::print(err, "warning: lower branch not stable everywhere inside the interval\n");
    }
    if (cfg.output != "-" || cfg.format != "csv") {
      emit(cfg, out, [&](std::ostream& s) { io::write_interval_csv(s, interval); },
           [&] { return io::to_json(interval); }, nullptr);
    }
    return kExitOk;
  }
  if (sub == "sizescan") {
    const auto ns = io::parse_int_grid(cfg.n_grid, "--sizes");
    for (int n : ns) {
      if (n < 1) throw Error(ErrorKind::InvalidArgument, "--sizes: every N must be >= 1");
    }
    const auto scan = size_scan(cfg.params, cfg.p, ns, init, opts);
    report_jumps(scan, err);
    emit(cfg, out, [&](std::ostream& s) { io::write_sweep_csv(s, scan); },
         [&] { return io::to_json(scan); },
         [&] { return io::svg_line_plot(scan.axis, {{"collective", scan.nbar}}, "N", "nbar"); });
    return kExitOk;
  }
  if (sub == "compare") {
    const int n = cfg.params.n_qubits;
    std::vector<double> ps;
    for (double p : io::parse_grid(cfg.p_grid, "--p")) {
      const double snapped = std::round(p * n) / n;
      if (std::abs(snapped - p) > 1e-9) {
        fmt::print(err, "warning: p={} rounded to {} so that N p is an integer\n",
                   io::format_real(p), io::format_real(snapped));
      }
      if (ps.empty() || snapped > ps.back() + 1e-12) ps.push_back(snapped);
    }
    if (n > kMaxExactQubits) {
      fmt::print(err, "warning: N={} exceeds {}; exact column left as nan\n", n, kMaxExactQubits);
    }
    const auto rows = compare_methods(cfg.params, ps, opts, init);
    emit(cfg, out, [&](std::ostream& s) { io::write_compare_csv(s, rows); },
         [&] { return io::to_json(rows); },
         [&] {
           std::vector<double> x, c, m, e;
           for (const auto& r : rows) {
             x.push_back(r.p);
             c.push_back(r.collective);
             m.push_back(r.meanfield);
             e.push_back(r.exact.value_or(std::nan("")));
           }
           return io::svg_line_plot(x, {{"collective", c}, {"meanfield", m}, {"exact", e}}, "p",
                                    "nbar");
         });
    return kExitOk;
  }
  throw Error(ErrorKind::InvalidArgument, fmt::format("unknown subcommand '{}'", sub));
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Steady-state analysis of driven-dissipative qubit networks with inactive qubits"};
  app.footer(
      "Rates and frequencies are in units of kappa (kappa = 1 by default); times in 1/kappa.\n"
      "Grids use start:stop:step; a last point less than half a step past stop lands on stop.\n"
      "Exit codes: 0 success, 2 invalid input, 1 solver failure.");
  app.require_subcommand(1);

  // One config per subcommand so each can carry its own defaults.
  std::deque<RunConfig> configs;
  std::vector<std::pair<CLI::App*, RunConfig*>> subs;

  auto* sweep = app.add_subcommand("sweep", "Steady nbar versus the inactive ratio p");
  RunConfig& sweep_cfg = configs.emplace_back();
  add_model_flags(sweep, sweep_cfg);
  add_run_flags(sweep, sweep_cfg, true);
  add_init_flags(sweep, sweep_cfg);
  sweep->add_option("--p", sweep_cfg.p_grid, "Grid of p values")->default_val("0:1:0.002");
  sweep->add_option("--method", sweep_cfg.method, "Solver")
      ->check(CLI::IsMember({"collective", "meanfield", "exact", "cumulant"}))
      ->capture_default_str();
  sweep->add_flag("--hysteresis", sweep_cfg.hysteresis,
                  "Warm-start each p from the previous steady state (collective only)");
  sweep->add_option("--jump-threshold", sweep_cfg.jump_threshold, "Minimum |delta nbar| for a jump")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  subs.emplace_back(sweep, &sweep_cfg);

  auto* sweep2d = app.add_subcommand("sweep2d", "Collective steady nbar over (g or Omega) x p");
  RunConfig& sweep2d_cfg = configs.emplace_back();
  add_model_flags(sweep2d, sweep2d_cfg);
  add_run_flags(sweep2d, sweep2d_cfg, true);
  add_init_flags(sweep2d, sweep2d_cfg);
  sweep2d->add_option("--axis", sweep2d_cfg.axis, "Parameter on the x axis")
      ->check(CLI::IsMember({"g", "omega"}))
      ->capture_default_str();
  sweep2d->add_option("--x", sweep2d_cfg.x_grid, "Grid for the x axis (units of kappa)")->required();
  sweep2d->add_option("--p", sweep2d_cfg.p_grid, "Grid of p values")->default_val("0:1:0.01");
  subs.emplace_back(sweep2d, &sweep2d_cfg);

  auto* basin = app.add_subcommand("basin", "Basins of attraction of the two stable branches");
  RunConfig& basin_cfg = configs.emplace_back();
  add_model_flags(basin, basin_cfg);
  add_run_flags(basin, basin_cfg, true);
  basin->add_option("--p", basin_cfg.p, "Inactive ratio p")->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  basin->add_option("--q0-grid", basin_cfg.q0_grid, "Grid of initial <Q>")->capture_default_str();
  basin->add_option("--a0-grid", basin_cfg.a0_grid, "Grid of initial real <A>")->capture_default_str();
  subs.emplace_back(basin, &basin_cfg);

  auto* interval = app.add_subcommand("interval", "Bistable interval [p_cmin, p_cmax]");
  RunConfig& interval_cfg = configs.emplace_back();
  add_model_flags(interval, interval_cfg);
  add_run_flags(interval, interval_cfg, false);
  subs.emplace_back(interval, &interval_cfg);

  auto* sizescan = app.add_subcommand("sizescan", "Collective steady nbar versus network size N");
  RunConfig& sizescan_cfg = configs.emplace_back();
  sizescan_cfg.jump_threshold = kSizeScanJumpThreshold;
  sizescan_cfg.n_grid = "1:800:1";
  add_model_flags(sizescan, sizescan_cfg);
  add_run_flags(sizescan, sizescan_cfg, true);
  add_init_flags(sizescan, sizescan_cfg);
  sizescan->add_option("--p", sizescan_cfg.p, "Inactive ratio p")->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  sizescan->add_option("--sizes", sizescan_cfg.n_grid, "Grid of N values")->capture_default_str();
  sizescan->add_option("--jump-threshold", sizescan_cfg.jump_threshold, "Minimum |delta nbar| for a jump")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  subs.emplace_back(sizescan, &sizescan_cfg);

  auto* compare = app.add_subcommand(
      "compare", "Collective, mean-field and exact (N <= 10) steady nbar on one p grid");
  RunConfig& compare_cfg = configs.emplace_back();
  add_model_flags(compare, compare_cfg);
  add_run_flags(compare, compare_cfg, true);
  add_init_flags(compare, compare_cfg);
  compare->add_option("--p", compare_cfg.p_grid, "Grid of p values, rounded to multiples of 1/N")
      ->default_val("0:1:0.1");
  subs.emplace_back(compare, &compare_cfg);

  auto* cumulant = app.add_subcommand(
      "cumulant-sweep", "Steady nbar versus p with pair correlations retained (V = 0 only)");
  RunConfig& cumulant_cfg = configs.emplace_back();
  // The closure only exists at V = 0; the reference run starts from the empty state.
  cumulant_cfg.params.dissipative_coupling = 0.0;
  cumulant_cfg.q0 = 0.0;
  cumulant_cfg.a0 = 0.0;
  add_model_flags(cumulant, cumulant_cfg);
  add_run_flags(cumulant, cumulant_cfg, true);
  add_init_flags(cumulant, cumulant_cfg);
  cumulant->add_option("--p", cumulant_cfg.p_grid, "Grid of p values")->default_val("0:1:0.002");
  cumulant->add_option("--jump-threshold", cumulant_cfg.jump_threshold, "Minimum |delta nbar| for a jump")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  subs.emplace_back(cumulant, &cumulant_cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitValidation;
  }

  RunConfig* cfg = nullptr;
  for (auto& [sub, sub_cfg] : subs) {
    if (sub->parsed()) {
      cfg = sub_cfg;
      cfg->subcommand = sub->get_name();
    }
  }

  try {
    return execute(*cfg, out, err);
  } catch (const Error& e) {
    fmt::print(err, "error: {}{}\n", e.what(), e.is_validation() ? flag_hint(e) : "");
    if (e.is_validation()) return kExitValidation;
    return kExitSolverFailure;
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitSolverFailure;
  }
}

}  // namespace aging::cli
