#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "timeop/errors.hpp"
#include "timeop/runner.hpp"

namespace {

struct Overrides {
  std::string config;
  std::string out;
  std::string format;
  std::string mode;
  std::optional<long> seed;
};

timeop::RunConfig resolve(const Overrides& o) {
  timeop::RunConfig cfg = o.config.empty() ? timeop::RunConfig{} : timeop::load_config(o.config);
  if (!o.out.empty()) cfg.out_dir = o.out;
  if (!o.format.empty()) cfg.format = timeop::parse_format(o.format);
  if (!o.mode.empty()) cfg.mode = timeop::parse_mode(o.mode);
  if (o.seed) cfg.seed = *o.seed;
  timeop::validate(cfg);
  return cfg;
}

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "JSON run configuration")->check(CLI::ExistingFile);
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--mode", o.mode, "time, halfline-momentum or radial-momentum")
      ->check(CLI::IsMember({"time", "halfline-momentum", "radial-momentum", "halfline_momentum", "radial_momentum"}));
  cmd->add_option("--seed", o.seed, "reserved; results are deterministic");
}

int run_report(const Overrides& o) {
  const timeop::RunConfig cfg = resolve(o);
  const timeop::RunResult result = timeop::run_report(cfg);
  int failed = 0;
  for (const auto& r : result.reports) {
    int bad = 0;
    for (const auto& c : r.checks) bad += c.pass ? 0 : 1;
    failed += bad;
    std::cout << (bad ? "FAIL " : "ok   ") << r.suite << " n=" << r.n << " (" << r.checks.size() - bad << "/"
              << r.checks.size() << ")\n";
    std::cerr << timeop::failure_summary(r);
  }
  std::cout << result.files.size() << " report files in " << cfg.out_dir.string() << "\n";
  return failed ? 1 : 0;
}

int run_sweep(const Overrides& o) {
  const timeop::RunConfig cfg = resolve(o);
  for (const auto& path : timeop::write_sweep(cfg)) std::cout << path.string() << "\n";
  return 0;
}

int run_modes(const Overrides& o) {
  using timeop::ObservableMode;
  std::vector<ObservableMode> modes = {ObservableMode::time, ObservableMode::halfline_momentum,
                                       ObservableMode::radial_momentum};
  if (!o.mode.empty()) modes = {timeop::parse_mode(o.mode)};
  for (auto m : modes) {
    const auto s = timeop::relabel_mode(m);
    std::cout << timeop::to_string(m) << ": variable=" << s.variable << " conjugate=" << s.conjugate
              << " H=" << s.H << " T=" << s.T << " T_dag=" << s.Tdag << " T_F^2=" << s.TsqF
              << " T_sqrt=" << s.Tsqrt << " I=" << s.I << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for the time operator on the energy half-line"};
  app.require_subcommand(1);
  Overrides report_opts, sweep_opts, modes_opts;
  auto* report = app.add_subcommand("report", "run check suites and write one report per suite and grid");
  add_common(report, report_opts);
  auto* sweep = app.add_subcommand("sweep", "refinement sweep: convergence table and plot data");
  add_common(sweep, sweep_opts);
  auto* modes = app.add_subcommand("modes", "print the symbol table of each observable mode");
  add_common(modes, modes_opts);

  CLI11_PARSE(app, argc, argv);
  try {
    if (report->parsed()) return run_report(report_opts);
    if (sweep->parsed()) return run_sweep(sweep_opts);
    return run_modes(modes_opts);
  } catch (const timeop::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
