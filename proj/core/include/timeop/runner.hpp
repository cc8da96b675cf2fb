#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "timeop/report.hpp"
#include "timeop/spectral.hpp"

namespace timeop {

enum class Suite { domains, deficiency, spectra, time_rep, hft, algebra, distribution };

Suite parse_suite(const std::string& name);
std::string to_string(Suite suite);
const std::vector<Suite>& all_suites();

enum class OutputFormat { json, csv };

OutputFormat parse_format(const std::string& name);

struct TestFunctionSpec {
  std::string name;
  std::vector<double> params;
};

struct RunConfig {
  ObservableMode mode = ObservableMode::time;
  double e_max = 50.0;
  std::vector<int> n = {499, 999, 1999};
  double hbar = 1.0;
  std::vector<Suite> suites = all_suites();
  std::vector<TestFunctionSpec> test_functions = {{"power_exp", {1, 1}}, {"power_exp", {2, 1}}, {"gaussian", {5, 1}}};
  std::filesystem::path out_dir = "timeop_out";
  OutputFormat format = OutputFormat::json;
  long seed = 0;  // reserved; every computation is deterministic
};

/**
 * Parses the JSON configuration:
 *   {observable_mode, grid: {e_max, n: [...], hbar}, suites: [...],
 *    test_functions: [{name, params}], output: {directory, format}}
 * Missing keys keep their defaults. Throws ConfigError.
 */
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::filesystem::path& path);

/// Throws ConfigError on an unusable configuration.
void validate(const RunConfig& config);

/// Operator sets shared between suites, built on first use.
class GridCache {
 public:
  GridCache(double e_max, double hbar) : e_max_(e_max), hbar_(hbar) {}

  const OperatorSet& operators(int n);
  const TransformMatrix& transform(int n);
  GridPtr grid(int n);

 private:
  double e_max_;
  double hbar_;
  std::map<int, GridPtr> grids_;
  std::map<int, std::unique_ptr<OperatorSet>> ops_;
  std::map<int, std::unique_ptr<TransformMatrix>> transforms_;
};

/**
 * Runs one suite on grid n. companion_n names the grid used for
 * h-stability comparisons; 0 picks the coarser grid (n+1)/2 - 1.
 */
Report run_suite(Suite suite, const RunConfig& config, int n, GridCache& cache, int companion_n = 0);

struct RunResult {
  std::vector<Report> reports;
  std::vector<std::filesystem::path> files;
  bool all_passed() const;
};

/// Checks the output directory first, then writes <suite>_n<n>.<format> per suite and grid.
RunResult run_report(const RunConfig& config);

struct ConvergenceRow {
  int n;
  double h;
  std::string check_id;
  double residual;
  double fitted_order;
};

/// Least-squares slope of log(residual) against log(h).
double fitted_order(const std::vector<double>& h, const std::vector<double>& residual);

/// Needs at least three grid sizes.
std::vector<ConvergenceRow> refinement_sweep(const RunConfig& config, GridCache& cache);

/// Writes convergence.csv, plot_residual_vs_h.csv and plot_tsqrt_staircase.csv.
std::vector<std::filesystem::path> write_sweep(const RunConfig& config);

std::string render_convergence_csv(const std::vector<ConvergenceRow>& rows);

}  // namespace timeop
