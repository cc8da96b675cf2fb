#pragma once

#include <optional>
#include <string>
#include <vector>

namespace timeop {

enum class ObservableMode { time, halfline_momentum, radial_momentum };

/// Accepts underscore and hyphen spellings; throws ConfigError otherwise.
ObservableMode parse_mode(const std::string& name);
std::string to_string(ObservableMode mode);

/// Names under which the same numerics are reported in each mode.
struct SymbolTable {
  std::string variable;   // E
  std::string conjugate;  // t
  std::string H;
  std::string T;
  std::string Tdag;
  std::string TsqF;
  std::string Tsqrt;
  std::string I;
};

SymbolTable relabel_mode(ObservableMode mode);

/// Replaces {E}, {t}, {H}, {T}, {Tdag}, {TsqF}, {Tsqrt}, {I} in a template.
std::string render_symbols(const std::string& templ, const SymbolTable& symbols);

enum class Comparison {
  at_most,   // measured <= tolerance
  at_least,  // measured >= tolerance
  near,      // |measured - expected| <= tolerance
};

struct Check {
  std::string id;
  std::string anchor;    // the claim being checked, or "plumbing"
  std::string quantity;  // symbol template, see render_symbols
  double measured;
  double tolerance;
  Comparison comparison;
  std::optional<double> expected;
  bool pass;
};

Check check_at_most(std::string id, std::string anchor, std::string quantity, double measured, double tolerance);
Check check_at_least(std::string id, std::string anchor, std::string quantity, double measured, double floor);
Check check_near(std::string id, std::string anchor, std::string quantity, double measured, double expected,
                 double tolerance);

struct Report {
  std::string suite;
  ObservableMode mode;
  double e_max;
  int n;
  double hbar;
  std::string version;
  std::vector<Check> checks;

  bool passed() const;
};

std::string render_json(const Report& report);
std::string render_csv(const Report& report);

/// Check ids that failed, with measured and tolerance, one per line.
std::string failure_summary(const Report& report);

std::string library_version();

}  // namespace timeop
