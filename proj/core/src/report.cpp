#include "timeop/report.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "timeop/errors.hpp"

#ifndef TIMEOP_VERSION
#define TIMEOP_VERSION "0.0.0"
#endif

namespace timeop {

ObservableMode parse_mode(const std::string& name) {
  if (name == "time") return ObservableMode::time;
  if (name == "halfline_momentum" || name == "halfline-momentum") return ObservableMode::halfline_momentum;
  if (name == "radial_momentum" || name == "radial-momentum") return ObservableMode::radial_momentum;
  throw ConfigError("unknown observable mode \"" + name + "\" (time, halfline_momentum, radial_momentum)");
}

std::string to_string(ObservableMode mode) {
  switch (mode) {
    case ObservableMode::time: return "time";
    case ObservableMode::halfline_momentum: return "halfline_momentum";
    case ObservableMode::radial_momentum: return "radial_momentum";
  }
  return "?";
}

SymbolTable relabel_mode(ObservableMode mode) {
  switch (mode) {
    case ObservableMode::time: return {"E", "t", "H", "T", "T^dag", "T_F^2", "T_sqrt", "I"};
    case ObservableMode::halfline_momentum: return {"x", "p", "X", "P", "P^dag", "P_F^2", "P_sqrt", "I"};
    case ObservableMode::radial_momentum: return {"r", "p_r", "R", "P_r", "P_r^dag", "P_r,F^2", "P_r,sqrt", "I"};
  }
  throw ConfigError("relabel_mode: unknown mode");
}

std::string render_symbols(const std::string& templ, const SymbolTable& s) {
  const std::pair<const char*, const std::string*> keys[] = {
      {"{E}", &s.variable}, {"{t}", &s.conjugate}, {"{H}", &s.H},         {"{Tdag}", &s.Tdag},
      {"{TsqF}", &s.TsqF},  {"{Tsqrt}", &s.Tsqrt}, {"{T}", &s.T},         {"{I}", &s.I}};
  std::string out;
  out.reserve(templ.size());
  std::size_t pos = 0;
  while (pos < templ.size()) {
    bool hit = false;
    if (templ[pos] == '{') {
      for (const auto& [key, value] : keys) {
        if (templ.compare(pos, std::char_traits<char>::length(key), key) == 0) {
          out += *value;
          pos += std::char_traits<char>::length(key);
          hit = true;
          break;
        }
      }
    }
    if (!hit) out += templ[pos++];
  }
  return out;
}

Check check_at_most(std::string id, std::string anchor, std::string quantity, double measured, double tolerance) {
  const bool pass = std::isfinite(measured) && measured <= tolerance;
  return {std::move(id), std::move(anchor), std::move(quantity), measured, tolerance, Comparison::at_most,
          std::nullopt, pass};
}

Check check_at_least(std::string id, std::string anchor, std::string quantity, double measured, double floor) {
  const bool pass = std::isfinite(measured) && measured >= floor;
  return {std::move(id), std::move(anchor), std::move(quantity), measured, floor, Comparison::at_least,
          std::nullopt, pass};
}

Check check_near(std::string id, std::string anchor, std::string quantity, double measured, double expected,
                 double tolerance) {
  const bool pass = std::isfinite(measured) && std::abs(measured - expected) <= tolerance;
  return {std::move(id), std::move(anchor), std::move(quantity), measured, tolerance, Comparison::near,
          expected, pass};
}

bool Report::passed() const {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

namespace {

const char* comparison_name(Comparison c) {
  switch (c) {
    case Comparison::at_most: return "<=";
    case Comparison::at_least: return ">=";
    case Comparison::near: return "|measured-expected|<=";
  }
  return "?";
}

// JSON has no NaN/Inf; keep them visible as strings.
nlohmann::json number(double x) {
  if (std::isfinite(x)) return x;
  return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string format_double(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

std::string render_json(const Report& report) {
  const SymbolTable symbols = relabel_mode(report.mode);
  nlohmann::ordered_json doc;
  doc["suite"] = report.suite;
  doc["mode"] = to_string(report.mode);
  doc["grid"] = {{"e_max", report.e_max}, {"n", report.n}, {"hbar", report.hbar}};
  doc["version"] = report.version;
  doc["pass"] = report.passed();
  auto checks = nlohmann::ordered_json::array();
  for (const auto& c : report.checks) {
    nlohmann::ordered_json row;
    row["id"] = c.id;
    row["paper_anchor"] = c.anchor;
    row["quantity"] = render_symbols(c.quantity, symbols);
    row["measured"] = number(c.measured);
    if (c.expected) row["expected"] = number(*c.expected);
    row["comparison"] = comparison_name(c.comparison);
    row["tolerance"] = number(c.tolerance);
    row["pass"] = c.pass;
    checks.push_back(std::move(row));
  }
  doc["checks"] = std::move(checks);
  return doc.dump(2) + "\n";
}

std::string render_csv(const Report& report) {
  const SymbolTable symbols = relabel_mode(report.mode);
  std::ostringstream os;
  os << "suite,mode,e_max,n,hbar,id,paper_anchor,quantity,measured,expected,comparison,tolerance,pass\n";
  for (const auto& c : report.checks) {
    os << report.suite << ',' << to_string(report.mode) << ',' << format_double(report.e_max) << ',' << report.n
       << ',' << format_double(report.hbar) << ',' << c.id << ',' << csv_field(c.anchor) << ','
       << csv_field(render_symbols(c.quantity, symbols)) << ',' << format_double(c.measured) << ','
       << (c.expected ? format_double(*c.expected) : "") << ',' << csv_field(comparison_name(c.comparison)) << ','
       << format_double(c.tolerance) << ',' << (c.pass ? "true" : "false") << '\n';
  }
  return os.str();
}

std::string failure_summary(const Report& report) {
  std::ostringstream os;
  for (const auto& c : report.checks) {
    if (c.pass) continue;
    os << report.suite << " n=" << report.n << " " << c.id << ": measured " << c.measured << ", needs "
       << comparison_name(c.comparison) << " " << c.tolerance;
    if (c.expected) os << " (expected " << *c.expected << ")";
    os << " [" << c.anchor << "]\n";
  }
  return os.str();
}

std::string library_version() { return TIMEOP_VERSION; }

}  // namespace timeop
