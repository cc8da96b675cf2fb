#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "oracles.hpp"
#include "timeop/errors.hpp"
#include "timeop/runner.hpp"

using namespace timeop;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("timeop_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_SUITE("runner") {
  TEST_CASE("config parsing and defaults") {
    const auto cfg = parse_config(R"({"observable_mode": "radial_momentum",
      "grid": {"e_max": 40, "n": [99, 199], "hbar": 0.5},
      "suites": ["spectra", "hft"],
      "test_functions": [{"name": "power_exp", "params": [1, 1]}],
      "output": {"directory": "out", "format": "csv"}})");
    CHECK(cfg.mode == ObservableMode::radial_momentum);
    CHECK(cfg.e_max == 40.0);
    CHECK(cfg.n == std::vector<int>{99, 199});
    CHECK(cfg.hbar == 0.5);
    CHECK(cfg.suites.size() == 2);
    CHECK(cfg.format == OutputFormat::csv);
    const auto def = parse_config("{}");
    CHECK(def.n == std::vector<int>{499, 999, 1999});
    CHECK(def.e_max == 50.0);
    CHECK(def.suites.size() == 7);
    CHECK(def.test_functions.size() == 3);
  }

  TEST_CASE("malformed configs fail with ConfigError") {
    CHECK_THROWS_AS(parse_config(R"({"suites": []})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"grid": {"n": [999, 499]}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"observable_mode": "phase"})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"suites": ["spectra"],)"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"grid": {"e_max": -1}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"grids": {}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"suites": ["spectrum"]})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"test_functions": [{"name": "lorentz", "params": []}]})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"output": {"format": "xml"}})"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/cfg.json"), ConfigError);
  }

  TEST_CASE("mode relabeling") {
    CHECK(parse_mode("halfline-momentum") == ObservableMode::halfline_momentum);
    CHECK(parse_mode("radial_momentum") == ObservableMode::radial_momentum);
    CHECK_THROWS_AS(parse_mode("phase"), ConfigError);
    CHECK(relabel_mode(ObservableMode::time).Tsqrt == "T_sqrt");
    CHECK(relabel_mode(ObservableMode::halfline_momentum).variable == "x");
    CHECK(relabel_mode(ObservableMode::halfline_momentum).Tsqrt == "P_sqrt");
    CHECK(relabel_mode(ObservableMode::radial_momentum).variable == "r");
    CHECK(render_symbols("[{T},{H}] on {E} and {Tdag}, {TsqF}", relabel_mode(ObservableMode::halfline_momentum)) ==
          "[P,X] on x and P^dag, P_F^2");
    CHECK(render_symbols("{unknown}", relabel_mode(ObservableMode::time)) == "{unknown}");
  }

  TEST_CASE("fitted order") {
    CHECK(fitted_order({0.1, 0.05, 0.025}, {2e-2, 5e-3, 1.25e-3}) == doctest::Approx(2.0));
    CHECK(fitted_order({0.1, 0.05, 0.025}, {1.0, 1.0, 1.0}) == doctest::Approx(0.0));
    CHECK_THROWS_AS(fitted_order({0.1}, {1.0}), ParameterError);
  }

  TEST_CASE("spectra report on n=999 carries the lowest Friedrichs eigenvalue") {
    RunConfig cfg;
    cfg.n = {999};
    cfg.suites = {Suite::spectra};
    cfg.out_dir = scratch("spectra");
    const auto result = run_report(cfg);
    REQUIRE(result.files.size() == 1);
    CHECK(result.files[0].filename() == "spectra_n999.json");
    CHECK(result.all_passed());
    const auto doc = nlohmann::json::parse(slurp(result.files[0]));
    CHECK(doc["suite"] == "spectra");
    CHECK(doc["mode"] == "time");
    CHECK(doc["grid"]["n"] == 999);
    CHECK(doc["grid"]["e_max"] == 50.0);
    CHECK(doc["grid"]["hbar"] == 1.0);
    bool found = false;
    for (const auto& c : doc["checks"]) {
      for (const char* key : {"id", "paper_anchor", "measured", "tolerance", "pass"}) CHECK(c.contains(key));
      if (c["id"] == "tsq_min_eigenvalue") {
        found = true;
        CHECK(c["measured"].get<double>() == doctest::Approx(0.0039478).epsilon(1e-4));
        CHECK(c["pass"] == true);
      }
    }
    CHECK(found);
  }

  TEST_CASE("numerics are identical across observable modes") {
    RunConfig cfg;
    cfg.e_max = 20.0;
    cfg.n = {127};
    cfg.suites = {Suite::spectra, Suite::algebra, Suite::hft};
    std::vector<std::string> numerics;
    for (auto mode : {ObservableMode::time, ObservableMode::halfline_momentum, ObservableMode::radial_momentum}) {
      cfg.mode = mode;
      cfg.out_dir = scratch("mode_" + to_string(mode));
      std::string joined;
      for (const auto& path : run_report(cfg).files) {
        auto doc = nlohmann::json::parse(slurp(path));
        for (auto& c : doc["checks"]) c.erase("quantity");
        joined += doc["checks"].dump();
      }
      numerics.push_back(joined);
    }
    CHECK(numerics[0] == numerics[1]);
    CHECK(numerics[0] == numerics[2]);
  }

  TEST_CASE("reports are deterministic and csv output is well-formed") {
    RunConfig cfg;
    cfg.e_max = 20.0;
    cfg.n = {63};
    cfg.suites = {Suite::deficiency, Suite::domains};
    cfg.format = OutputFormat::csv;
    cfg.out_dir = scratch("det_a");
    const auto a = run_report(cfg);
    cfg.out_dir = scratch("det_b");
    const auto b = run_report(cfg);
    REQUIRE(a.files.size() == 2);
    for (std::size_t i = 0; i < a.files.size(); ++i) CHECK(slurp(a.files[i]) == slurp(b.files[i]));
    CHECK(a.files[0].extension() == ".csv");
    CHECK(slurp(a.files[0]).rfind("suite,mode,e_max,n,hbar,id,paper_anchor,", 0) == 0);
  }

  TEST_CASE("unwritable output fails before computing") {
    RunConfig cfg;
    const fs::path blocker = scratch("blocker");
    std::ofstream(blocker) << "file, not a directory";
    cfg.out_dir = blocker / "sub";
    CHECK_THROWS_AS(run_report(cfg), ConfigError);
  }

  TEST_CASE("refinement sweep") {
    RunConfig cfg;
    cfg.e_max = 20.0;
    cfg.n = {99, 199};
    cfg.out_dir = scratch("sweep_short");
    CHECK_THROWS_AS(write_sweep(cfg), ConfigError);

    cfg.n = {99, 199, 399};
    cfg.out_dir = scratch("sweep");
    const auto files = write_sweep(cfg);
    REQUIRE(files.size() == 3);
    const std::string csv = slurp(files[0]);
    CHECK(csv.rfind("n,h,check_id,residual,fitted_order\n", 0) == 0);

    GridCache cache(cfg.e_max, cfg.hbar);
    const auto rows = refinement_sweep(cfg, cache);
    for (const auto& r : rows) {
      if (r.check_id == "canonical_residual") CHECK(r.fitted_order == doctest::Approx(2.0).epsilon(0.15));
      if (r.check_id == "variant_commutator_gap") CHECK(std::abs(r.fitted_order) < 0.1);
    }
    // Staircase slope of T_sqrt is pi hbar / e_max near the bottom of the spectrum.
    std::istringstream stair(slurp(files[2]));
    std::string line;
    std::getline(stair, line);
    std::vector<double> mu;
    while (std::getline(stair, line)) {
      if (line.rfind("399,", 0) == 0) mu.push_back(std::stod(line.substr(line.find(',', 4) + 1)));
    }
    REQUIRE(mu.size() == 399);
    CHECK((mu[9] - mu[0]) / 9.0 == doctest::Approx(oracle::pi / 20.0).epsilon(1e-3));
  }
}
