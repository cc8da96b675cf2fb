#include "timeop/runner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>

#include "timeop/algebra.hpp"
#include "timeop/errors.hpp"
#include "timeop/hft.hpp"

namespace timeop {

using namespace std::complex_literals;
namespace fs = std::filesystem;

namespace {

const std::pair<Suite, const char*> kSuiteNames[] = {
    {Suite::domains, "domains"}, {Suite::deficiency, "deficiency"}, {Suite::spectra, "spectra"},
    {Suite::time_rep, "time_rep"}, {Suite::hft, "hft"},             {Suite::algebra, "algebra"},
    {Suite::distribution, "distribution"}};

}  // namespace

Suite parse_suite(const std::string& name) {
  for (const auto& [suite, text] : kSuiteNames) {
    if (name == text) return suite;
  }
  throw ConfigError("unknown suite \"" + name + "\"");
}

std::string to_string(Suite suite) {
  for (const auto& [s, text] : kSuiteNames) {
    if (s == suite) return text;
  }
  return "?";
}

const std::vector<Suite>& all_suites() {
  static const std::vector<Suite> suites = {Suite::domains, Suite::deficiency, Suite::spectra,     Suite::time_rep,
                                            Suite::hft,     Suite::algebra,    Suite::distribution};
  return suites;
}

OutputFormat parse_format(const std::string& name) {
  if (name == "json") return OutputFormat::json;
  if (name == "csv") return OutputFormat::csv;
  throw ConfigError("unknown output format \"" + name + "\" (json, csv)");
}

namespace {

void reject_unknown_keys(const nlohmann::json& obj, std::initializer_list<const char*> allowed, const char* where) {
  for (const auto& item : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* k) { return item.key() == k; })) {
      throw ConfigError(std::string("unknown key \"") + item.key() + "\" in " + where);
    }
  }
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");

  RunConfig cfg;
  try {
    reject_unknown_keys(doc, {"observable_mode", "grid", "suites", "test_functions", "output", "seed"}, "config");
    if (doc.contains("observable_mode")) cfg.mode = parse_mode(doc.at("observable_mode").get<std::string>());
    if (doc.contains("grid")) {
      const auto& g = doc.at("grid");
      reject_unknown_keys(g, {"e_max", "n", "hbar"}, "grid");
      if (g.contains("e_max")) cfg.e_max = g.at("e_max").get<double>();
      if (g.contains("hbar")) cfg.hbar = g.at("hbar").get<double>();
      if (g.contains("n")) {
        const auto& n = g.at("n");
        cfg.n = n.is_array() ? n.get<std::vector<int>>() : std::vector<int>{n.get<int>()};
      }
    }
    if (doc.contains("suites")) {
      cfg.suites.clear();
      for (const auto& s : doc.at("suites")) cfg.suites.push_back(parse_suite(s.get<std::string>()));
    }
    if (doc.contains("test_functions")) {
      cfg.test_functions.clear();
      for (const auto& f : doc.at("test_functions")) {
        reject_unknown_keys(f, {"name", "params"}, "test_functions");
        cfg.test_functions.push_back(
            {f.at("name").get<std::string>(), f.value("params", std::vector<double>{})});
      }
    }
    if (doc.contains("output")) {
      const auto& o = doc.at("output");
      reject_unknown_keys(o, {"directory", "format"}, "output");
      if (o.contains("directory")) cfg.out_dir = o.at("directory").get<std::string>();
      if (o.contains("format")) cfg.format = parse_format(o.at("format").get<std::string>());
    }
    if (doc.contains("seed")) cfg.seed = doc.at("seed").get<long>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  validate(cfg);
  return cfg;
}

RunConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config(os.str());
}

void validate(const RunConfig& config) {
  if (config.suites.empty()) throw ConfigError("no suite selected");
  if (config.n.empty()) throw ConfigError("grid.n is empty");
  if (!(config.e_max > 0.0) || !std::isfinite(config.e_max)) throw ConfigError("grid.e_max must be positive");
  if (!(config.hbar > 0.0) || !std::isfinite(config.hbar)) throw ConfigError("grid.hbar must be positive");
  for (std::size_t i = 0; i < config.n.size(); ++i) {
    if (config.n[i] < kMinNodes) throw ConfigError("grid.n entries must be >= " + std::to_string(kMinNodes));
    if (i > 0 && config.n[i] <= config.n[i - 1]) throw ConfigError("grid.n must be strictly ascending");
  }
  if (config.test_functions.empty()) throw ConfigError("no test functions");
  for (const auto& f : config.test_functions) {
    try {
      AnalyticFunction::from_name(f.name, f.params);
    } catch (const ParameterError& e) {
      throw ConfigError(std::string("test function: ") + e.what());
    }
  }
}

GridPtr GridCache::grid(int n) {
  auto it = grids_.find(n);
  if (it == grids_.end()) it = grids_.emplace(n, make_grid(e_max_, n, hbar_)).first;
  return it->second;
}

const OperatorSet& GridCache::operators(int n) {
  auto it = ops_.find(n);
  if (it == ops_.end()) it = ops_.emplace(n, std::make_unique<OperatorSet>(OperatorSet::build(grid(n)))).first;
  return *it->second;
}

const TransformMatrix& GridCache::transform(int n) {
  auto it = transforms_.find(n);
  if (it == transforms_.end()) {
    it = transforms_.emplace(n, std::make_unique<TransformMatrix>(sine_transform(grid(n)))).first;
  }
  return *it->second;
}

namespace {

constexpr double kPi = std::numbers::pi;

std::string spec_label(const TestFunctionSpec& f) {
  std::ostringstream os;
  os << f.name << '(';
  for (std::size_t i = 0; i < f.params.size(); ++i) os << (i ? "," : "") << f.params[i];
  os << ')';
  return os.str();
}

struct NamedFunction {
  std::string id;
  WaveFunction f;
};

std::vector<NamedFunction> test_set(const RunConfig& config, const GridPtr& grid, bool domain_only) {
  std::vector<NamedFunction> out;
  for (const auto& spec : config.test_functions) {
    WaveFunction f = sample(AnalyticFunction::from_name(spec.name, spec.params), grid);
    if (domain_only && !f.vanishes_at_origin()) continue;
    out.push_back({spec_label(spec), std::move(f)});
  }
  return out;
}

Eigen::MatrixXcd product(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  if (a.imag().cwiseAbs().maxCoeff() == 0.0 && b.imag().cwiseAbs().maxCoeff() == 0.0) {
    return (a.real() * b.real()).cast<complex>();
  }
  return a * b;
}

// Claims under test.
const char* kBoundaryAnchor = "integration by parts on the half-line: <g|Tf> = i hbar f(0) g*(0) + <Tg|f>";
const char* kBoundarySignAnchor =
    "integration by parts on the half-line, evaluated with the inner product antilinear in its first slot";
const char* kSymmetricAnchor = "T is symmetric on functions vanishing at the origin";
const char* kDeficiencyTAnchor = "T has deficiency indices (0,1) and admits no selfadjoint extension";
const char* kDeficiencyTsqAnchor = "T^2 has equal deficiency indices (1,1) and admits selfadjoint extensions";
const char* kWitnessAnchor = "the spectrum of T is the upper half-plane plus the real line; Im z > 0 is residual";
const char* kFriedrichsAnchor = "the Friedrichs extension T_F^2 is positive with spectrum [0, inf)";
const char* kSqrtAnchor = "T_sqrt := +sqrt(T_F^2) is selfadjoint and positive";
const char* kTimeRepAnchor = "sine eigenfunctions <E|t> give a unitary time representation";
const char* kMultiplicativeAnchor = "T_F^2 and T_sqrt act by multiplication with t^2 and t in the time representation";
const char* kSecondDerivativeAnchor = "H^2 acts as -hbar^2 d^2/dt^2 in the time representation";
const char* kNotDerivativeAnchor = "H does not act as i hbar d/dt in the time representation";
const char* kDeltaAnchor = "time eigenfunctions are delta-normalized: <t|t'> = delta(t - t')";
const char* kHftAnchor = "holomorphic Fourier transform of functions supported on [0, inf)";
const char* kConjugateAnchor = "conjugate representation: (H phi)(t) = -i hbar dphi/dt, (T phi)(t) = t phi(t)";
const char* kHolomorphicAnchor = "phi is holomorphic in the upper half-plane";
const char* kHardyAnchor = "phi decays as Im t grows (Hardy space of the upper half-plane)";
const char* kCanonicalAnchor = "[T, H] = i hbar 1 on the intersection of the domains";
const char* kVariantAnchor = "T_sqrt does not canonically commute with the Hamiltonian";
const char* kJacobiAnchor = "Jacobi identity [[A,B],C] + [[B,C],A] + [[C,A],B] = 0";
const char* kLieAnchor = "{T_F^2, T, H, 1} closes under commutation and is a Lie algebra";
const char* kEnvelopingAnchor = "I = [T_sqrt, H] generates an enveloping algebra, not a Lie algebra";
const char* kPlumbing = "plumbing";

void domains_suite(Report& r, const RunConfig& config, const OperatorSet& ops) {
  const GridPtr& grid = ops.grid;
  const WaveFunction f = sample(AnalyticFunction::exponential(1.0), grid);
  const SymmetryDefect sd = symmetry_defect(ops.Tdag, f, f);
  r.checks.push_back(check_at_most("boundary_term_identity", kBoundaryAnchor,
                                   "|<g|{T}f> - <{T}g|f> - i hbar f(0) g*(0)|, f = g = exp(-{E})",
                                   std::abs(sd.lhs - sd.boundary_term), 5e-3));
  r.checks.push_back(check_at_most("boundary_term_opposite_sign", kBoundarySignAnchor,
                                   "|<g|{T}f> - <{T}g|f> + i hbar f(0) g*(0)|, f = g = exp(-{E}), tolerance 2h",
                                   std::abs(sd.lhs + sd.boundary_term), 2.0 * grid->h()));
  for (const auto& [id, fn] : test_set(config, grid, true)) {
    const SymmetryDefect s = symmetry_defect(ops.T, fn, fn);
    r.checks.push_back(check_at_most("symmetric_on_domain:" + id, kSymmetricAnchor,
                                     "|<f|{T}f> - <{T}f|f>| / ||f||^2", std::abs(s.lhs) / std::pow(fn.norm(), 2),
                                     1e-10));
  }
  r.checks.push_back(check_at_most("tsq_friedrichs_hermitian", kFriedrichsAnchor,
                                   "max|{TsqF} - {TsqF}^H| / max|{TsqF}|", ops.TsqF.hermiticity_defect(),
                                   kHermiticityTolerance));
}

void deficiency_suite(Report& r, const OperatorSet& ops) {
  const GridPtr& grid = ops.grid;
  struct Case {
    DeficiencyOperator op;
    Sign sign;
    int expected;
  };
  const Case cases[] = {{DeficiencyOperator::T, Sign::plus, 0},
                        {DeficiencyOperator::T, Sign::minus, 1},
                        {DeficiencyOperator::Tsq, Sign::plus, 1},
                        {DeficiencyOperator::Tsq, Sign::minus, 1}};
  for (const auto& c : cases) {
    const DeficiencyReport rep = deficiency_report(grid, c.op, c.sign);
    const bool is_t = c.op == DeficiencyOperator::T;
    const char* anchor = is_t ? kDeficiencyTAnchor : kDeficiencyTsqAnchor;
    const std::string sym = is_t ? "{T}" : "{T}^2";
    const std::string sgn = c.sign == Sign::plus ? "+" : "-";
    const std::string id =
        "deficiency_" + to_string(c.op) + (c.sign == Sign::plus ? "_plus" : "_minus");
    r.checks.push_back(check_near(id + "_index", anchor, "contribution of ker(" + sym + "^dag " +
                                                             (c.sign == Sign::plus ? "-" : "+") + " i) to n_" + sgn,
                                  rep.index_contribution, c.expected, 0.0));
    if (c.expected == 1) {
      r.checks.push_back(check_at_most(id + "_residual", anchor,
                                       "||(" + sym + "^dag - mu) f|| / (|mu| ||f||), f = " + rep.candidate.label(),
                                       rep.residual, kDeficiencyTolerance));
    } else {
      r.checks.push_back(check_at_least(id + "_growth", anchor,
                                        "||f||^2 on doubled extent / ||f||^2, f = " + rep.candidate.label(),
                                        rep.growth_ratio, 1.0 + 1e-6));
    }
  }
  const std::pair<const char*, complex> witnesses[] = {{"i", 1i}, {"1+2i", 1.0 + 2i}, {"3i", 3i}};
  for (const auto& [name, z] : witnesses) {
    r.checks.push_back(check_at_most(std::string("witness_z=") + name, kWitnessAnchor,
                                     "||({Tdag} - conj z) g|| / ||g||, g = exp(i conj(z) {E} / hbar)",
                                     residual_spectrum_witness(z, grid), 1e-2));
  }
}

void spectra_suite(Report& r, const OperatorSet& ops) {
  const GridSpec& g = *ops.grid;
  const double h = g.h();
  const double hbar = g.hbar();
  const int n = g.n();
  const Eigen::VectorXd lambda = eigensystem(ops.TsqF).eigenvalues;
  double closed_err = 0.0;
  for (int k = 1; k <= n; ++k) {
    const double s = std::sin(k * kPi / (2.0 * (n + 1)));
    const double closed = 4.0 * hbar * hbar / (h * h) * s * s;
    closed_err = std::max(closed_err, std::abs(lambda[k - 1] - closed) / closed);
  }
  r.checks.push_back(check_at_least("tsq_min_positive", kFriedrichsAnchor, "min eigenvalue of {TsqF}", lambda[0],
                                    std::numeric_limits<double>::min()));
  r.checks.push_back(check_at_most("tsq_closed_form", kFriedrichsAnchor,
                                   "max_k |lambda_k - (4 hbar^2/h^2) sin^2(k pi / (2(n+1)))| / lambda_k", closed_err,
                                   1e-10));
  const double lowest = std::pow(kPi * hbar / g.e_max(), 2);
  r.checks.push_back(check_near("tsq_min_eigenvalue", kFriedrichsAnchor,
                                "min eigenvalue of {TsqF} -> (pi hbar / e_max)^2, tolerance h^2 (pi hbar/e_max)^2",
                                lambda[0], lowest, h * h * lowest));

  const Eigen::MatrixXcd sq = product(ops.Tsqrt.entries(), ops.Tsqrt.entries());
  r.checks.push_back(check_at_most("tsqrt_square", kSqrtAnchor, "||{Tsqrt}^2 - {TsqF}||_F / ||{TsqF}||_F",
                                   (sq - ops.TsqF.entries()).norm() / ops.TsqF.entries().norm(), 1e-8));
  const Eigen::VectorXd mu = eigenvalues(ops.Tsqrt);
  r.checks.push_back(check_at_least("tsqrt_min_eigenvalue", kSqrtAnchor, "min eigenvalue of {Tsqrt}", mu[0], 0.0));
  double kth = 0.0;
  for (int k = 1; k <= std::min(5, n); ++k) {
    const double target = k * kPi * hbar / g.e_max();
    kth = std::max(kth, std::abs(mu[k - 1] - target) / target);
  }
  r.checks.push_back(check_at_most("tsqrt_kth_eigenvalue", kSqrtAnchor,
                                   "max_{k<=5} |mu_k - k pi hbar / e_max| / (k pi hbar / e_max), tolerance h^2", kth,
                                   h * h));
}

void time_rep_suite(Report& r, const OperatorSet& ops, const TransformMatrix& u) {
  const GridPtr& grid = ops.grid;
  const double hbar = grid->hbar();
  const int n = grid->n();
  const Eigen::MatrixXcd uu = product(u.adjoint().entries(), u.entries());
  r.checks.push_back(check_at_most("unitarity", kTimeRepAnchor, "max |U^dag U - 1|",
                                   (uu - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-6));
  const TimeRepResiduals res = time_rep_action_checks(u, ops);
  r.checks.push_back(check_at_most("tsq_diagonal", kMultiplicativeAnchor,
                                   "||U {TsqF} U^dag - diag({t}^2)||_F / ||diag({t}^2)||_F", res.tsq_diagonal, 1e-6));
  r.checks.push_back(check_at_most("tsqrt_diagonal", kMultiplicativeAnchor,
                                   "||U {Tsqrt} U^dag - diag({t})||_F / ||diag({t})||_F", res.tsqrt_diagonal, 1e-6));
  r.checks.push_back(check_at_most("hsq_second_difference", kSecondDerivativeAnchor,
                                   "||(U {H}^2 U^dag + hbar^2 D_{t}{t}) g|| / ||U {H}^2 U^dag g||, g = U({E} exp(-{E})), tolerance h",
                                   res.hsq_second_difference, grid->h()));
  r.checks.push_back(check_at_least("h_derivative_gap", kNotDerivativeAnchor,
                                    "||(U {H} U^dag - i hbar D_{t}) g|| / ||g||, g = U({E} exp(-{E}))",
                                    res.h_derivative_gap, 0.1));

  const double t1 = 1.0;
  const double nodes[] = {t1};
  const TransformMatrix u1 = sine_transform(grid, nodes);
  const complex value = (u1.entries() * sample(AnalyticFunction::exponential(1.0), grid).values())[0];
  const double x = t1 / hbar;
  const double closed = std::sqrt(2.0 / (kPi * hbar)) * x / (1.0 + x * x);
  r.checks.push_back(check_near("kernel_transform_t=1", kTimeRepAnchor, "(U exp(-{E}))({t} = 1)", value.real(),
                                closed, 1e-3));

  const double center = 3.0;
  const double half_width = 1.0;
  if (center + half_width < 2.0 * hbar / grid->h()) {
    const double e1 = smeared_delta_error(*grid, center, half_width);
    const double e2 = smeared_delta_error(*doubled_extent(*grid), center, half_width);
    r.checks.push_back(check_at_most("smeared_delta_halving", kDeltaAnchor,
                                     "smeared-delta error(2 e_max) / error(e_max), bump on [2, 4]", e2 / e1, 0.5));
  }
}

void hft_suite(Report& r, const RunConfig& config, const GridPtr& grid) {
  const double hbar = grid->hbar();
  const WaveFunction f0 = sample(AnalyticFunction::exponential(1.0), grid);
  const std::pair<const char*, complex> points[] = {{"0", 0.0}, {"i", 1i}, {"1", 1.0}};
  for (const auto& [name, t] : points) {
    const complex closed = 1.0 / (std::sqrt(2.0 * kPi * hbar) * (1.0 - 1i * t / hbar));
    r.checks.push_back(check_at_most(std::string("hft_closed_form_t=") + name, kHftAnchor,
                                     "|phi({t}) - 1/(sqrt(2 pi hbar)(1 - i {t}/hbar))|, f = exp(-{E})",
                                     std::abs(hft_forward(f0, t) - closed), 1e-3));
  }
  for (const auto& [id, f] : test_set(config, grid, false)) {
    r.checks.push_back(check_at_most("hft_roundtrip:" + id, kHftAnchor, "||f - inverse(forward f)|| / ||f||",
                                     hft_roundtrip_error(f), 1e-4));
  }
  for (const auto& [id, f] : test_set(config, grid, true)) {
    const auto at_i = conjugate_rep_check(f, HalfPlanePoint(0.0, 1.0));
    const auto at_1i = conjugate_rep_check(f, HalfPlanePoint(1.0, 1.0));
    r.checks.push_back(check_at_most("hft_h_residual_t=i:" + id, kConjugateAnchor,
                                     "|phi_{{H}f}({t}) + i hbar dphi/d{t}| / (|phi| + 1)", at_i.h_residual, 1e-4));
    r.checks.push_back(check_at_most("hft_t_residual_t=1+i:" + id, kConjugateAnchor,
                                     "|phi_{{T}f}({t}) - {t} phi({t})| / (|phi| + 1)", at_1i.t_residual, 1e-4));
  }
  r.checks.push_back(check_at_most("hft_cauchy_riemann_t=i", kHolomorphicAnchor,
                                   "Cauchy-Riemann residual of phi at {t} = i, delta = 1e-3, f = exp(-{E})",
                                   analyticity_check(f0, HalfPlanePoint(0.0, 1.0), 1e-3), 1e-5));
  const double a1 = std::abs(hft_forward(f0, 1i));
  const double a10 = std::abs(hft_forward(f0, 10i));
  const double a100 = std::abs(hft_forward(f0, 100i));
  r.checks.push_back(check_at_most("hft_hardy_decay", kHardyAnchor,
                                   "max(|phi(10i)|/|phi(i)|, |phi(100i)|/|phi(10i)|), f = exp(-{E})",
                                   std::max(a10 / a1, a100 / a10), 1.0 - 1e-12));
}

void algebra_suite(Report& r, const RunConfig& config, const OperatorSet& ops, const OperatorSet& companion) {
  const GridPtr& grid = ops.grid;
  const auto fns = test_set(config, grid, true);
  for (const auto& [id, f] : fns) {
    const CommutatorReport can = canonical_residual(f, ops);
    r.checks.push_back(check_at_most("canonical:" + id, kCanonicalAnchor,
                                     "||([{T},{H}] - i hbar) f|| / ||f||, tolerance 2 h^2", can.relative_residual,
                                     can.tolerance));
    const CommutatorReport var = variant_commutator_gap(f, ops, &companion);
    r.checks.push_back(check_at_least("variant_gap:" + id, kVariantAnchor, "||([{Tsqrt},{H}] - i hbar) f|| / ||f||",
                                      var.relative_residual, kVariantGapFloor));
    const WaveFunction fc = sample(*f.source(), companion.grid);
    const double rc = variant_commutator_gap(fc, companion).relative_residual;
    r.checks.push_back(check_at_most("variant_gap_stability:" + id, kVariantAnchor,
                                     "|gap(n) - gap(n_companion)| / gap(n), n_companion = " +
                                         std::to_string(companion.grid->n()),
                                     std::abs(var.relative_residual - rc) / var.relative_residual, kVariantStability));
    const LieClosureReport lie = lie_closure_check(f, ops);
    r.checks.push_back(check_at_most("closure_tsq_h:" + id, kLieAnchor,
                                     "||([{TsqF},{H}] - 2 i hbar {T}) f|| / ||f||, interior rows, tolerance 4 h^2",
                                     lie.tsq_h, lie.tolerance));
    r.checks.push_back(check_at_most("closure_tsq_t:" + id, kLieAnchor,
                                     "||[{TsqF},{T}] f|| / ||f||, interior rows, tolerance 4 h^2", lie.tsq_t,
                                     lie.tolerance));
    r.checks.push_back(check_at_most("closure_t_h:" + id, kLieAnchor,
                                     "||([{T},{H}] - i hbar) f|| / ||f||, interior rows, tolerance 4 h^2", lie.t_h,
                                     lie.tolerance));
    r.checks.push_back(check_at_least("span_residual_I_H:" + id, kEnvelopingAnchor,
                                      "least-squares residual of [{I},{H}] f on span{{Tsqrt} f, {H} f, {I} f, f}",
                                      lie.span_i_h, kSpanResidualFloor));
    r.checks.push_back(check_at_least("span_residual_I_Tsqrt:" + id, kEnvelopingAnchor,
                                      "least-squares residual of [{I},{Tsqrt}] f on span{{Tsqrt} f, {H} f, {I} f, f}",
                                      lie.span_i_tsqrt, kSpanResidualFloor));
  }
  if (!fns.empty()) {
    const JacobiSweep jac = jacobi_sweep(ops, fns.front().f);
    r.checks.push_back(check_at_most("jacobi_all_triples", kJacobiAnchor,
                                     "max over " + std::to_string(jac.triples) +
                                         " generator triples of the scaled Jacobi residual, worst " + jac.worst_triple,
                                     jac.max_residual, 1e-10));
  }
}

void distribution_suite(Report& r, const RunConfig& config, const TransformMatrix& u) {
  const GridPtr& grid = u.grid_ptr();
  for (const auto& [id, f] : test_set(config, grid, false)) {
    const TimeSamples g = to_time_rep(f, u);
    r.checks.push_back(check_at_most("parseval:" + id, kTimeRepAnchor, "| ||U f|| / ||f|| - 1 |",
                                     std::abs(g.norm() / f.norm() - 1.0), 1e-10));
    const auto p = time_distribution(f, u);
    double total = 0.0;
    double mean = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) {
      total += p[j];
      mean += p[j] * u.t_nodes()[static_cast<Eigen::Index>(j)];
    }
    r.checks.push_back(check_at_least("distribution_nonnegative:" + id, kPlumbing, "min_j p_j",
                                      *std::min_element(p.begin(), p.end()), 0.0));
    r.checks.push_back(check_near("distribution_total:" + id, kPlumbing, "sum_j p_j", total, 1.0, 1e-12));
    r.checks.push_back(check_at_least("distribution_mean_time:" + id, kPlumbing, "sum_j p_j {t}_j", mean, 0.0));
  }
  // An eigenvector of T_sqrt is localized on its own time node.
  const int k = std::min(5, grid->n()) - 1;
  const Eigen::VectorXcd row = u.entries().row(k).adjoint() / grid->h();
  const auto p = time_distribution(WaveFunction::from_values(grid, row), u);
  r.checks.push_back(check_near("eigenstate_localization", kTimeRepAnchor,
                                "p at {t}_5 for the 5th eigenvector of {Tsqrt}", p[static_cast<std::size_t>(k)], 1.0,
                                1e-10));
}

int companion_grid(int n, int requested) { return requested > 0 ? requested : (n + 1) / 2 - 1; }

}  // namespace

Report run_suite(Suite suite, const RunConfig& config, int n, GridCache& cache, int companion_n) {
  Report r{to_string(suite), config.mode, config.e_max, n, config.hbar, library_version(), {}};
  switch (suite) {
    case Suite::domains: domains_suite(r, config, cache.operators(n)); break;
    case Suite::deficiency: deficiency_suite(r, cache.operators(n)); break;
    case Suite::spectra: spectra_suite(r, cache.operators(n)); break;
    case Suite::time_rep: time_rep_suite(r, cache.operators(n), cache.transform(n)); break;
    case Suite::hft: hft_suite(r, config, cache.grid(n)); break;
    case Suite::algebra:
      algebra_suite(r, config, cache.operators(n), cache.operators(companion_grid(n, companion_n)));
      break;
    case Suite::distribution: distribution_suite(r, config, cache.transform(n)); break;
  }
  return r;
}

bool RunResult::all_passed() const {
  return std::all_of(reports.begin(), reports.end(), [](const Report& r) { return r.passed(); });
}

namespace {

void require_writable(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw ConfigError("cannot create output directory " + dir.string());
  const fs::path probe = dir / ".timeop_write_probe";
  {
    std::ofstream out(probe);
    if (!out) throw ConfigError("output directory " + dir.string() + " is not writable");
  }
  fs::remove(probe, ec);
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw ConfigError("failed writing " + path.string());
}

}  // namespace

RunResult run_report(const RunConfig& config) {
  validate(config);
  require_writable(config.out_dir);
  GridCache cache(config.e_max, config.hbar);
  RunResult result;
  for (std::size_t i = 0; i < config.n.size(); ++i) {
    const int n = config.n[i];
    const int companion = i > 0 ? config.n[i - 1] : (config.n.size() > 1 ? config.n[1] : 0);
    for (Suite suite : config.suites) {
      Report r = run_suite(suite, config, n, cache, companion);
      const bool json = config.format == OutputFormat::json;
      const fs::path path = config.out_dir / (r.suite + "_n" + std::to_string(n) + (json ? ".json" : ".csv"));
      write_file(path, json ? render_json(r) : render_csv(r));
      result.files.push_back(path);
      result.reports.push_back(std::move(r));
    }
  }
  return result;
}

double fitted_order(const std::vector<double>& h, const std::vector<double>& residual) {
  if (h.size() != residual.size() || h.size() < 2) throw ParameterError("fitted_order: needs >= 2 matched points");
  const auto m = static_cast<double>(h.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double x = std::log(h[i]);
    const double y = std::log(residual[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

std::vector<ConvergenceRow> refinement_sweep(const RunConfig& config, GridCache& cache) {
  validate(config);
  if (config.n.size() < 3) throw ConfigError("refinement sweep needs at least three grid sizes");

  std::map<std::string, std::vector<std::pair<int, double>>> series;
  for (int n : config.n) {
    const OperatorSet& ops = cache.operators(n);
    const GridPtr& grid = ops.grid;
    const double hbar = grid->hbar();
    const auto fns = test_set(config, grid, true);
    if (!fns.empty()) {
      const WaveFunction& f = fns.front().f;
      series["canonical_residual"].push_back({n, canonical_residual(f, ops).relative_residual});
      series["variant_commutator_gap"].push_back({n, variant_commutator_gap(f, ops).relative_residual});
      series["hft_t_residual"].push_back({n, conjugate_rep_check(f, HalfPlanePoint(1.0, 1.0)).t_residual});
    }
    const WaveFunction e = sample(AnalyticFunction::exponential(1.0), grid);
    const SymmetryDefect sd = symmetry_defect(ops.Tdag, e, e);
    series["boundary_term_opposite_sign"].push_back({n, std::abs(sd.lhs + sd.boundary_term)});
    series["deficiency_T_minus_residual"].push_back(
        {n, deficiency_report(grid, DeficiencyOperator::T, Sign::minus).residual});
    series["witness_z=3i"].push_back({n, residual_spectrum_witness(3i, grid)});
    const Eigen::VectorXd lambda = eigensystem(ops.TsqF).eigenvalues;
    const double lowest = std::pow(kPi * hbar / grid->e_max(), 2);
    series["tsq_min_eigenvalue_error"].push_back({n, std::abs(lambda[0] - lowest) / lowest});
    const double t1 = kPi * hbar / grid->e_max();
    series["tsqrt_first_eigenvalue_error"].push_back({n, std::abs(std::sqrt(lambda[0]) - t1) / t1});
    series["hsq_second_difference"].push_back(
        {n, time_rep_action_checks(cache.transform(n), ops).hsq_second_difference});
  }

  std::vector<ConvergenceRow> rows;
  for (const auto& [id, points] : series) {
    std::vector<double> hs, rs;
    for (const auto& [n, res] : points) {
      hs.push_back(cache.grid(n)->h());
      rs.push_back(res);
    }
    const double order = fitted_order(hs, rs);
    for (std::size_t i = 0; i < points.size(); ++i) rows.push_back({points[i].first, hs[i], id, rs[i], order});
  }
  return rows;
}

std::string render_convergence_csv(const std::vector<ConvergenceRow>& rows) {
  std::ostringstream os;
  os.precision(17);
  os << "n,h,check_id,residual,fitted_order\n";
  for (const auto& r : rows) os << r.n << ',' << r.h << ',' << r.check_id << ',' << r.residual << ',' << r.fitted_order << '\n';
  return os.str();
}

std::vector<fs::path> write_sweep(const RunConfig& config) {
  validate(config);
  if (config.n.size() < 3) throw ConfigError("refinement sweep needs at least three grid sizes");
  require_writable(config.out_dir);
  GridCache cache(config.e_max, config.hbar);
  const auto rows = refinement_sweep(config, cache);

  std::vector<fs::path> files;
  files.push_back(config.out_dir / "convergence.csv");
  write_file(files.back(), render_convergence_csv(rows));

  std::ostringstream plot;
  plot.precision(17);
  plot << "check_id,h,residual,log10_h,log10_residual\n";
  for (const auto& r : rows) {
    plot << r.check_id << ',' << r.h << ',' << r.residual << ',' << std::log10(r.h) << ','
         << std::log10(r.residual) << '\n';
  }
  files.push_back(config.out_dir / "plot_residual_vs_h.csv");
  write_file(files.back(), plot.str());

  std::ostringstream stair;
  stair.precision(17);
  stair << "n,k,eigenvalue,k_pi_hbar_over_e_max\n";
  for (int n : config.n) {
    const Eigen::VectorXd mu = eigenvalues(cache.operators(n).Tsqrt);
    for (Eigen::Index k = 0; k < mu.size(); ++k) {
      stair << n << ',' << k + 1 << ',' << mu[k] << ',' << (k + 1) * kPi * config.hbar / config.e_max << '\n';
    }
  }
  files.push_back(config.out_dir / "plot_tsqrt_staircase.csv");
  write_file(files.back(), stair.str());
  return files;
}

}  // namespace timeop
