#include "timeop/grid.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "timeop/errors.hpp"

namespace timeop {

GridSpec::GridSpec(double e_max, int n, double hbar)
    : e_max_(e_max), n_(n), hbar_(hbar), h_(e_max / (n + 1)), nodes_(n), weights_(n) {
  for (int i = 0; i < n; ++i) nodes_[i] = (i + 1) * h_;
  weights_.setConstant(h_);
}

bool GridSpec::same_as(const GridSpec& other) const {
  return this == &other || (n_ == other.n_ && e_max_ == other.e_max_ && hbar_ == other.hbar_);
}

GridPtr make_grid(double e_max, int n, double hbar) {
  if (!(e_max > 0.0) || !std::isfinite(e_max)) {
    throw ParameterError("make_grid: e_max must be positive and finite, got " + std::to_string(e_max));
  }
  if (n < kMinNodes) {
    throw ParameterError("make_grid: need at least " + std::to_string(kMinNodes) + " interior nodes, got " +
                         std::to_string(n));
  }
  if (!(hbar > 0.0) || !std::isfinite(hbar)) {
    throw ParameterError("make_grid: hbar must be positive and finite, got " + std::to_string(hbar));
  }
  return std::make_shared<const GridSpec>(e_max, n, hbar);
}

GridPtr doubled_extent(const GridSpec& grid) {
  return make_grid(2.0 * grid.e_max(), 2 * (grid.n() + 1) - 1, grid.hbar());
}

GridPtr refined(const GridSpec& grid) { return make_grid(grid.e_max(), 2 * grid.n() + 1, grid.hbar()); }

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what) {
  if (!a.same_as(b)) {
    std::ostringstream os;
    os << what << ": grid mismatch (n=" << a.n() << ", e_max=" << a.e_max() << ") vs (n=" << b.n()
       << ", e_max=" << b.e_max() << ")";
    throw GridMismatch(os.str());
  }
}

// --- analytic family -------------------------------------------------------

AnalyticFunction AnalyticFunction::power_exp(int k, double a) {
  if (k < 0) throw ParameterError("power_exp: exponent k must be >= 0");
  return {FunctionKind::power_exp, complex(a, 0.0), static_cast<double>(k)};
}

AnalyticFunction AnalyticFunction::gaussian(double mu, double sigma) {
  if (!(sigma > 0.0)) throw ParameterError("gaussian: sigma must be positive");
  return {FunctionKind::gaussian, complex(mu, 0.0), sigma};
}

AnalyticFunction AnalyticFunction::exponential(complex a) { return {FunctionKind::exponential, a, 0.0}; }

AnalyticFunction AnalyticFunction::sine_kernel(double t) {
  if (t < 0.0) throw ParameterError("sine_kernel: t must be >= 0");
  return {FunctionKind::sine_kernel, complex(t, 0.0), 0.0};
}

AnalyticFunction AnalyticFunction::from_name(const std::string& name, const std::vector<double>& params) {
  auto need = [&](std::size_t count) {
    if (params.size() != count) {
      throw ParameterError("test function '" + name + "' expects " + std::to_string(count) + " parameter(s), got " +
                           std::to_string(params.size()));
    }
  };
  if (name == "power_exp") {
    need(2);
    if (params[0] != std::floor(params[0])) throw ParameterError("power_exp: k must be an integer");
    return power_exp(static_cast<int>(params[0]), params[1]);
  }
  if (name == "gaussian") {
    need(2);
    return gaussian(params[0], params[1]);
  }
  if (name == "exp") {
    need(1);
    return exponential(params[0]);
  }
  if (name == "sine") {
    need(1);
    return sine_kernel(params[0]);
  }
  throw ParameterError("unknown test function '" + name + "' (known: power_exp, gaussian, exp, sine)");
}

const std::string& AnalyticFunction::name() const {
  static const std::string names[] = {"power_exp", "gaussian", "exp", "sine"};
  return names[static_cast<int>(kind_)];
}

std::vector<double> AnalyticFunction::params() const {
  switch (kind_) {
    case FunctionKind::power_exp:
      return {p1_, p0_.real()};
    case FunctionKind::gaussian:
      return {p0_.real(), p1_};
    case FunctionKind::exponential:
      if (p0_.imag() != 0.0) return {p0_.real(), p0_.imag()};
      return {p0_.real()};
    case FunctionKind::sine_kernel:
      return {p0_.real()};
  }
  return {};
}

std::string AnalyticFunction::label() const {
  std::ostringstream os;
  switch (kind_) {
    case FunctionKind::power_exp:
      os << "E^" << p1_ << "*exp(-" << p0_.real() << "E)";
      break;
    case FunctionKind::gaussian:
      os << "exp(-(E-" << p0_.real() << ")^2/(2*" << p1_ << "^2))";
      break;
    case FunctionKind::exponential:
      if (p0_.imag() == 0.0) {
        os << "exp(-" << p0_.real() << "E)";
      } else {
        os << "exp(-(" << p0_.real() << (p0_.imag() < 0 ? "" : "+") << p0_.imag() << "i)E)";
      }
      break;
    case FunctionKind::sine_kernel:
      os << "sine(t=" << p0_.real() << ")";
      break;
  }
  return os.str();
}

complex AnalyticFunction::value(double e, double hbar) const {
  switch (kind_) {
    case FunctionKind::power_exp:
      return std::pow(e, p1_) * std::exp(-p0_.real() * e);
    case FunctionKind::gaussian: {
      const double d = e - p0_.real();
      return std::exp(-d * d / (2.0 * p1_ * p1_));
    }
    case FunctionKind::exponential:
      return std::exp(-p0_ * e);
    case FunctionKind::sine_kernel:
      return std::sqrt(2.0 / (std::numbers::pi * hbar)) * std::sin(e * p0_.real() / hbar);
  }
  return 0.0;
}

// --- wave functions --------------------------------------------------------

WaveFunction::WaveFunction(GridPtr grid, Eigen::VectorXcd values, complex origin_value, bool origin_exact,
                           std::optional<AnalyticFunction> source)
    : grid_(std::move(grid)),
      values_(std::move(values)),
      origin_value_(origin_value),
      origin_exact_(origin_exact),
      source_(std::move(source)) {
  if (!grid_) throw ParameterError("WaveFunction: null grid");
  if (values_.size() != grid_->n()) {
    throw ParameterError("WaveFunction: " + std::to_string(values_.size()) + " values for a grid of " +
                         std::to_string(grid_->n()) + " nodes");
  }
}

WaveFunction WaveFunction::from_values(GridPtr grid, Eigen::VectorXcd values) {
  complex origin = 0.0;
  if (values.size() >= 3) origin = 3.0 * values[0] - 3.0 * values[1] + values[2];
  return {std::move(grid), std::move(values), origin, false};
}

double WaveFunction::norm() const { return grid_norm(*grid_, values_); }

bool WaveFunction::vanishes_at_origin() const {
  const double scale = values_.size() > 0 ? values_.cwiseAbs().maxCoeff() : 0.0;
  return std::abs(origin_value_) <= 1e-5 * scale;
}

WaveFunction sample(const AnalyticFunction& fn, GridPtr grid) {
  Eigen::VectorXcd v(grid->n());
  const auto& e = grid->nodes();
  for (int i = 0; i < grid->n(); ++i) v[i] = fn.value(e[i], grid->hbar());
  const complex origin = fn.value_at_origin(grid->hbar());
  return {std::move(grid), std::move(v), origin, true, fn};
}

complex inner(const WaveFunction& g, const WaveFunction& f) {
  require_same_grid(g.grid(), f.grid(), "inner");
  const auto& w = f.grid().weights();
  complex acc = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) acc += w[i] * std::conj(g.values()[i]) * f.values()[i];
  return acc;
}

double norm(const WaveFunction& f) { return f.norm(); }

double grid_norm(const GridSpec& grid, const Eigen::VectorXcd& v) {
  double acc = 0.0;
  const auto& w = grid.weights();
  for (Eigen::Index i = 0; i < v.size(); ++i) acc += w[i] * std::norm(v[i]);
  return std::sqrt(acc);
}

}  // namespace timeop
