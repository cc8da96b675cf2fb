#include "timeop/operators.hpp"

#include <cmath>
#include <limits>

#include "timeop/errors.hpp"

namespace timeop {

using namespace std::complex_literals;

std::string to_string(Symbol s) {
  switch (s) {
    case Symbol::H:
      return "H";
    case Symbol::T:
      return "T";
    case Symbol::Tdag:
      return "Tdag";
    case Symbol::TsqF:
      return "TsqF";
    case Symbol::Tsqrt:
      return "Tsqrt";
    case Symbol::derived:
      return "derived";
  }
  return "?";
}

std::string to_string(BoundaryCondition bc) {
  switch (bc) {
    case BoundaryCondition::none:
      return "none";
    case BoundaryCondition::dirichlet_origin:
      return "dirichlet_origin";
    case BoundaryCondition::dirichlet_both:
      return "dirichlet_both";
  }
  return "?";
}

std::string to_string(DeficiencyOperator op) { return op == DeficiencyOperator::T ? "T" : "Tsq"; }
std::string to_string(Sign s) { return s == Sign::plus ? "+" : "-"; }

OperatorMatrix::OperatorMatrix(GridPtr grid, Eigen::MatrixXcd entries, BoundaryCondition bc, Symbol symbol)
    : grid_(std::move(grid)), entries_(std::move(entries)), bc_(bc), symbol_(symbol) {
  if (!grid_) throw ParameterError("OperatorMatrix: null grid");
  if (entries_.rows() != entries_.cols() || entries_.rows() != grid_->n()) {
    throw ParameterError("OperatorMatrix: expected a square matrix of dimension " + std::to_string(grid_->n()));
  }
}

WaveFunction OperatorMatrix::apply(const WaveFunction& f) const {
  require_same_grid(*grid_, f.grid(), "OperatorMatrix::apply");
  Eigen::VectorXcd v = entries_ * f.values();
  if (symbol_ == Symbol::H) return {grid_, std::move(v), 0.0, true};
  return WaveFunction::from_values(grid_, std::move(v));
}

double OperatorMatrix::hermiticity_defect() const {
  const double scale = entries_.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  return (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff() / scale;
}

OperatorMatrix hamiltonian(GridPtr grid) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(grid->n(), grid->n());
  m.diagonal() = grid->nodes().cast<complex>();
  return {std::move(grid), std::move(m), BoundaryCondition::none, Symbol::H};
}

OperatorMatrix time_candidate(GridPtr grid, TimeDomain domain) {
  const int n = grid->n();
  const double h = grid->h();
  const complex c = 1i * grid->hbar() / (2.0 * h);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 1; i < n - 1; ++i) {
    m(i, i - 1) = -c;
    m(i, i + 1) = c;
  }
  if (domain == TimeDomain::dirichlet_origin) {
    m(0, 1) = c;
  } else {
    m(0, 0) = -3.0 * c;
    m(0, 1) = 4.0 * c;
    m(0, 2) = -c;
  }
  m(n - 1, n - 3) = c;
  m(n - 1, n - 2) = -4.0 * c;
  m(n - 1, n - 1) = 3.0 * c;
  const bool dirichlet = domain == TimeDomain::dirichlet_origin;
  return {std::move(grid), std::move(m), dirichlet ? BoundaryCondition::dirichlet_origin : BoundaryCondition::none,
          dirichlet ? Symbol::T : Symbol::Tdag};
}

namespace {

Eigen::MatrixXcd second_difference(const GridSpec& grid) {
  const int n = grid.n();
  const double c = -grid.hbar() * grid.hbar() / (grid.h() * grid.h());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    m(i, i) = -2.0 * c;
    if (i > 0) m(i, i - 1) = c;
    if (i + 1 < n) m(i, i + 1) = c;
  }
  return m;
}

}  // namespace

OperatorMatrix tsq_friedrichs(GridPtr grid) {
  Eigen::MatrixXcd m = second_difference(*grid);
  return {std::move(grid), std::move(m), BoundaryCondition::dirichlet_both, Symbol::TsqF};
}

OperatorMatrix tsq_adjoint(GridPtr grid) {
  Eigen::MatrixXcd m = second_difference(*grid);
  const double c = -grid->hbar() * grid->hbar() / (grid->h() * grid->h());
  m.row(0).setZero();
  m(0, 0) = 2.0 * c;
  m(0, 1) = -5.0 * c;
  m(0, 2) = 4.0 * c;
  m(0, 3) = -1.0 * c;
  return {std::move(grid), std::move(m), BoundaryCondition::none, Symbol::derived};
}

SymmetryDefect symmetry_defect(const OperatorMatrix& op, const WaveFunction& f, const WaveFunction& g) {
  if (op.symbol() != Symbol::T && op.symbol() != Symbol::Tdag) {
    throw ParameterError("symmetry_defect: operator must be T or Tdag, got " + to_string(op.symbol()));
  }
  require_same_grid(op.grid(), f.grid(), "symmetry_defect");
  require_same_grid(op.grid(), g.grid(), "symmetry_defect");
  if (!f.boundary_value_exact() || !g.boundary_value_exact()) {
    throw DomainError("symmetry_defect: f(0) and g(0) must be known analytically");
  }
  const complex lhs = inner(g, op.apply(f)) - inner(op.apply(g), f);
  const complex bt = 1i * op.grid().hbar() * f.boundary_value_origin() * std::conj(g.boundary_value_origin());
  return {lhs, bt, std::abs(lhs - bt) / (std::abs(bt) + 1.0)};
}

double relative_eigen_residual(const OperatorMatrix& a, const WaveFunction& f, complex mu) {
  require_same_grid(a.grid(), f.grid(), "relative_eigen_residual");
  const Eigen::VectorXcd r = a.entries() * f.values() - mu * f.values();
  return grid_norm(a.grid(), r) / (std::abs(mu) * f.norm());
}

namespace {

constexpr double kL2GrowthLimit = 1.0 + 1e-6;

double growth_ratio(const AnalyticFunction& fn, const GridPtr& grid) {
  const double base = sample(fn, grid).norm();
  const double wide = sample(fn, doubled_extent(*grid)).norm();
  const double ratio = (wide * wide) / (base * base);
  return std::isfinite(ratio) ? ratio : std::numeric_limits<double>::infinity();
}

}  // namespace

DeficiencyReport deficiency_report(GridPtr grid, DeficiencyOperator which, Sign sign) {
  const double s = sign == Sign::plus ? 1.0 : -1.0;
  const double hbar = grid->hbar();
  const complex mu = s * 1i;

  // exp(-a E) with a chosen so that A^dagger f = mu f holds exactly.
  AnalyticFunction candidate = AnalyticFunction::exponential(0.0);
  if (which == DeficiencyOperator::T) {
    // i hbar f' = s i f  =>  f = exp(s E / hbar)
    candidate = AnalyticFunction::exponential(-s / hbar);
  } else {
    // -hbar^2 f'' = s i f  =>  k^2 = -s i / hbar^2; keep the root with Re k < 0
    const complex k = -std::sqrt(complex(0.0, -s)) / hbar;
    candidate = AnalyticFunction::exponential(-k);
  }

  const OperatorMatrix adj =
      which == DeficiencyOperator::T ? time_candidate(grid, TimeDomain::free) : tsq_adjoint(grid);
  const WaveFunction f = sample(candidate, grid);
  const double residual = relative_eigen_residual(adj, f, mu);
  const double ratio = growth_ratio(candidate, grid);
  const bool l2 = ratio <= kL2GrowthLimit;
  return {which, sign, candidate, l2, ratio, residual, (l2 && residual <= kDeficiencyTolerance) ? 1 : 0};
}

DefectIndices defect_indices(GridPtr grid, DeficiencyOperator which) {
  return {deficiency_report(grid, which, Sign::plus).index_contribution,
          deficiency_report(grid, which, Sign::minus).index_contribution};
}

double residual_spectrum_witness(complex z, GridPtr grid) {
  if (!(z.imag() > 0.0)) {
    throw ParameterError("residual_spectrum_witness: need Im z > 0");
  }
  const complex eig = std::conj(z);
  const WaveFunction g = sample(AnalyticFunction::exponential(1i * eig / grid->hbar()), grid);
  const Eigen::VectorXcd r = time_candidate(grid, TimeDomain::free).apply(g.values()) - eig * g.values();
  return grid_norm(*grid, r) / g.norm();
}

}  // namespace timeop
