#pragma once

#include <string>

#include <Eigen/Dense>

#include "timeop/grid.hpp"

namespace timeop {

enum class BoundaryCondition { none, dirichlet_origin, dirichlet_both };

/// Role of a matrix: H, T (f(0)=0), T-dagger (free), Friedrichs T^2, its square root, or anything else.
enum class Symbol { H, T, Tdag, TsqF, Tsqrt, derived };

std::string to_string(Symbol s);
std::string to_string(BoundaryCondition bc);

class OperatorMatrix {
 public:
  OperatorMatrix(GridPtr grid, Eigen::MatrixXcd entries, BoundaryCondition bc, Symbol symbol);

  const Eigen::MatrixXcd& entries() const { return entries_; }
  const GridSpec& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  BoundaryCondition bc() const { return bc_; }
  Symbol symbol() const { return symbol_; }
  Eigen::Index dim() const { return entries_.rows(); }

  WaveFunction apply(const WaveFunction& f) const;
  Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const { return entries_ * v; }

  /// max|A - A^H| / max|A|.
  double hermiticity_defect() const;

 private:
  GridPtr grid_;
  Eigen::MatrixXcd entries_;
  BoundaryCondition bc_;
  Symbol symbol_;
};

/// diag(E_i).
OperatorMatrix hamiltonian(GridPtr grid);

enum class TimeDomain { dirichlet_origin, free };

/**
 * i*hbar d/dE by second-order central differences. At the first node the
 * dirichlet_origin closure uses the ghost value f(0) = 0 (symbol T); the free
 * closure is the one-sided second-order stencil (symbol Tdag). The last row is
 * always one-sided: the truncation at e_max is not a boundary of the problem.
 */
OperatorMatrix time_candidate(GridPtr grid, TimeDomain domain);

/// -hbar^2 d^2/dE^2 with zero ghost values at 0 and e_max.
OperatorMatrix tsq_friedrichs(GridPtr grid);

/// -hbar^2 d^2/dE^2 without a condition at the origin (one-sided first row).
OperatorMatrix tsq_adjoint(GridPtr grid);

struct SymmetryDefect {
  complex lhs;            // <g|Tf> - <Tg|f>
  complex boundary_term;  // i hbar f(0) conj(g(0))
  double mismatch;        // |lhs - boundary_term| / (|boundary_term| + 1)
};

SymmetryDefect symmetry_defect(const OperatorMatrix& op, const WaveFunction& f, const WaveFunction& g);

/// ||(A - mu) f|| / (|mu| ||f||).
double relative_eigen_residual(const OperatorMatrix& a, const WaveFunction& f, complex mu);

enum class DeficiencyOperator { T, Tsq };
enum class Sign { plus, minus };

std::string to_string(DeficiencyOperator op);
std::string to_string(Sign s);

inline constexpr double kDeficiencyTolerance = 1e-3;

struct DeficiencyReport {
  DeficiencyOperator op;
  Sign sign;
  AnalyticFunction candidate;
  bool l2_member;
  double growth_ratio;  // ||f||^2 on doubled extent / ||f||^2
  double residual;      // relative residual of (A^dagger -+ i) f
  int index_contribution;
};

/// Candidate solution of A^dagger f = +-i f and its L2/residual classification.
DeficiencyReport deficiency_report(GridPtr grid, DeficiencyOperator which, Sign sign);

struct DefectIndices {
  int plus = 0;
  int minus = 0;
};

DefectIndices defect_indices(GridPtr grid, DeficiencyOperator which);

/**
 * For Im z > 0, g(E) = exp(-i conj(z) E / hbar) is an L2 eigenfunction of
 * T-dagger with eigenvalue conj(z), which places z in the residual spectrum of
 * T. Returns ||(Tdag - conj z) g|| / ||g||.
 */
double residual_spectrum_witness(complex z, GridPtr grid);

}  // namespace timeop
