#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "timeop/operators.hpp"

namespace timeop {

/**
 * Eigenpairs of a Hermitian OperatorMatrix. Eigenvalues ascend; eigenvectors
 * are orthonormal under the grid quadrature and phase-fixed so that their
 * first non-negligible component is real and positive.
 */
struct SpectralDecomposition {
  GridPtr grid;
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXcd eigenvectors;
  Symbol source;
  BoundaryCondition bc;
};

inline constexpr double kHermiticityTolerance = 1e-12;

/// Throws DomainError (with the Hermiticity defect) on non-Hermitian input.
SpectralDecomposition eigensystem(const OperatorMatrix& op);

/// Ascending eigenvalues only; same Hermiticity check as eigensystem.
Eigen::VectorXd eigenvalues(const OperatorMatrix& op);

/// Positive square root by functional calculus; eigenvalues below -1e-10*max|lambda| are rejected.
OperatorMatrix operator_sqrt(const SpectralDecomposition& dec);

/// The operators every suite needs on one grid, T_sqrt included.
struct OperatorSet {
  GridPtr grid;
  OperatorMatrix H;
  OperatorMatrix T;
  OperatorMatrix Tdag;
  OperatorMatrix TsqF;
  OperatorMatrix Tsqrt;

  static OperatorSet build(GridPtr grid);
};

/// Samples of sqrt(2/(pi hbar)) sin(E t / hbar).
WaveFunction sine_kernel(GridPtr grid, double t);

/**
 * Discrete time eigenfunction <E_i|t>: the interior eigenfunction of the
 * Friedrichs matrix with eigenvalue t^2,
 *   sqrt(2/(pi hbar)) rho(t) sin(E_i kappa(t)),
 *   kappa(t) = (2/h) asin(h t / (2 hbar)),  rho(t) = cos(kappa h / 2)^(-1/2),
 * normalized against dt. Requires 0 <= t < 2 hbar / h.
 */
Eigen::VectorXd time_kernel(const GridSpec& grid, double t);

enum class TransformDirection { to_time, to_energy };

/// Samples over a time grid together with their quadrature weights.
struct TimeSamples {
  Eigen::VectorXd t;
  Eigen::VectorXd weights;
  Eigen::VectorXcd values;

  double norm() const;
};

class TransformMatrix {
 public:
  TransformMatrix(GridPtr grid, Eigen::MatrixXcd entries, Eigen::VectorXd t_nodes, Eigen::VectorXd t_weights,
                  TransformDirection direction, bool is_default);

  const Eigen::MatrixXcd& entries() const { return entries_; }
  const Eigen::VectorXd& t_nodes() const { return t_nodes_; }
  const Eigen::VectorXd& t_weights() const { return t_weights_; }
  TransformDirection direction() const { return direction_; }
  bool is_default() const { return is_default_; }
  const GridSpec& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }

  /// Adjoint with respect to the energy and time quadratures.
  TransformMatrix adjoint() const;

  /// U A U^dagger for an energy-space operator A (to_time transforms only).
  Eigen::MatrixXcd conjugate(const OperatorMatrix& a) const;

 private:
  GridPtr grid_;
  Eigen::MatrixXcd entries_;
  Eigen::VectorXd t_nodes_;
  Eigen::VectorXd t_weights_;
  TransformDirection direction_;
  bool is_default_;
};

/**
 * Default energy-to-time transform. Node k carries the k-th eigenvalue of the
 * discrete T_sqrt, t_k = (2 hbar/h) sin(k pi h / (2 e_max)) -> k pi hbar / e_max,
 * with weight (pi hbar / e_max) cos(k pi h / (2 e_max)). Rows are the
 * Friedrichs eigenvectors, so the matrix is unitary on the truncated space.
 */
TransformMatrix sine_transform(GridPtr grid);

/// Transform onto arbitrary ascending, nonnegative time nodes (midpoint weights).
TransformMatrix sine_transform(GridPtr grid, std::span<const double> t_nodes);

TimeSamples to_time_rep(const WaveFunction& f, const TransformMatrix& u);
WaveFunction to_energy_rep(const TimeSamples& g, const TransformMatrix& u);

struct TimeRepResiduals {
  double tsq_diagonal;           // ||U T_F^2 U^dag - diag(t^2)|| / ||diag(t^2)||
  double hsq_second_difference;  // ||(U H^2 U^dag + hbar^2 D_tt) g|| / ||U H^2 U^dag g|| on interior rows
  double tsqrt_diagonal;         // ||U T_sqrt U^dag - diag(t)|| / ||diag(t)||
  double h_derivative_gap;       // ||(U H U^dag - i hbar D_t) g|| / ||g||, must stay large
};

/// g = U(E exp(-E)) is the probe for the two strong residuals. Rejects non-default transforms.
TimeRepResiduals time_rep_action_checks(const TransformMatrix& u, const OperatorSet& ops);
TimeRepResiduals time_rep_action_checks(const TransformMatrix& u);

/// p_j = |(U psi)(t_j)|^2 dt_j, normalized to sum 1.
std::vector<double> time_distribution(const WaveFunction& psi, const TransformMatrix& u);

/**
 * Smeared completeness of the time kernels: for a C-infinity bump g supported
 * on [center - half_width, center + half_width],
 *   max_t | int dt' sum_i w_i <t|E_i><E_i|t'> g(t') - g(t) |.
 */
double smeared_delta_error(const GridSpec& grid, double center, double half_width);

}  // namespace timeop
