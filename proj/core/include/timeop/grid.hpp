#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace timeop {

using complex = std::complex<double>;

/**
 * Uniform discretization of the truncated half-line (0, e_max).
 *
 * Interior nodes E_i = i*h, i = 1..n, with h = e_max/(n+1). The endpoints are
 * not nodes; Dirichlet data lives there. Every node carries quadrature weight h.
 */
class GridSpec {
 public:
  GridSpec(double e_max, int n, double hbar);

  double e_max() const { return e_max_; }
  int n() const { return n_; }
  double hbar() const { return hbar_; }
  double h() const { return h_; }
  const Eigen::VectorXd& nodes() const { return nodes_; }
  const Eigen::VectorXd& weights() const { return weights_; }

  bool same_as(const GridSpec& other) const;

 private:
  double e_max_;
  int n_;
  double hbar_;
  double h_;
  Eigen::VectorXd nodes_;
  Eigen::VectorXd weights_;
};

using GridPtr = std::shared_ptr<const GridSpec>;

inline constexpr int kMinNodes = 16;

/// Throws ParameterError unless e_max > 0, n >= 16 and hbar > 0.
GridPtr make_grid(double e_max, int n, double hbar);

/// Grid with the same spacing and twice the truncation length.
GridPtr doubled_extent(const GridSpec& grid);

/// Grid on the same interval with half the spacing (2n+1 nodes).
GridPtr refined(const GridSpec& grid);

/// Throws GridMismatch when the grids differ.
void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what);

enum class FunctionKind { power_exp, gaussian, exponential, sine_kernel };

/**
 * Closed-form test functions on the half-line:
 *   power_exp    E^k exp(-a E)
 *   gaussian     exp(-(E - mu)^2 / (2 sigma^2))
 *   exponential  exp(-a E), a may be complex (deficiency candidates)
 *   sine_kernel  sqrt(2/(pi hbar)) sin(E t / hbar)
 */
class AnalyticFunction {
 public:
  static AnalyticFunction power_exp(int k, double a);
  static AnalyticFunction gaussian(double mu, double sigma);
  static AnalyticFunction exponential(complex a);
  static AnalyticFunction sine_kernel(double t);

  /// Lookup by name ("power_exp", "gaussian", "exp", "sine"); throws ParameterError.
  static AnalyticFunction from_name(const std::string& name, const std::vector<double>& params);

  FunctionKind kind() const { return kind_; }
  const std::string& name() const;
  std::vector<double> params() const;
  std::string label() const;

  complex value(double e, double hbar) const;
  complex value_at_origin(double hbar) const { return value(0.0, hbar); }

 private:
  AnalyticFunction(FunctionKind kind, complex p0, double p1) : kind_(kind), p0_(p0), p1_(p1) {}

  FunctionKind kind_;
  complex p0_;
  double p1_;
};

/**
 * Samples of an L2 function on a grid. boundary_value_origin holds f(0):
 * exact for sampled analytic functions, extrapolated otherwise.
 */
class WaveFunction {
 public:
  WaveFunction(GridPtr grid, Eigen::VectorXcd values, complex origin_value, bool origin_exact,
               std::optional<AnalyticFunction> source = std::nullopt);

  /// Values with f(0) extrapolated quadratically from the first three nodes.
  static WaveFunction from_values(GridPtr grid, Eigen::VectorXcd values);

  const GridSpec& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  const Eigen::VectorXcd& values() const { return values_; }
  complex boundary_value_origin() const { return origin_value_; }
  bool boundary_value_exact() const { return origin_exact_; }
  const std::optional<AnalyticFunction>& source() const { return source_; }

  double norm() const;

  /// Discrete stand-in for f(0) = 0: |f(0)| <= 1e-5 * max|f|.
  bool vanishes_at_origin() const;

 private:
  GridPtr grid_;
  Eigen::VectorXcd values_;
  complex origin_value_;
  bool origin_exact_;
  std::optional<AnalyticFunction> source_;
};

WaveFunction sample(const AnalyticFunction& fn, GridPtr grid);

/// sum_i w_i conj(g_i) f_i (antilinear in the first argument).
complex inner(const WaveFunction& g, const WaveFunction& f);

double norm(const WaveFunction& f);

/// Quadrature norm of raw samples on a grid.
double grid_norm(const GridSpec& grid, const Eigen::VectorXcd& v);

}  // namespace timeop
