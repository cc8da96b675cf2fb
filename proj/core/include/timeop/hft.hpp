#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "timeop/grid.hpp"
#include "timeop/operators.hpp"

namespace timeop {

/// A point of the closed upper half-plane. Throws ParameterError when Im t < 0.
class HalfPlanePoint {
 public:
  HalfPlanePoint(complex t);  // NOLINT(google-explicit-constructor)
  HalfPlanePoint(double re, double im) : HalfPlanePoint(complex(re, im)) {}

  complex value() const { return t_; }
  double im() const { return t_.imag(); }

 private:
  complex t_;
};

/**
 * phi(t) = (2 pi hbar)^(-1/2) int_0^e_max dE f(E) exp(i E t / hbar), trapezoid
 * on the grid plus the origin node (h/2) f(0); f(e_max) is taken as 0.
 */
complex hft_forward(const WaveFunction& f, HalfPlanePoint t);

/// Real-axis sampling grid t_j = t0 + j dt, j = 0..size-1.
struct RealAxisGrid {
  double t0;
  double dt;
  int size;
  bool periodic;  // one full period of exp(-i E t / hbar) over the energy grid

  double node(int j) const { return t0 + j * dt; }

  /// [-pi hbar/h, pi hbar/h) with dt = pi hbar / e_max. The discrete pair is exact on it.
  static RealAxisGrid nyquist(const GridSpec& grid);

  /// Symmetric window [-half_width, half_width] with the given number of points.
  static RealAxisGrid window(double half_width, int size);
};

Eigen::VectorXcd hft_samples(const WaveFunction& f, const RealAxisGrid& axis);

inline constexpr double kDecayThreshold = 1e-8;

struct InverseValue {
  complex value;
  std::string warning;  // empty unless the samples fail the decay rule at the window ends
};

/// f(E) = (2 pi hbar)^(-1/2) sum_j dt phi(t_j) exp(-i E t_j / hbar).
InverseValue hft_inverse(const Eigen::VectorXcd& phi, const RealAxisGrid& axis, double e, double hbar);

struct InverseTransform {
  WaveFunction f;
  std::string warning;
};

/// Inverse onto every node of an energy grid.
InverseTransform hft_inverse(const Eigen::VectorXcd& phi, const RealAxisGrid& axis, GridPtr grid);

/// ||f - hft_inverse(hft_samples(f))|| / ||f|| over the Nyquist window.
double hft_roundtrip_error(const WaveFunction& f);

struct ConjugateRepResiduals {
  double h_residual;  // |phi_{Hf}(t) + i hbar dphi/dt| / (|phi| + 1)
  double t_residual;  // |phi_{Tf}(t) - t phi(t)| / (|phi| + 1)
};

/// Step for the derivative checks: 1e-3 * max(1, |t|).
double derivative_step(complex t);

/// Requires Im t > 0 and f(0) = 0 (within the grid tolerance).
ConjugateRepResiduals conjugate_rep_check(const WaveFunction& f, HalfPlanePoint t);

/// Cauchy-Riemann residual of phi at t. Requires Im t > delta > 0.
double analyticity_check(const WaveFunction& f, HalfPlanePoint t, double delta);

}  // namespace timeop
