#pragma once

// Reference values computed independently of the library: closed forms,
// element-by-element stencils and frozen numbers from high-precision runs.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cplx = std::complex<double>;
inline constexpr double pi = std::numbers::pi;

inline double spacing(double e_max, int n) { return e_max / (n + 1); }

/// Dirichlet second-difference eigenvalues, sin^2 form (no 1 - cos cancellation).
inline double friedrichs_eigenvalue(double e_max, int n, double hbar, int k) {
  const double h = spacing(e_max, n);
  const double s = std::sin(k * pi / (2.0 * (n + 1)));
  return 4.0 * hbar * hbar / (h * h) * s * s;
}

/// int_0^inf E^k exp(-a E) exp(i E t / hbar) dE / sqrt(2 pi hbar) = k! / (sqrt(2 pi hbar) (a - i t/hbar)^(k+1)).
inline cplx hft_power_exp(int k, double a, cplx t, double hbar) {
  double fact = 1.0;
  for (int j = 2; j <= k; ++j) fact *= j;
  return fact / (std::sqrt(2.0 * pi * hbar) * std::pow(a - cplx(0, 1) * t / hbar, k + 1));
}

/// int_0^inf sqrt(2/(pi hbar)) sin(E t / hbar) exp(-E) dE.
inline double sine_transform_exp(double t, double hbar) {
  const double x = t / hbar;
  return std::sqrt(2.0 / (pi * hbar)) * x / (1.0 + x * x);
}

/// Dense i hbar d/dE, entry by entry. dirichlet: ghost f(0) = 0 in row 0; else one-sided.
inline Eigen::MatrixXcd first_derivative(double e_max, int n, double hbar, bool dirichlet) {
  const double h = spacing(e_max, n);
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 1; i + 1 < n; ++i) {
    d(i, i - 1) = -0.5 / h;
    d(i, i + 1) = 0.5 / h;
  }
  if (dirichlet) {
    d(0, 1) = 0.5 / h;
  } else {
    d(0, 0) = -1.5 / h;
    d(0, 1) = 2.0 / h;
    d(0, 2) = -0.5 / h;
  }
  d(n - 1, n - 3) = 0.5 / h;
  d(n - 1, n - 2) = -2.0 / h;
  d(n - 1, n - 1) = 1.5 / h;
  return cplx(0, hbar) * d;
}

/// Predicted t-identity defect of a central-difference T under the transform:
/// T maps to (hbar/h) sin(h t / hbar) instead of t.
inline cplx dispersed_time(cplx t, double h, double hbar) { return hbar / h * std::sin(h * t / hbar); }

inline double slope(const std::vector<double>& h, const std::vector<double>& r) {
  const double m = static_cast<double>(h.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double x = std::log(h[i]), y = std::log(r[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

// Frozen measurements (e_max = 50, hbar = 1).
inline constexpr double variant_gap_E_exp_n999 = 1.17390;    // ||([T_sqrt,H] - i)f||/||f||, f = E e^-E
inline constexpr double variant_gap_E2_exp_n999 = 1.2155;    // f = E^2 e^-E
inline constexpr double variant_gap_gauss_n999 = 1.3437;     // f = gaussian(5, 1)
inline constexpr double boundary_lhs_imag_n999 = -0.951;     // Im(<g|T^dag f> - <T^dag g|f>), f = g = e^-E
inline constexpr double h_derivative_gap_n999 = 2.3782;

}  // namespace oracle
