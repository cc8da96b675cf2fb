#include "timeop/hft.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "timeop/errors.hpp"

namespace timeop {

using namespace std::complex_literals;

HalfPlanePoint::HalfPlanePoint(complex t) : t_(t) {
  if (!(t.imag() >= 0.0)) {
    std::ostringstream os;
    os << "HalfPlanePoint: Im t = " << t.imag() << " < 0; the transform integral need not converge";
    throw ParameterError(os.str());
  }
}

namespace {

double prefactor(double hbar) { return 1.0 / std::sqrt(2.0 * std::numbers::pi * hbar); }

complex forward_unchecked(const WaveFunction& f, complex t) {
  const GridSpec& g = f.grid();
  const double h = g.h();
  const complex step = 1i * t / g.hbar();
  complex sum = 0.5 * h * f.boundary_value_origin();
  const auto& e = g.nodes();
  const auto& v = f.values();
  for (Eigen::Index i = 0; i < v.size(); ++i) sum += h * v[i] * std::exp(step * e[i]);
  return prefactor(g.hbar()) * sum;
}

}  // namespace

complex hft_forward(const WaveFunction& f, HalfPlanePoint t) { return forward_unchecked(f, t.value()); }

RealAxisGrid RealAxisGrid::nyquist(const GridSpec& grid) {
  const int half = grid.n() + 1;
  const double dt = std::numbers::pi * grid.hbar() / grid.e_max();
  return {-half * dt, dt, 2 * half, true};
}

RealAxisGrid RealAxisGrid::window(double half_width, int size) {
  if (!(half_width > 0.0) || size < 2) throw ParameterError("RealAxisGrid::window: needs half_width > 0, size >= 2");
  return {-half_width, 2.0 * half_width / (size - 1), size, false};
}

Eigen::VectorXcd hft_samples(const WaveFunction& f, const RealAxisGrid& axis) {
  Eigen::VectorXcd phi(axis.size);
  for (int j = 0; j < axis.size; ++j) phi[j] = forward_unchecked(f, complex(axis.node(j), 0.0));
  return phi;
}

namespace {

std::string decay_warning(const Eigen::VectorXcd& phi, const RealAxisGrid& axis) {
  if (axis.periodic) return {};
  const double edge = std::max(std::abs(phi[0]), std::abs(phi[phi.size() - 1]));
  if (edge < kDecayThreshold) return {};
  std::ostringstream os;
  os << "hft_inverse: |phi| = " << edge << " at the window ends (needs < " << kDecayThreshold << ")";
  return os.str();
}

void require_samples(const Eigen::VectorXcd& phi, const RealAxisGrid& axis) {
  if (phi.size() != axis.size) throw GridMismatch("hft_inverse: sample count differs from the real-axis grid");
}

complex inverse_sum(const Eigen::VectorXcd& phi, const RealAxisGrid& axis, double e, double hbar) {
  complex sum = 0.0;
  for (int j = 0; j < axis.size; ++j) sum += phi[j] * std::exp(-1i * e * axis.node(j) / hbar);
  return prefactor(hbar) * axis.dt * sum;
}

}  // namespace

InverseValue hft_inverse(const Eigen::VectorXcd& phi, const RealAxisGrid& axis, double e, double hbar) {
  require_samples(phi, axis);
  if (e < 0.0) throw ParameterError("hft_inverse: E must be >= 0");
  return {inverse_sum(phi, axis, e, hbar), decay_warning(phi, axis)};
}

InverseTransform hft_inverse(const Eigen::VectorXcd& phi, const RealAxisGrid& axis, GridPtr grid) {
  require_samples(phi, axis);
  Eigen::VectorXcd values(grid->n());
  for (int i = 0; i < grid->n(); ++i) values[i] = inverse_sum(phi, axis, grid->nodes()[i], grid->hbar());
  return {WaveFunction::from_values(grid, std::move(values)), decay_warning(phi, axis)};
}

double hft_roundtrip_error(const WaveFunction& f) {
  const auto axis = RealAxisGrid::nyquist(f.grid());
  const auto back = hft_inverse(hft_samples(f, axis), axis, f.grid_ptr());
  return grid_norm(f.grid(), back.f.values() - f.values()) / f.norm();
}

double derivative_step(complex t) { return 1e-3 * std::max(1.0, std::abs(t)); }

ConjugateRepResiduals conjugate_rep_check(const WaveFunction& f, HalfPlanePoint t) {
  if (!(t.im() > 0.0)) throw ParameterError("conjugate_rep_check: needs Im t > 0");
  if (!f.vanishes_at_origin()) {
    throw DomainError("conjugate_rep_check: f(0) != 0, so f is outside the domain of T");
  }
  const GridPtr& grid = f.grid_ptr();
  const double hbar = grid->hbar();
  const complex tv = t.value();
  const complex phi = forward_unchecked(f, tv);
  const double delta = derivative_step(tv);
  const complex dphi = (forward_unchecked(f, tv + delta) - forward_unchecked(f, tv - delta)) / (2.0 * delta);

  const complex phi_h = forward_unchecked(hamiltonian(grid).apply(f), tv);
  const complex phi_t = forward_unchecked(time_candidate(grid, TimeDomain::dirichlet_origin).apply(f), tv);
  const double scale = std::abs(phi) + 1.0;
  return {std::abs(phi_h + 1i * hbar * dphi) / scale, std::abs(phi_t - tv * phi) / scale};
}

double analyticity_check(const WaveFunction& f, HalfPlanePoint t, double delta) {
  if (!(delta > 0.0) || !(t.im() - delta > 0.0)) {
    throw ParameterError("analyticity_check: needs Im t > delta > 0");
  }
  const complex tv = t.value();
  const complex along_re = (forward_unchecked(f, tv + delta) - forward_unchecked(f, tv - delta)) / (2.0 * delta);
  const complex along_im =
      (forward_unchecked(f, tv + 1i * delta) - forward_unchecked(f, tv - 1i * delta)) / (2.0 * 1i * delta);
  return std::abs(along_re - along_im);
}

}  // namespace timeop
