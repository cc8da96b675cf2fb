#include "timeop/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#define LAPACK_COMPLEX_CPP
#include <lapacke.h>

#include "timeop/errors.hpp"

namespace timeop {

using namespace std::complex_literals;

namespace {

bool is_real(const Eigen::MatrixXcd& a) { return a.imag().cwiseAbs().maxCoeff() == 0.0; }

bool has_bandwidth(const Eigen::MatrixXcd& a, Eigen::Index band) {
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      if (std::abs(i - j) > band && a(i, j) != 0.0) return false;
    }
  }
  return true;
}

void fix_phases(Eigen::MatrixXcd& v) {
  for (Eigen::Index k = 0; k < v.cols(); ++k) {
    auto col = v.col(k);
    const double cutoff = 1e-8 * col.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < col.size(); ++i) {
      if (std::abs(col[i]) > cutoff) {
        col *= std::conj(col[i]) / std::abs(col[i]);
        col[i] = std::abs(col[i]);
        break;
      }
    }
  }
}

// Relatively accurate eigenpairs of a real symmetric tridiagonal matrix (MRRR).
void tridiagonal_eigensystem(const Eigen::MatrixXcd& a, Eigen::VectorXd& values, Eigen::MatrixXcd& vectors) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  Eigen::VectorXd d = a.diagonal().real();
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
  for (lapack_int i = 0; i + 1 < n; ++i) e[i] = a(i + 1, i).real();
  values.resize(n);
  Eigen::MatrixXd z(n, n);
  std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(n));
  lapack_int found = 0;
  lapack_logical tryrac = 1;
  const lapack_int info = LAPACKE_dstemr(LAPACK_COL_MAJOR, 'V', 'A', n, d.data(), e.data(), 0.0, 0.0, 0, 0, &found,
                                         values.data(), z.data(), n, n, isuppz.data(), &tryrac);
  if (info != 0 || found != n) {
    throw DomainError("eigensystem: tridiagonal solver failed (info=" + std::to_string(info) + ")");
  }
  vectors = z.cast<complex>();
}

}  // namespace

SpectralDecomposition eigensystem(const OperatorMatrix& op) {
  const double defect = op.hermiticity_defect();
  if (defect > kHermiticityTolerance) {
    std::ostringstream os;
    os << "eigensystem: " << to_string(op.symbol()) << " is not Hermitian (defect " << defect << " > "
       << kHermiticityTolerance << ")";
    throw DomainError(os.str());
  }
  const auto& a = op.entries();
  const Eigen::Index n = a.rows();
  Eigen::VectorXd values(n);
  Eigen::MatrixXcd vectors;

  if (is_real(a) && has_bandwidth(a, 0)) {
    std::vector<Eigen::Index> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index i, Eigen::Index j) { return a(i, i).real() < a(j, j).real(); });
    vectors = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
      values[k] = a(order[k], order[k]).real();
      vectors(order[k], k) = 1.0;
    }
  } else if (is_real(a) && has_bandwidth(a, 1)) {
    tridiagonal_eigensystem(a, values, vectors);
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(a);
    if (solver.info() != Eigen::Success) throw DomainError("eigensystem: Hermitian eigensolver did not converge");
    values = solver.eigenvalues();
    vectors = solver.eigenvectors();
  }

  fix_phases(vectors);
  vectors /= std::sqrt(op.grid().h());
  return {op.grid_ptr(), std::move(values), std::move(vectors), op.symbol(), op.bc()};
}

Eigen::VectorXd eigenvalues(const OperatorMatrix& op) {
  const auto& a = op.entries();
  if (is_real(a) && !has_bandwidth(a, 1)) {
    const double defect = op.hermiticity_defect();
    if (defect > kHermiticityTolerance) {
      throw DomainError("eigenvalues: " + to_string(op.symbol()) + " is not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a.real(), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw DomainError("eigenvalues: eigensolver did not converge");
    return solver.eigenvalues();
  }
  return eigensystem(op).eigenvalues;
}

OperatorMatrix operator_sqrt(const SpectralDecomposition& dec) {
  const Eigen::Index n = dec.eigenvalues.size();
  const double clamp = 1e-10 * dec.eigenvalues.cwiseAbs().maxCoeff();
  Eigen::VectorXd roots(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double lambda = dec.eigenvalues[k];
    if (lambda < -clamp) {
      std::ostringstream os;
      os << "operator_sqrt: eigenvalue " << lambda << " below clamp threshold " << -clamp;
      throw DomainError(os.str());
    }
    roots[k] = std::sqrt(std::max(lambda, 0.0));
  }
  // Quadrature-orthonormal v_k: the spectral projector is h v_k v_k^H.
  const Eigen::VectorXd scaled = roots * dec.grid->h();
  Eigen::MatrixXcd m;
  if (is_real(dec.eigenvectors)) {
    const Eigen::MatrixXd v = dec.eigenvectors.real();
    Eigen::MatrixXd r = (v * scaled.asDiagonal()) * v.transpose();
    r = 0.5 * (r + r.transpose()).eval();
    m = r.cast<complex>();
  } else {
    const auto& v = dec.eigenvectors;
    m = (v * scaled.asDiagonal()) * v.adjoint();
    m = 0.5 * (m + m.adjoint()).eval();
  }
  const Symbol sym = dec.source == Symbol::TsqF ? Symbol::Tsqrt : Symbol::derived;
  return {dec.grid, std::move(m), dec.bc, sym};
}

OperatorSet OperatorSet::build(GridPtr grid) {
  OperatorMatrix tsq = tsq_friedrichs(grid);
  OperatorMatrix root = operator_sqrt(eigensystem(tsq));
  return {grid,
          hamiltonian(grid),
          time_candidate(grid, TimeDomain::dirichlet_origin),
          time_candidate(grid, TimeDomain::free),
          std::move(tsq),
          std::move(root)};
}

WaveFunction sine_kernel(GridPtr grid, double t) {
  if (t < 0.0) throw ParameterError("sine_kernel: t must be >= 0 (the spectrum of T_sqrt is [0, inf))");
  return sample(AnalyticFunction::sine_kernel(t), std::move(grid));
}

Eigen::VectorXd time_kernel(const GridSpec& grid, double t) {
  const double h = grid.h();
  const double hbar = grid.hbar();
  const double t_top = 2.0 * hbar / h;
  if (t < 0.0 || !(t < t_top)) {
    std::ostringstream os;
    os << "time_kernel: t = " << t << " outside [0, " << t_top << ") (spectrum of the discrete T_sqrt)";
    throw ParameterError(os.str());
  }
  const double kappa = (2.0 / h) * std::asin(h * t / (2.0 * hbar));
  const double rho = 1.0 / std::sqrt(std::cos(0.5 * kappa * h));
  const double c = std::sqrt(2.0 / (std::numbers::pi * hbar)) * rho;
  return (c * (grid.nodes().array() * kappa).sin()).matrix();
}

double TimeSamples::norm() const { return std::sqrt((weights.array() * values.array().abs2()).sum()); }

TransformMatrix::TransformMatrix(GridPtr grid, Eigen::MatrixXcd entries, Eigen::VectorXd t_nodes,
                                 Eigen::VectorXd t_weights, TransformDirection direction, bool is_default)
    : grid_(std::move(grid)),
      entries_(std::move(entries)),
      t_nodes_(std::move(t_nodes)),
      t_weights_(std::move(t_weights)),
      direction_(direction),
      is_default_(is_default) {}

TransformMatrix TransformMatrix::adjoint() const {
  const auto& w = grid_->weights();
  Eigen::MatrixXcd adj;
  if (direction_ == TransformDirection::to_time) {
    adj = w.cwiseInverse().asDiagonal() * entries_.adjoint() * t_weights_.asDiagonal();
  } else {
    adj = t_weights_.cwiseInverse().asDiagonal() * entries_.adjoint() * w.asDiagonal();
  }
  const auto dir =
      direction_ == TransformDirection::to_time ? TransformDirection::to_energy : TransformDirection::to_time;
  return {grid_, std::move(adj), t_nodes_, t_weights_, dir, is_default_};
}

Eigen::MatrixXcd TransformMatrix::conjugate(const OperatorMatrix& a) const {
  if (direction_ != TransformDirection::to_time) {
    throw ParameterError("TransformMatrix::conjugate: needs an energy-to-time transform");
  }
  require_same_grid(*grid_, a.grid(), "TransformMatrix::conjugate");
  const Eigen::MatrixXcd back = adjoint().entries();
  if (is_real(entries_) && is_real(a.entries())) {
    const Eigen::MatrixXd u = entries_.real();
    const Eigen::MatrixXd ub = back.real();
    const Eigen::MatrixXd ua = u * a.entries().real();
    return (ua * ub).cast<complex>();
  }
  return entries_ * (a.entries() * back);
}

TransformMatrix sine_transform(GridPtr grid) {
  const int n = grid->n();
  const double h = grid->h();
  const double hbar = grid->hbar();
  const double dkappa = std::numbers::pi / grid->e_max();
  const double norm = std::sqrt(2.0 / (std::numbers::pi * hbar));
  Eigen::VectorXd t(n);
  Eigen::VectorXd dt(n);
  Eigen::MatrixXcd u(n, n);
  for (int k = 0; k < n; ++k) {
    const double kappa = (k + 1) * dkappa;
    const double c = std::cos(0.5 * kappa * h);
    t[k] = (2.0 * hbar / h) * std::sin(0.5 * kappa * h);
    dt[k] = hbar * dkappa * c;
    const double scale = h * norm / std::sqrt(c);
    for (int i = 0; i < n; ++i) u(k, i) = scale * std::sin(grid->nodes()[i] * kappa);
  }
  return {std::move(grid), std::move(u), std::move(t), std::move(dt), TransformDirection::to_time, true};
}

TransformMatrix sine_transform(GridPtr grid, std::span<const double> t_nodes) {
  const auto m = static_cast<Eigen::Index>(t_nodes.size());
  if (m == 0) throw ParameterError("sine_transform: empty time grid");
  for (Eigen::Index j = 0; j < m; ++j) {
    if (t_nodes[j] < 0.0) throw ParameterError("sine_transform: negative time node");
    if (j > 0 && !(t_nodes[j] > t_nodes[j - 1])) throw ParameterError("sine_transform: time nodes must ascend");
  }
  Eigen::VectorXd t = Eigen::Map<const Eigen::VectorXd>(t_nodes.data(), m);
  Eigen::VectorXd dt(m);
  if (m == 1) {
    dt[0] = std::numbers::pi * grid->hbar() / grid->e_max();
  } else {
    Eigen::VectorXd bounds(m + 1);
    bounds[0] = 0.0;
    for (Eigen::Index j = 1; j < m; ++j) bounds[j] = 0.5 * (t[j - 1] + t[j]);
    bounds[m] = t[m - 1] + 0.5 * (t[m - 1] - t[m - 2]);
    for (Eigen::Index j = 0; j < m; ++j) dt[j] = bounds[j + 1] - bounds[j];
  }
  Eigen::MatrixXcd u(m, grid->n());
  for (Eigen::Index j = 0; j < m; ++j) u.row(j) = (grid->h() * time_kernel(*grid, t[j])).cast<complex>().transpose();
  return {std::move(grid), std::move(u), std::move(t), std::move(dt), TransformDirection::to_time, false};
}

TimeSamples to_time_rep(const WaveFunction& f, const TransformMatrix& u) {
  if (u.direction() != TransformDirection::to_time) throw ParameterError("to_time_rep: needs a to_time transform");
  require_same_grid(u.grid(), f.grid(), "to_time_rep");
  return {u.t_nodes(), u.t_weights(), u.entries() * f.values()};
}

WaveFunction to_energy_rep(const TimeSamples& g, const TransformMatrix& u) {
  if (u.direction() != TransformDirection::to_time) throw ParameterError("to_energy_rep: pass the to_time transform");
  if (g.values.size() != u.t_nodes().size()) throw GridMismatch("to_energy_rep: time grid mismatch");
  return WaveFunction::from_values(u.grid_ptr(), u.adjoint().entries() * g.values);
}

namespace {

// Three-point derivatives on a nonuniform grid with ghost node t = 0 where g vanishes.
// Only rows 0 .. m-2 are filled.
Eigen::VectorXcd first_difference(const Eigen::VectorXd& t, const Eigen::VectorXcd& g) {
  const Eigen::Index m = t.size();
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(m);
  for (Eigen::Index j = 0; j + 1 < m; ++j) {
    const double tl = j == 0 ? 0.0 : t[j - 1];
    const complex gl = j == 0 ? complex(0.0) : g[j - 1];
    const double a = t[j] - tl;
    const double b = t[j + 1] - t[j];
    out[j] = -b / (a * (a + b)) * gl + (b - a) / (a * b) * g[j] + a / (b * (a + b)) * g[j + 1];
  }
  return out;
}

Eigen::VectorXcd second_difference(const Eigen::VectorXd& t, const Eigen::VectorXcd& g) {
  const Eigen::Index m = t.size();
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(m);
  for (Eigen::Index j = 0; j + 1 < m; ++j) {
    const double tl = j == 0 ? 0.0 : t[j - 1];
    const complex gl = j == 0 ? complex(0.0) : g[j - 1];
    const double a = t[j] - tl;
    const double b = t[j + 1] - t[j];
    out[j] = 2.0 * (gl / (a * (a + b)) - g[j] / (a * b) + g[j + 1] / (b * (a + b)));
  }
  return out;
}

// The top rows sit where the t-nodes crowd against 2 hbar / h and are dropped.
double interior_norm(const Eigen::VectorXd& w, const Eigen::VectorXcd& v) {
  const Eigen::Index m = v.size() - 2;
  return std::sqrt((w.head(m).array() * v.head(m).array().abs2()).sum());
}

double diagonal_mismatch(Eigen::MatrixXcd conj, const Eigen::VectorXd& target) {
  conj.diagonal() -= target.cast<complex>();
  return conj.norm() / target.norm();
}

}  // namespace

TimeRepResiduals time_rep_action_checks(const TransformMatrix& u, const OperatorSet& ops) {
  if (!u.is_default() || u.direction() != TransformDirection::to_time) {
    throw ParameterError("time_rep_action_checks: requires the default energy-to-time transform");
  }
  require_same_grid(u.grid(), *ops.grid, "time_rep_action_checks");
  const auto& t = u.t_nodes();
  const auto& w = u.t_weights();
  const double hbar = u.grid().hbar();

  TimeRepResiduals out{};
  out.tsq_diagonal = diagonal_mismatch(u.conjugate(ops.TsqF), t.array().square().matrix());
  out.tsqrt_diagonal = diagonal_mismatch(u.conjugate(ops.Tsqrt), t);

  const WaveFunction f = sample(AnalyticFunction::power_exp(1, 1.0), ops.grid);
  const Eigen::VectorXcd g = u.entries() * f.values();
  const Eigen::VectorXcd back = u.adjoint().entries() * g;
  const Eigen::ArrayXd e = u.grid().nodes().array();
  const Eigen::VectorXcd hg = u.entries() * (e * back.array()).matrix();
  const Eigen::VectorXcd hsq_g = u.entries() * (e.square() * back.array()).matrix();

  const Eigen::VectorXcd lap = -hbar * hbar * second_difference(t, g);
  out.hsq_second_difference = interior_norm(w, hsq_g - lap) / interior_norm(w, hsq_g);
  const Eigen::VectorXcd deriv = 1i * hbar * first_difference(t, g);
  out.h_derivative_gap = interior_norm(w, hg - deriv) / std::sqrt((w.array() * g.array().abs2()).sum());
  return out;
}

TimeRepResiduals time_rep_action_checks(const TransformMatrix& u) {
  return time_rep_action_checks(u, OperatorSet::build(u.grid_ptr()));
}

std::vector<double> time_distribution(const WaveFunction& psi, const TransformMatrix& u) {
  if (!(psi.norm() > 0.0)) throw ParameterError("time_distribution: zero wave function");
  const TimeSamples g = to_time_rep(psi, u);
  std::vector<double> p(static_cast<std::size_t>(g.values.size()));
  double total = 0.0;
  for (Eigen::Index j = 0; j < g.values.size(); ++j) {
    p[j] = std::norm(g.values[j]) * g.weights[j];
    total += p[j];
  }
  for (double& x : p) x /= total;
  return p;
}

double smeared_delta_error(const GridSpec& grid, double center, double half_width) {
  if (!(half_width > 0.0) || center - half_width < 0.0) {
    throw ParameterError("smeared_delta_error: probe support must lie in [0, inf)");
  }
  auto bump = [&](double t) {
    const double x = (t - center) / half_width;
    return std::abs(x) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - x * x)) : 0.0;
  };
  constexpr int kQuadrature = 4001;
  constexpr int kProbes = 41;
  const double lo = center - half_width;
  const double dt = 2.0 * half_width / (kQuadrature - 1);

  // G_i = int dt' <E_i|t'> g(t'); trapezoid is spectrally accurate for the bump.
  Eigen::VectorXd coeff = Eigen::VectorXd::Zero(grid.n());
  for (int q = 1; q + 1 < kQuadrature; ++q) {
    const double tq = lo + q * dt;
    coeff += (dt * bump(tq)) * time_kernel(grid, tq);
  }
  double worst = 0.0;
  for (int p = 0; p < kProbes; ++p) {
    const double tp = lo + 2.0 * half_width * p / (kProbes - 1);
    const double smeared = grid.h() * time_kernel(grid, tp).dot(coeff);
    worst = std::max(worst, std::abs(smeared - bump(tp)));
  }
  return worst;
}

}  // namespace timeop
