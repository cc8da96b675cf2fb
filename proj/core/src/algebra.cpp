#include "timeop/algebra.hpp"

#include <cmath>

#include "timeop/errors.hpp"

namespace timeop {

using namespace std::complex_literals;

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::canonical: return "canonical";
    case Verdict::non_canonical: return "non_canonical";
    case Verdict::closed: return "closed";
    case Verdict::not_closed: return "not_closed";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b) {
  require_same_grid(a.grid(), b.grid(), "commutator");
  const auto& x = a.entries();
  const auto& y = b.entries();
  Eigen::MatrixXcd c;
  if (b.symbol() == Symbol::H) {
    const Eigen::VectorXd& e = b.grid().nodes();
    c = x * e.asDiagonal();
    c -= e.asDiagonal() * x;
  } else if (a.symbol() == Symbol::H) {
    const Eigen::VectorXd& e = a.grid().nodes();
    c = e.asDiagonal() * y;
    c -= y * e.asDiagonal();
  } else {
    c = x * y;
    c -= y * x;
  }
  return {a.grid_ptr(), std::move(c), BoundaryCondition::none, Symbol::derived};
}

Eigen::VectorXcd commutator_action(const OperatorMatrix& a, const OperatorMatrix& b, const Eigen::VectorXcd& v) {
  require_same_grid(a.grid(), b.grid(), "commutator_action");
  return a.apply(b.apply(v)) - b.apply(a.apply(v));
}

namespace {

double interior_norm(const GridSpec& grid, const Eigen::VectorXcd& v) {
  const Eigen::Index m = v.size() - 2 * kBoundaryRows;
  return grid_norm(grid, v.segment(kBoundaryRows, m));
}

void require_domain(const WaveFunction& f, const char* what) {
  if (!f.vanishes_at_origin()) {
    throw DomainError(std::string(what) + ": f(0) != 0, so f is outside the domain of T");
  }
}

std::string function_label(const WaveFunction& f) { return f.source() ? f.source()->label() : "samples"; }

double canonical_gap(const OperatorMatrix& t_like, const OperatorSet& ops, const WaveFunction& f) {
  const Eigen::VectorXcd r = commutator_action(t_like, ops.H, f.values()) - 1i * ops.grid->hbar() * f.values();
  return grid_norm(*ops.grid, r) / f.norm();
}

}  // namespace

CommutatorReport canonical_residual(const WaveFunction& f, const OperatorSet& ops) {
  require_domain(f, "canonical_residual");
  require_same_grid(f.grid(), *ops.grid, "canonical_residual");
  const double h = ops.grid->h();
  const double tol = kCanonicalC * h * h;
  const double r = canonical_gap(ops.T, ops, f);
  return {"T", "H", function_label(f), r, "i hbar 1", r <= tol ? Verdict::canonical : Verdict::non_canonical,
          kCanonicalC, tol};
}

CommutatorReport canonical_residual(const WaveFunction& f) {
  const GridPtr& g = f.grid_ptr();
  const OperatorMatrix dummy = hamiltonian(g);
  OperatorSet ops{g, hamiltonian(g), time_candidate(g, TimeDomain::dirichlet_origin), dummy, dummy, dummy};
  return canonical_residual(f, ops);
}

CommutatorReport variant_commutator_gap(const WaveFunction& f, const OperatorSet& ops, const OperatorSet* companion) {
  require_domain(f, "variant_commutator_gap");
  require_same_grid(f.grid(), *ops.grid, "variant_commutator_gap");
  const double r = canonical_gap(ops.Tsqrt, ops, f);
  const double h = ops.grid->h();
  Verdict verdict = Verdict::inconclusive;
  if (r < kVariantGapFloor) {
    verdict = Verdict::canonical;
  } else if (companion != nullptr) {
    if (!f.source()) throw ParameterError("variant_commutator_gap: resampling needs an analytic test function");
    const WaveFunction fc = sample(*f.source(), companion->grid);
    const double rc = canonical_gap(companion->Tsqrt, *companion, fc);
    verdict = std::abs(r - rc) <= kVariantStability * r ? Verdict::non_canonical : Verdict::inconclusive;
  }
  return {"T_sqrt", "H", function_label(f), r, "i hbar 1", verdict, kCanonicalC, kCanonicalC * h * h};
}

namespace {

double matrix_scale(const OperatorMatrix& a) {
  const auto abs = a.entries().cwiseAbs();
  return std::sqrt(abs.colwise().sum().maxCoeff() * abs.rowwise().sum().maxCoeff());
}

}  // namespace

double jacobi_residual(const OperatorMatrix& a, const OperatorMatrix& b, const OperatorMatrix& c,
                       const WaveFunction& f) {
  require_same_grid(a.grid(), b.grid(), "jacobi_residual");
  require_same_grid(a.grid(), c.grid(), "jacobi_residual");
  require_same_grid(a.grid(), f.grid(), "jacobi_residual");
  const double fnorm = f.norm();
  if (!(fnorm > 0.0)) throw ParameterError("jacobi_residual: zero test function");
  const auto& v = f.values();
  // [[X,Y],Z] v = [X,Y](Z v) - Z([X,Y] v)
  auto nested = [&](const OperatorMatrix& x, const OperatorMatrix& y, const OperatorMatrix& z) {
    return Eigen::VectorXcd(commutator_action(x, y, z.apply(v)) - z.apply(commutator_action(x, y, v)));
  };
  const Eigen::VectorXcd sum = nested(a, b, c) + nested(b, c, a) + nested(c, a, b);
  double scale = matrix_scale(a) * matrix_scale(b) * matrix_scale(c);
  if (!(scale > 0.0)) scale = 1.0;
  return grid_norm(f.grid(), sum) / (fnorm * scale);
}

std::vector<Generator> jacobi_generators(const OperatorSet& ops) {
  const GridPtr& g = ops.grid;
  const auto n = static_cast<Eigen::Index>(g->n());
  return {{"H", ops.H},
          {"T", ops.T},
          {"T_dag", ops.Tdag},
          {"T_F^2", ops.TsqF},
          {"T_sqrt", ops.Tsqrt},
          {"I", commutator(ops.Tsqrt, ops.H)},
          {"1", OperatorMatrix(g, Eigen::MatrixXcd::Identity(n, n), BoundaryCondition::none, Symbol::derived)}};
}

JacobiSweep jacobi_sweep(const OperatorSet& ops, const WaveFunction& f) {
  const auto gens = jacobi_generators(ops);
  JacobiSweep out{0.0, "", 0};
  const std::size_t m = gens.size();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i; j < m; ++j) {
      for (std::size_t k = j; k < m; ++k) {
        const double r = jacobi_residual(gens[i].op, gens[j].op, gens[k].op, f);
        ++out.triples;
        if (r >= out.max_residual) {
          out.max_residual = r;
          out.worst_triple = "(" + gens[i].name + ", " + gens[j].name + ", " + gens[k].name + ")";
        }
      }
    }
  }
  return out;
}

namespace {

double span_residual(const Eigen::VectorXcd& target, const Eigen::MatrixXcd& basis) {
  const Eigen::VectorXcd coeff = basis.colPivHouseholderQr().solve(target);
  return (target - basis * coeff).norm() / target.norm();
}

}  // namespace

LieClosureReport lie_closure_check(const WaveFunction& f, const OperatorSet& ops) {
  require_domain(f, "lie_closure_check");
  require_same_grid(f.grid(), *ops.grid, "lie_closure_check");
  const GridSpec& g = *ops.grid;
  const double hbar = g.hbar();
  const double h = g.h();
  const auto& v = f.values();
  const double fnorm = interior_norm(g, v);

  LieClosureReport out{};
  out.tolerance = kClosureC * h * h;
  out.tsq_h = interior_norm(g, commutator_action(ops.TsqF, ops.H, v) - 2.0i * hbar * ops.T.apply(v)) / fnorm;
  out.tsq_t = interior_norm(g, commutator_action(ops.TsqF, ops.T, v)) / fnorm;
  out.t_h = interior_norm(g, commutator_action(ops.T, ops.H, v) - 1i * hbar * v) / fnorm;
  out.closed_prime = std::max({out.tsq_h, out.tsq_t, out.t_h}) <= out.tolerance ? Verdict::closed : Verdict::not_closed;

  const OperatorMatrix i_op = commutator(ops.Tsqrt, ops.H);
  Eigen::MatrixXcd basis(v.size(), 4);
  basis.col(0) = ops.Tsqrt.apply(v);
  basis.col(1) = ops.H.apply(v);
  basis.col(2) = i_op.apply(v);
  basis.col(3) = v;
  out.span_i_h = span_residual(commutator_action(i_op, ops.H, v), basis);
  out.span_i_tsqrt = span_residual(commutator_action(i_op, ops.Tsqrt, v), basis);
  out.enveloping = std::min(out.span_i_h, out.span_i_tsqrt) >= kSpanResidualFloor ? Verdict::not_closed
                                                                                    : Verdict::closed;
  return out;
}

}  // namespace timeop
