#pragma once

#include <optional>
#include <string>
#include <vector>

#include "timeop/operators.hpp"
#include "timeop/spectral.hpp"

namespace timeop {

enum class Verdict { canonical, non_canonical, closed, not_closed, inconclusive };

std::string to_string(Verdict v);

/// tol(h) = C h^2 for the canonical commutator.
inline constexpr double kCanonicalC = 2.0;
/// tol(h) = C h^2 for the closure relations of the Lie algebra {T_F^2, T, H, 1}.
inline constexpr double kClosureC = 4.0;
inline constexpr double kVariantGapFloor = 0.1;
inline constexpr double kVariantStability = 0.02;
inline constexpr double kSpanResidualFloor = 0.05;
/// Rows dropped at each end of closure residuals.
inline constexpr int kBoundaryRows = 2;

struct CommutatorReport {
  std::string first;
  std::string second;
  std::string test_function;
  double relative_residual;
  std::string expected;
  Verdict verdict;
  double C;
  double tolerance;
};

/// AB - BA. Throws GridMismatch across grids.
OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b);

/// [A, B] v by four matrix-vector products.
Eigen::VectorXcd commutator_action(const OperatorMatrix& a, const OperatorMatrix& b, const Eigen::VectorXcd& v);

/// ||([T,H] - i hbar) f|| / ||f||. Rejects f(0) != 0.
CommutatorReport canonical_residual(const WaveFunction& f, const OperatorSet& ops);
CommutatorReport canonical_residual(const WaveFunction& f);

/**
 * ||([T_sqrt,H] - i hbar) f|| / ||f||. non_canonical needs the residual above
 * 0.1 and within 2% of the same quantity on the companion grid; without a
 * companion the verdict is inconclusive. f must come from an analytic
 * function so it can be resampled.
 */
CommutatorReport variant_commutator_gap(const WaveFunction& f, const OperatorSet& ops,
                                        const OperatorSet* companion = nullptr);

/// Relative Jacobi residual scaled by prod sqrt(||X||_1 ||X||_inf).
double jacobi_residual(const OperatorMatrix& a, const OperatorMatrix& b, const OperatorMatrix& c,
                       const WaveFunction& f);

struct Generator {
  std::string name;
  OperatorMatrix op;
};

/// H, T, T^dag, T_F^2, T_sqrt, I = [T_sqrt, H] and the identity.
std::vector<Generator> jacobi_generators(const OperatorSet& ops);

struct JacobiSweep {
  double max_residual;
  std::string worst_triple;
  int triples;
};

/// Every multiset of three generators.
JacobiSweep jacobi_sweep(const OperatorSet& ops, const WaveFunction& f);

struct LieClosureReport {
  double tsq_h;          // ||([T_F^2,H] - 2 i hbar T) f|| / ||f||
  double tsq_t;          // ||[T_F^2,T] f|| / ||f||
  double t_h;            // ||([T,H] - i hbar) f|| / ||f||
  double span_i_h;       // least-squares residual of [I,H] f on span{T_sqrt f, H f, I f, f}
  double span_i_tsqrt;   // same for [I,T_sqrt] f
  double tolerance;      // kClosureC h^2
  Verdict closed_prime;  // {T_F^2, T, H, 1}
  Verdict enveloping;    // {T_sqrt, H, I, 1}: not_closed when both span residuals exceed the floor
};

LieClosureReport lie_closure_check(const WaveFunction& f, const OperatorSet& ops);

}  // namespace timeop
