#include <doctest.h>

#include "oracles.hpp"
#include "timeop/errors.hpp"
#include "timeop/spectral.hpp"

using namespace timeop;
using namespace std::complex_literals;

TEST_SUITE("spectral") {
  TEST_CASE("Friedrichs eigenvalues match the closed form to 1e-10 relative") {
    for (int n : {499, 1999}) {
      const auto g = make_grid(50.0, n, 1.0);
      const auto dec = eigensystem(tsq_friedrichs(g));
      CHECK(dec.eigenvalues[0] > 0.0);
      double worst = 0.0;
      for (int k = 1; k <= n; ++k) {
        const double ref = oracle::friedrichs_eigenvalue(50.0, n, 1.0, k);
        worst = std::max(worst, std::abs(dec.eigenvalues[k - 1] - ref) / ref);
      }
      CHECK(worst <= 1e-10);
    }
    CHECK(eigensystem(tsq_friedrichs(make_grid(50.0, 999, 1.0))).eigenvalues[0] ==
          doctest::Approx(0.0039478).epsilon(1e-4));
  }

  TEST_CASE("eigenvectors are quadrature-orthonormal and phase-fixed") {
    const auto g = make_grid(20.0, 199, 1.0);
    const auto dec = eigensystem(tsq_friedrichs(g));
    const Eigen::MatrixXcd gram = g->h() * dec.eigenvectors.adjoint() * dec.eigenvectors;
    CHECK((gram - Eigen::MatrixXcd::Identity(199, 199)).cwiseAbs().maxCoeff() < 1e-12);
    for (int k = 0; k < 199; ++k) CHECK(dec.eigenvectors(0, k).real() > 0.0);
  }

  TEST_CASE("non-Hermitian input is rejected with its defect") {
    const auto g = make_grid(20.0, 99, 1.0);
    CHECK_THROWS_AS(eigensystem(tsq_adjoint(g)), DomainError);
    CHECK_THROWS_WITH_AS(eigensystem(time_candidate(g, TimeDomain::free)), doctest::Contains("defect"), DomainError);
  }

  TEST_CASE("diagonal and complex Hermitian paths") {
    const auto g = make_grid(20.0, 99, 1.0);
    const auto dec = eigensystem(hamiltonian(g));
    CHECK((dec.eigenvalues - g->nodes()).cwiseAbs().maxCoeff() == 0.0);

    Eigen::MatrixXcd a = Eigen::MatrixXcd::Random(99, 99);
    a = (a + a.adjoint()).eval();
    const OperatorMatrix herm(g, a, BoundaryCondition::none, Symbol::derived);
    const auto d = eigensystem(herm);
    const Eigen::MatrixXcd rebuilt =
        g->h() * d.eigenvectors * d.eigenvalues.cast<complex>().asDiagonal() * d.eigenvectors.adjoint();
    CHECK((rebuilt - a).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((eigenvalues(herm) - d.eigenvalues).cwiseAbs().maxCoeff() < 1e-10);
  }

  TEST_CASE("square root squares back and has the standing-wave spectrum") {
    const auto g = make_grid(50.0, 999, 1.0);
    const auto tsq = tsq_friedrichs(g);
    const auto root = operator_sqrt(eigensystem(tsq));
    CHECK(root.symbol() == Symbol::Tsqrt);
    CHECK(root.hermiticity_defect() < 1e-14);
    const Eigen::MatrixXd sq = root.entries().real() * root.entries().real();
    CHECK((sq - tsq.entries().real()).norm() / tsq.entries().norm() <= 1e-8);
    const Eigen::VectorXd mu = eigenvalues(root);
    CHECK(mu[0] >= 0.0);
    for (int k = 1; k <= 5; ++k) CHECK(mu[k - 1] == doctest::Approx(k * oracle::pi / 50.0).epsilon(1e-4));
  }

  TEST_CASE("square root rejects negative spectra") {
    const auto g = make_grid(20.0, 99, 1.0);
    const OperatorMatrix neg(g, -tsq_friedrichs(g).entries(), BoundaryCondition::dirichlet_both, Symbol::derived);
    CHECK_THROWS_AS(operator_sqrt(eigensystem(neg)), DomainError);
  }

  TEST_CASE("time kernel domain") {
    const auto g = make_grid(50.0, 999, 1.0);
    CHECK_THROWS_AS(time_kernel(*g, -0.1), ParameterError);
    CHECK_THROWS_AS(time_kernel(*g, 2.0 / g->h()), ParameterError);
    CHECK_THROWS_AS(sine_kernel(g, -1.0), ParameterError);
    // The kernel tends to the continuum sine for t h << hbar.
    const Eigen::VectorXd k = time_kernel(*g, 0.5);
    const auto s = sine_kernel(g, 0.5);
    CHECK((k - s.values().real()).cwiseAbs().maxCoeff() < 1e-3);
  }

  TEST_CASE("default transform is unitary and diagonalizes T_F^2 and T_sqrt") {
    const auto g = make_grid(50.0, 499, 1.0);
    const auto ops = OperatorSet::build(g);
    const auto u = sine_transform(g);
    CHECK(u.is_default());
    const Eigen::MatrixXcd uu = u.adjoint().entries() * u.entries();
    CHECK((uu - Eigen::MatrixXcd::Identity(499, 499)).cwiseAbs().maxCoeff() < 1e-10);
    const auto res = time_rep_action_checks(u, ops);
    CHECK(res.tsq_diagonal < 1e-10);
    CHECK(res.tsqrt_diagonal < 1e-10);
    CHECK(res.h_derivative_gap > 0.1);
    for (int k = 1; k <= 5; ++k) CHECK(u.t_nodes()[k - 1] == doctest::Approx(k * oracle::pi / 50.0).epsilon(1e-4));
  }

  TEST_CASE("H^2 acts as a second t-derivative, second order") {
    std::vector<double> hs, rs;
    for (int n : {499, 999}) {
      const auto g = make_grid(50.0, n, 1.0);
      hs.push_back(g->h());
      rs.push_back(time_rep_action_checks(sine_transform(g)).hsq_second_difference);
    }
    CHECK(rs.back() <= 0.05);
    CHECK(oracle::slope(hs, rs) > 1.7);
  }

  TEST_CASE("custom time nodes") {
    const auto g = make_grid(50.0, 999, 1.0);
    const double nodes[] = {1.0};
    const auto u = sine_transform(g, nodes);
    CHECK_FALSE(u.is_default());
    const auto v = to_time_rep(sample(AnalyticFunction::exponential(1.0), g), u);
    CHECK(v.values[0].real() == doctest::Approx(oracle::sine_transform_exp(1.0, 1.0)).epsilon(1e-3));
    CHECK_THROWS_AS(time_rep_action_checks(u), ParameterError);
    const double bad[] = {1.0, 0.5};
    CHECK_THROWS_AS(sine_transform(g, bad), ParameterError);
  }

  TEST_CASE("energy-time roundtrip") {
    const auto g = make_grid(50.0, 499, 1.0);
    const auto u = sine_transform(g);
    const auto f = sample(AnalyticFunction::gaussian(5, 1), g);
    const auto back = to_energy_rep(to_time_rep(f, u), u);
    CHECK(grid_norm(*g, back.values() - f.values()) / f.norm() < 1e-12);
  }

  TEST_CASE("time distribution") {
    const auto g = make_grid(50.0, 499, 1.0);
    const auto u = sine_transform(g);
    const auto p = time_distribution(sample(AnalyticFunction::power_exp(1, 1), g), u);
    double total = 0.0;
    for (double x : p) {
      CHECK(x >= 0.0);
      total += x;
    }
    CHECK(total == doctest::Approx(1.0));
    const WaveFunction zero(g, Eigen::VectorXcd::Zero(499), 0.0, true);
    CHECK_THROWS_AS(time_distribution(zero, u), ParameterError);
  }

  TEST_CASE("smeared delta error halves when e_max doubles") {
    double prev = 0.0;
    for (double e_max : {25.0, 50.0, 100.0}) {
      const auto g = make_grid(e_max, static_cast<int>(e_max / 0.05) - 1, 1.0);
      const double err = smeared_delta_error(*g, 3.0, 1.0);
      if (prev > 0.0) CHECK(err <= 0.5 * prev);
      prev = err;
    }
    CHECK_THROWS_AS(smeared_delta_error(*make_grid(50, 999, 1), 0.5, 1.0), ParameterError);
  }
}
