#include <doctest.h>

#include "oracles.hpp"
#include "timeop/errors.hpp"
#include "timeop/operators.hpp"

using namespace timeop;
using namespace std::complex_literals;

TEST_SUITE("operators") {
  TEST_CASE("stencils match the element-by-element reference") {
    const auto g = make_grid(10.0, 63, 1.3);
    CHECK((time_candidate(g, TimeDomain::dirichlet_origin).entries() - oracle::first_derivative(10.0, 63, 1.3, true))
              .cwiseAbs()
              .maxCoeff() < 1e-12);
    CHECK((time_candidate(g, TimeDomain::free).entries() - oracle::first_derivative(10.0, 63, 1.3, false))
              .cwiseAbs()
              .maxCoeff() < 1e-12);
    const auto h = hamiltonian(g);
    CHECK((h.entries().diagonal().real() - g->nodes()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(h.symbol() == Symbol::H);
  }

  TEST_CASE("Friedrichs matrix is the Dirichlet second difference") {
    const auto g = make_grid(10.0, 63, 1.0);
    const auto tsq = tsq_friedrichs(g);
    const double h = g->h();
    CHECK(tsq.entries()(5, 5).real() == doctest::Approx(2.0 / (h * h)));
    CHECK(tsq.entries()(5, 4).real() == doctest::Approx(-1.0 / (h * h)));
    CHECK(tsq.entries()(5, 7) == complex(0.0));
    CHECK(tsq.hermiticity_defect() == 0.0);
    CHECK(tsq_adjoint(g).hermiticity_defect() > 0.1);
  }

  TEST_CASE("second differences converge on smooth functions") {
    std::vector<double> hs, rs;
    for (int n : {199, 399, 799}) {
      const auto g = make_grid(20.0, n, 1.0);
      const auto f = sample(AnalyticFunction::power_exp(1, 1), g);
      Eigen::VectorXcd exact(n);
      for (int i = 0; i < n; ++i) {
        const double e = g->nodes()[i];
        exact[i] = -(e - 2.0) * std::exp(-e);  // -f''
      }
      hs.push_back(g->h());
      rs.push_back(grid_norm(*g, tsq_friedrichs(g).apply(f.values()) - exact) / grid_norm(*g, exact));
    }
    CHECK(oracle::slope(hs, rs) == doctest::Approx(2.0).epsilon(0.1));
  }

  TEST_CASE("H f has an exact zero at the origin") {
    const auto g = make_grid(10.0, 63, 1.0);
    const auto hf = hamiltonian(g).apply(sample(AnalyticFunction::exponential(1.0), g));
    CHECK(hf.boundary_value_exact());
    CHECK(hf.boundary_value_origin() == complex(0.0));
  }

  TEST_CASE("boundary term: the computed sign is opposite, first-order convergent") {
    // <g|T f> - <T g|f> = -i hbar f(0) g*(0) for the antilinear-first inner product.
    std::vector<double> hs, gaps;
    for (int n : {499, 999, 1999}) {
      const auto g = make_grid(50.0, n, 1.0);
      const auto f = sample(AnalyticFunction::exponential(1.0), g);
      const auto sd = symmetry_defect(time_candidate(g, TimeDomain::free), f, f);
      CHECK(sd.boundary_term == 1i);
      CHECK(std::abs(sd.lhs.real()) < 1e-12);
      CHECK(sd.lhs.imag() < -0.85);
      hs.push_back(g->h());
      gaps.push_back(std::abs(sd.lhs + sd.boundary_term));
      if (n == 999) CHECK(sd.lhs.imag() == doctest::Approx(oracle::boundary_lhs_imag_n999).epsilon(1e-3));
    }
    CHECK(oracle::slope(hs, gaps) == doctest::Approx(1.0).epsilon(0.1));
  }

  TEST_CASE("boundary term sign holds for hbar != 1 and complex data") {
    const auto g = make_grid(30.0, 1999, 0.7);
    const auto f = sample(AnalyticFunction::exponential(complex(1.0, 0.5)), g);
    const auto q = sample(AnalyticFunction::exponential(complex(2.0, -1.0)), g);
    const auto sd = symmetry_defect(time_candidate(g, TimeDomain::free), f, q);
    CHECK(std::abs(sd.lhs + sd.boundary_term) / std::abs(sd.boundary_term) < 0.05);
  }

  TEST_CASE("symmetry_defect preconditions") {
    const auto g = make_grid(10.0, 63, 1.0);
    const auto f = sample(AnalyticFunction::exponential(1.0), g);
    CHECK_THROWS(symmetry_defect(hamiltonian(g), f, f));
    const auto derived = WaveFunction::from_values(g, f.values());
    CHECK_THROWS(symmetry_defect(time_candidate(g, TimeDomain::free), derived, f));
  }

  TEST_CASE("deficiency classification on every default grid") {
    for (int n : {499, 999, 1999}) {
      const auto g = make_grid(50.0, n, 1.0);
      CHECK_FALSE(deficiency_report(g, DeficiencyOperator::T, Sign::plus).l2_member);
      CHECK(deficiency_report(g, DeficiencyOperator::T, Sign::minus).l2_member);
      CHECK(deficiency_report(g, DeficiencyOperator::Tsq, Sign::plus).l2_member);
      CHECK(deficiency_report(g, DeficiencyOperator::Tsq, Sign::minus).l2_member);
    }
    for (int n : {999, 1999}) {
      const auto g = make_grid(50.0, n, 1.0);
      const auto t = defect_indices(g, DeficiencyOperator::T);
      CHECK(t.plus == 0);
      CHECK(t.minus == 1);
      const auto t2 = defect_indices(g, DeficiencyOperator::Tsq);
      CHECK(t2.plus == 1);
      CHECK(t2.minus == 1);
    }
    // At h = 0.1 the candidate residual (2e-3) exceeds the 1e-3 tolerance, so it does not count.
    const auto coarse = deficiency_report(make_grid(50.0, 499, 1.0), DeficiencyOperator::T, Sign::minus);
    CHECK(coarse.residual > kDeficiencyTolerance);
    CHECK(coarse.index_contribution == 0);
  }

  TEST_CASE("deficiency candidate residuals are second order") {
    std::vector<double> hs, rs;
    for (int n : {499, 999, 1999}) {
      const auto g = make_grid(50.0, n, 1.0);
      const auto rep = deficiency_report(g, DeficiencyOperator::T, Sign::minus);
      CHECK(rep.l2_member);
      CHECK(rep.growth_ratio <= 1.0 + 1e-6);
      hs.push_back(g->h());
      rs.push_back(rep.residual);
    }
    CHECK(oracle::slope(hs, rs) == doctest::Approx(2.0).epsilon(0.15));
    const auto plus = deficiency_report(make_grid(50.0, 999, 1.0), DeficiencyOperator::T, Sign::plus);
    CHECK_FALSE(plus.l2_member);
    CHECK(plus.index_contribution == 0);
  }

  TEST_CASE("residual-spectrum witness") {
    const auto g = make_grid(50.0, 999, 1.0);
    CHECK_THROWS_AS(residual_spectrum_witness(1.0, g), ParameterError);
    CHECK_THROWS_AS(residual_spectrum_witness(complex(1.0, -1.0), g), ParameterError);
    for (complex z : {1i, 1.0 + 2i, 3i}) {
      const double coarse = residual_spectrum_witness(z, make_grid(50.0, 499, 1.0));
      const double fine = residual_spectrum_witness(z, g);
      const double finer = residual_spectrum_witness(z, make_grid(50.0, 1999, 1.0));
      CHECK(fine < coarse);
      CHECK(finer < fine);
      // Central differences leave about |z|^3 h^2 / 6 relative to ||g||.
      const double h = g->h();
      CHECK(fine == doctest::Approx(std::pow(std::abs(z), 3) * h * h / 6.0).epsilon(0.35));
    }
    CHECK(residual_spectrum_witness(1i, g) <= 1e-2);
    CHECK(residual_spectrum_witness(1.0 + 2i, g) <= 1e-2);
  }

  TEST_CASE("relative eigen-residual of an exact eigenvector") {
    const auto g = make_grid(10.0, 63, 1.0);
    Eigen::VectorXcd e0 = Eigen::VectorXcd::Zero(63);
    e0[4] = 1.0;
    const WaveFunction f(g, e0, 0.0, true);
    CHECK(relative_eigen_residual(hamiltonian(g), f, g->nodes()[4]) < 1e-15);
  }
}
