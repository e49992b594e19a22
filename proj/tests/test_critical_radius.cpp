#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "ptone/critical_radius.hpp"
#include "ptone/errors.hpp"

using namespace ptone;
using doctest::Approx;

TEST_CASE("weights V_c") {
  // a = lambda/(p+m-2) = 2
  CHECK(weight_V(0.0, 1.0, 4.0, 2.0, 2) == Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(weight_V(1.0, 0.5, 4.0, 2.0, 2) == Approx(std::pow(std::cos(0.5), -2.0)).epsilon(1e-15));
  CHECK(weight_V(-1.0, 0.5, 4.0, 2.0, 2) == Approx(std::pow(std::cosh(0.5), -2.0)).epsilon(1e-15));
  for (double c : {-1.0, 0.0, 1.0}) {
    CHECK(weight_V(c, 0.0, 7.0, 3.0, 3) == 1.0);
    const double h = 1e-5;
    for (double t : {0.2, 0.7, 1.1}) {
      const auto d = weight_V_derivatives(c, t, 7.0, 3.0, 3);
      CHECK(d.v == Approx(weight_V(c, t, 7.0, 3.0, 3)).epsilon(1e-14));
      const double fd1 = (weight_V(c, t + h, 7.0, 3.0, 3) - weight_V(c, t - h, 7.0, 3.0, 3)) / (2 * h);
      const auto dp = weight_V_derivatives(c, t + h, 7.0, 3.0, 3);
      const auto dm = weight_V_derivatives(c, t - h, 7.0, 3.0, 3);
      CHECK(d.dv == Approx(fd1).epsilon(1e-7));
      CHECK(d.d2v == Approx((dp.dv - dm.dv) / (2 * h)).epsilon(1e-7));
    }
  }
  CHECK_THROWS_AS(weight_V(0.5, 0.1, 1.0, 2.0, 2), InvalidInput);
}

TEST_CASE("spherical constants") {
  const auto k = spherical_constants(6.0, 3.0, 2);
  CHECK(k.c1 == Approx(6.0 * 5.0 / 3.0));
  CHECK(k.c2 == Approx(6.0 * (1.0 / 3.0 + 6.0 / 9.0)));
  CHECK(k.c3 == Approx(2.0));
}

TEST_CASE("restriction W at the pole and near it") {
  for (double p : {2.0, 3.0, 4.0}) {
    const auto sol = solve_eigenvalue(RadialProblem::space_form_ball(p, 3, 0.0, 1.0));
    const double pole = restriction_W(0.0, sol, 0.0);
    CHECK(pole == Approx(sol.lambda * (2.0 - p) / 3.0).epsilon(1e-12));
    CHECK(restriction_W(1e-3, sol, 0.0) == Approx(pole).epsilon(1e-3).scale(sol.lambda));
    CHECK_THROWS_AS(restriction_W(1.5, sol, 0.0), DomainError);
  }
}

TEST_CASE("lhs derivative matches finite differences") {
  for (double c : {-1.0, 0.0, 1.0}) {
    const auto sol = solve_eigenvalue(RadialProblem::space_form_ball(3.0, 2, c, 1.0));
    const double h = 1e-5;
    for (double t : {0.25, 0.5, 0.75}) {
      const double fd = (lhs_expression(c, t + h, sol, sol.lambda) - lhs_expression(c, t - h, sol, sol.lambda)) /
                        (2 * h);
      CHECK(lhs_derivative(c, t, sol, sol.lambda) == Approx(fd).epsilon(1e-5).scale(1.0));
    }
  }
}

TEST_CASE("flat integral identity") {
  const auto sol = solve_eigenvalue(RadialProblem::space_form_ball(3.0, 2, 0.0, 1.0));
  const double lambda = sol.lambda;
  const std::size_t n = 20001;
  double acc = 0.0;
  double prev = flateq_rhs_integrand(0.0, sol, lambda);
  double worst = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double t0 = 0.9 * static_cast<double>(i - 1) / (n - 1);
    const double t1 = 0.9 * static_cast<double>(i) / (n - 1);
    const double cur = flateq_rhs_integrand(t1, sol, lambda);
    acc += 0.5 * (prev + cur) * (t1 - t0);
    prev = cur;
    worst = std::max(worst, std::abs(acc - lhs_expression(0.0, t1, sol, lambda)));
  }
  CHECK(worst <= 1e-6 * lambda);
}

TEST_CASE("r_star rules") {
  const auto sol2 = solve_eigenvalue(RadialProblem::space_form_ball(2.0, 2, 0.0, 1.0));
  const auto rep = compute_r_star(0.0, sol2);
  CHECK(rep.r_star == 1.0);
  CHECK(rep.max_W_scaled <= kWTol);
  const std::string header = csv_header_critical();
  CHECK(csv_row(rep).size() == static_cast<std::size_t>(std::count(header.begin(), header.end(), ',') + 1));
  CHECK(to_json(rep).at("r_star") == 1.0);

  const auto sol15 = solve_eigenvalue(RadialProblem::space_form_ball(1.5, 2, 0.0, 1.0));
  CHECK_THROWS_AS(compute_r_star(0.0, sol15), InvalidInput);
  CHECK_THROWS_AS(compute_r_star(-1.0, sol2), InvalidInput);
  const auto sol_s = solve_eigenvalue(RadialProblem::space_form_ball(3.0, 2, 1.0, 1.6));
  CHECK_THROWS_AS(compute_r_star(1.0, sol_s), DomainError);
  CHECK_THROWS_AS(compute_r_star(0.0, sol2, {8, 10}), InvalidInput);
}

TEST_CASE("W is nonpositive wherever r_star certifies it") {
  for (double c : {-1.0, 0.0, 1.0}) {
    for (double p : {2.5, 3.0, 4.0}) {
      const auto sol = solve_eigenvalue(RadialProblem::space_form_ball(p, 3, c, 1.0));
      try {
        const auto rep = compute_r_star(c, sol);
        CHECK(rep.r_star > 0.0);
        CHECK(rep.r_star <= 1.0);
        for (std::size_t i = 0; i < rep.sample_t.size(); ++i) {
          if (rep.sample_t[i] < rep.r_star) CHECK(rep.W_samples[i] <= kWTol * rep.lambda);
        }
      } catch (const VerificationError&) {
        // Refusal is the only other admissible outcome.
        CHECK(restriction_W(0.0, sol, c) < 0.0);
      }
    }
  }
}

TEST_CASE("spherical positivity check is consistent with its barrier") {
  const auto sol = solve_eigenvalue(RadialProblem::space_form_ball(3.0, 2, 1.0, 1.0));
  const auto chk = verify_spherical_positivity(sol, sol.lambda, 1.0);
  CHECK(chk.positive == (chk.margin > 0.0));
  for (double s : {0.1, 0.4, 0.8}) CHECK(phi1(s, sol, sol.lambda) >= phi1_barrier(s, sol, sol.lambda) - 1e-12);
}
