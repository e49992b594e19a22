#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ptone/eigensolver.hpp"
#include "ptone/errors.hpp"
#include "ptone/rayleigh.hpp"

using namespace ptone;
using doctest::Approx;

namespace {
constexpr double kPi = std::numbers::pi;
double lam(double p, int m, double c, double r) {
  return solve_ball_eigenvalue(RadialProblem::space_form_ball(p, m, c, r)).lambda;
}
}  // namespace

TEST_CASE("integrate_profile locates the first zero of sin(pi t)/(pi t)") {
  const auto pr = RadialProblem::space_form_ball(2.0, 3, 0.0, 1.0);
  const auto tr = integrate_profile(pr, kPi * kPi);
  REQUIRE(tr.first_zero.has_value());
  CHECK(*tr.first_zero == Approx(1.0).epsilon(1e-6));
  const auto none = integrate_profile(pr, 1.0);
  CHECK_FALSE(none.first_zero.has_value());
  CHECK(none.omega.back() > 0.0);
}

TEST_CASE("first zero decreases with lambda") {
  const auto pr = RadialProblem::space_form_ball(3.0, 2, 0.0, 1.0);
  const double l1 = solve_eigenvalue(pr).lambda;
  double prev = 1e9;
  for (double f : {1.1, 1.5, 2.0, 3.0}) {
    const auto tr = integrate_profile(pr, f * l1);
    REQUIRE(tr.first_zero.has_value());
    CHECK(*tr.first_zero < prev);
    prev = *tr.first_zero;
  }
}

TEST_CASE("closed-form ball eigenvalues") {
  CHECK(lam(2.0, 3, 0.0, 1.0) == Approx(kPi * kPi).epsilon(1e-8));
  CHECK(lam(2.0, 2, 0.0, 1.0) == Approx(5.7831859629467849).epsilon(1e-8));
  CHECK(lam(3.0, 1, 0.0, 1.0) == Approx(interval_eigenvalue(3.0, 1.0)).epsilon(1e-8));
  CHECK(interval_eigenvalue(3.0, 1.0) == Approx(3.5361).epsilon(1e-4));
}

TEST_CASE("annulus eigenvalues") {
  auto string = RadialProblem::annulus(2.0, 1, WarpingProfile::space_form(0.0), 0.0, 1.0);
  const double l1 = solve_annulus_eigenvalue(string).lambda;
  CHECK(l1 == Approx(kPi * kPi).epsilon(1e-7));
  auto wide = RadialProblem::annulus(2.0, 1, WarpingProfile::space_form(0.0), 0.0, 2.0);
  CHECK(solve_annulus_eigenvalue(wide).lambda == Approx(l1 / 4.0).epsilon(1e-7));

  const auto ring = RadialProblem::annulus(2.0, 2, WarpingProfile::space_form(0.0), 1.0, 2.0);
  const double shoot = solve_annulus_eigenvalue(ring).lambda;
  const double est = minimize_rayleigh(Grid1D::for_problem(ring, 4000), 2.0).lambda_est;
  CHECK(std::abs(shoot - est) / shoot < 1e-4);
}

TEST_CASE("eigenfunction sign structure on a ball") {
  const auto sol = solve_ball_eigenvalue(RadialProblem::space_form_ball(3.0, 2, -1.0, 1.2));
  for (std::size_t i = 1; i + 1 < sol.grid.size(); ++i) {
    CHECK(sol.omega[i] > 0.0);
    CHECK(sol.omega_prime[i] < 1e-10);
  }
  CHECK(sol.omega.front() == 1.0);
  CHECK(sol.omega.back() == 0.0);
}

TEST_CASE("domain monotonicity") {
  for (double p : {1.5, 2.0, 3.0}) CHECK(lam(p, 2, 1.0, 0.9) > lam(p, 2, 1.0, 1.1));
}

TEST_CASE("scaling law") {
  CHECK(scaled_eigenvalue(5.7831860, 2.0, 2.0) == Approx(1.4457965).epsilon(1e-7));
  CHECK(scaled_eigenvalue(3.3, 1.0, 4.0) == 3.3);
  const double unit = lam(3.0, 1, 0.0, 1.0);
  CHECK(scaled_eigenvalue(unit, 0.5, 3.0) == Approx(lam(3.0, 1, 0.0, 0.5)).epsilon(1e-7));
  CHECK_THROWS_AS(scaled_eigenvalue(1.0, 2.0, 2.0, WarpingProfile::space_form(1.0)), InvalidInput);
}

TEST_CASE("residual detects perturbations") {
  const auto pr = RadialProblem::space_form_ball(2.0, 3, 0.0, 1.0);
  auto sol = solve_ball_eigenvalue(pr);
  CHECK(eigen_equation_residual(sol, pr) <= 1e-6);

  auto bumped = sol;
  for (std::size_t i = 0; i < bumped.grid.size(); ++i) {
    const double t = bumped.grid[i];
    bumped.omega[i] += 0.01 * t * (1.0 - t);
    bumped.omega_prime[i] += 0.01 * (1.0 - 2.0 * t);
  }
  CHECK(eigen_equation_residual(bumped, pr) > 1e-3);

  auto doubled = sol;
  doubled.lambda *= 2.0;
  CHECK(eigen_equation_residual(doubled, pr) == Approx(0.5).epsilon(1e-3));
}

TEST_CASE("exponent guardrails") {
  CHECK_THROWS_AS(solve_ball_eigenvalue(RadialProblem::space_form_ball(0.5, 2, 0.0, 1.0)), InvalidInput);
  CHECK_THROWS_AS(solve_ball_eigenvalue(RadialProblem::space_form_ball(17.0, 2, 0.0, 1.0)), InvalidInput);
  CHECK_THROWS(solve_ball_eigenvalue(RadialProblem::space_form_ball(2.0, 2, 1.0, 4.0)));
}

TEST_CASE("dense evaluation matches the closed form") {
  const auto sol = solve_ball_eigenvalue(RadialProblem::space_form_ball(2.0, 3, 0.0, 1.0));
  for (double t : {0.05, 0.3, 0.77, 0.99}) {
    CHECK(sol.at(t).omega == Approx(std::sin(kPi * t) / (kPi * t)).epsilon(1e-7));
  }
}

TEST_CASE("json export") {
  const auto sol = solve_ball_eigenvalue(RadialProblem::space_form_ball(2.0, 2, 0.0, 1.0));
  const auto j = to_json(sol);
  CHECK(j.at("lambda").get<double>() == sol.lambda);
  CHECK(j.at("omega").size() == sol.grid.size());
}
