#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ptone/bounds.hpp"
#include "ptone/eigensolver.hpp"
#include "ptone/errors.hpp"
#include "ptone/kernels.hpp"
#include "ptone/rayleigh.hpp"

using namespace ptone;
using doctest::Approx;

namespace {
constexpr double kPi = std::numbers::pi;
Grid1D unit_string(std::size_t n) { return Grid1D::uniform(0.0, 1.0, n, [](double) { return 1.0; }); }
DiscreteField sample(const Grid1D& g, auto f) {
  DiscreteField u(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) u[i] = f(g.nodes[i]);
  return u;
}
}  // namespace

TEST_CASE("p_energy examples") {
  const auto g = unit_string(2000);
  CHECK(p_energy(DiscreteField(g.size(), 0.0), g, 2.0) == 0.0);
  const auto free_right = Grid1D::uniform(0.0, 1.0, 101, [](double) { return 1.0; }, true, false);
  CHECK(p_energy(sample(free_right, [](double t) { return t; }), free_right, 3.0) == Approx(1.0).epsilon(1e-12));
  CHECK(p_energy(sample(g, [](double t) { return std::sin(kPi * t); }), g, 2.0) == Approx(kPi * kPi / 2).epsilon(1e-5));
}

TEST_CASE("rayleigh quotient examples") {
  const auto g = unit_string(2000);
  const auto s = sample(g, [](double t) { return std::sin(kPi * t); });
  CHECK(rayleigh_quotient(s, g, 2.0) == Approx(kPi * kPi).epsilon(1e-4));
  auto s7 = s;
  for (double& x : s7) x *= 7.0;
  CHECK(rayleigh_quotient(s7, g, 2.0) == Approx(rayleigh_quotient(s, g, 2.0)).epsilon(1e-13));
  CHECK(rayleigh_quotient(sample(g, [](double t) { return t * (1 - t); }), g, 2.0) == Approx(10.0).epsilon(1e-4));
}

TEST_CASE("absolute value does not raise the quotient") {
  const auto g = unit_string(300);
  std::mt19937_64 rng(0x5EED);
  std::normal_distribution<double> nd;
  for (int k = 0; k < 20; ++k) {
    DiscreteField u(g.size());
    for (auto& x : u) x = nd(rng);
    u.front() = u.back() = 0.0;
    auto a = u;
    for (auto& x : a) x = std::abs(x);
    CHECK(rayleigh_quotient(a, g, 2.5) <= rayleigh_quotient(u, g, 2.5) * (1 + 1e-14));
  }
}

TEST_CASE("field checks") {
  const auto g = unit_string(11);
  CHECK_THROWS_AS(check_field(DiscreteField(10, 1.0), g), InvalidInput);
  CHECK_THROWS_AS(check_field(DiscreteField(11, 1.0), g), InvalidInput);
  CHECK_THROWS_AS(check_field(DiscreteField(11, 0.0), g), InvalidInput);
}

TEST_CASE("minimizer recovers known eigenvalues") {
  const auto ball = Grid1D::for_problem(RadialProblem::space_form_ball(2.0, 3, 0.0, 1.0), 2000);
  CHECK(minimize_rayleigh(ball, 2.0).lambda_est == Approx(kPi * kPi).epsilon(1e-3));
  CHECK(minimize_rayleigh(unit_string(2000), 2.0).lambda_est == Approx(kPi * kPi).epsilon(1e-3));
}

TEST_CASE("minimizer started at the eigenfunction stops quickly") {
  const auto g = unit_string(1000);
  auto init = sample(g, [](double t) { return std::sin(kPi * t); });
  init.back() = 0.0;
  const auto res = minimize_rayleigh(g, 2.0, init);
  CHECK(res.iterations <= 40);
  CHECK(res.lambda_est == Approx(rayleigh_quotient(init, g, 2.0)).epsilon(1e-6));
}

TEST_CASE("minimizer is an upper estimate above the Barta certificate") {
  for (double p : {1.5, 2.0, 3.0}) {
    const auto pr = RadialProblem::space_form_ball(p, 2, 0.0, 1.0);
    const auto g = Grid1D::for_problem(pr, 1000);
    const auto res = minimize_rayleigh(g, p);
    const auto cert = barta_bound({g.nodes, res.u_min, pr});
    // Lumped and consistent mass differ at the level of the stopping tolerance.
    CHECK(res.lambda_est >= cert.value * (1.0 - 1e-7));
  }
}

TEST_CASE("grid refinement converges toward the shooting value") {
  const auto pr = RadialProblem::space_form_ball(3.0, 2, 1.0, 1.0);
  const double shoot = solve_eigenvalue(pr).lambda;
  double prev = 1e9;
  for (std::size_t n : {250u, 500u, 1000u, 2000u}) {
    const double err = std::abs(minimize_rayleigh(Grid1D::for_problem(pr, n), 3.0).lambda_est - shoot);
    CHECK(err < prev);
    prev = err;
  }
}

TEST_CASE("serial and parallel paths are bit-identical") {
  const auto g = Grid1D::for_problem(RadialProblem::space_form_ball(2.5, 3, -1.0, 1.0), 3000);
  RayleighOptions par;
  par.parallel = true;
  const auto a = minimize_rayleigh(g, 2.5);
  const auto b = minimize_rayleigh(g, 2.5, par);
  CHECK(a.lambda_est == b.lambda_est);
  CHECK(a.iterations == b.iterations);
  CHECK(a.u_min == b.u_min);
}

TEST_CASE("kernel variants agree exactly") {
  const std::size_t n = 10001;
  std::vector<double> h(n - 1), w(n - 1), u(n), mass(n), cell(n);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> ud(0.1, 1.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = 1e-4 * ud(rng);
    w[i] = ud(rng);
  }
  for (std::size_t i = 0; i < n; ++i) {
    u[i] = ud(rng);
    mass[i] = ud(rng);
    cell[i] = ud(rng);
  }
  for (double p : {1.5, 2.0, 3.7}) {
    CHECK(kernels::p_energy_serial(h, w, u, p) == kernels::p_energy_parallel(h, w, u, p));
    CHECK(kernels::p_mass_serial(mass, u, p) == kernels::p_mass_parallel(mass, u, p));
    std::vector<double> g1(n), g2(n), d1(n), d2(n);
    kernels::p_energy_gradient_serial(h, w, u, p, g1);
    kernels::p_energy_gradient_parallel(h, w, u, p, g2);
    CHECK(g1 == g2);
    kernels::flux_divergence_serial(h, w, cell, u, p, d1);
    kernels::flux_divergence_parallel(h, w, cell, u, p, d2);
    for (std::size_t i = 1; i + 1 < n; ++i) REQUIRE(d1[i] == d2[i]);
  }
}
