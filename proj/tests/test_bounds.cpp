#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ptone/bounds.hpp"
#include "ptone/eigensolver.hpp"
#include "ptone/errors.hpp"
#include "ptone/rayleigh.hpp"

using namespace ptone;
using doctest::Approx;

namespace {
constexpr double kPi = std::numbers::pi;

DiscreteField eigen_samples(const RadialSolution& sol, const std::vector<double>& nodes) {
  DiscreteField u(nodes.size());
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) u[i] = sol.at(nodes[i]).omega;
  u.back() = 0.0;
  return u;
}

DiscreteField parabola(const std::vector<double>& t, double r) {
  DiscreteField u(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) u[i] = 1.0 - t[i] * t[i] / (r * r);
  return u;
}
}  // namespace

TEST_CASE("discrete p-Laplacian of 1 - t^2 in the plane") {
  const auto pr = RadialProblem::space_form_ball(2.0, 2, 0.0, 1.0);
  const auto t = uniform_nodes(0.0, 1.0, 1001);
  const auto lap = discrete_plap_radial(t, parabola(t, 1.0), pr);
  for (std::size_t i = 0; i + 1 < t.size(); ++i) CHECK(lap[i] == Approx(-4.0).epsilon(1e-3));
  CHECK(std::isnan(lap.back()));
  const auto flat = discrete_plap_radial(t, DiscreteField(t.size(), 1.0), pr);
  for (std::size_t i = 0; i + 1 < t.size(); ++i) CHECK(flat[i] == 0.0);
}

TEST_CASE("discrete p-Laplacian of an eigenfunction") {
  const auto pr = RadialProblem::space_form_ball(3.0, 2, -1.0, 1.0);
  const auto sol = solve_eigenvalue(pr);
  const auto t = uniform_nodes(0.0, 1.0, 2001);
  const auto u = eigen_samples(sol, t);
  const auto lap = discrete_plap_radial(t, u, pr);
  const auto [lo, hi] = evaluation_range(t, pr);
  for (std::size_t i = lo; i <= hi; ++i) {
    CHECK(std::abs(lap[i] + sol.lambda * std::pow(u[i], 2.0)) <= 1e-5 * sol.lambda);
  }
}

TEST_CASE("Barta certificates") {
  const auto pr = RadialProblem::space_form_ball(2.0, 2, 0.0, 1.0);
  const auto t = uniform_nodes(0.0, 1.0, 2001);
  const auto trial = barta_bound({t, parabola(t, 1.0), pr});
  CHECK(trial.value == Approx(4.0).epsilon(1e-3));
  CHECK(trial.value >= 4.0);
  CHECK(trial.value <= 5.7831860);

  const auto sol = solve_eigenvalue(pr);
  const auto u = eigen_samples(sol, t);
  const auto sharp = barta_bound({t, u, pr});
  CHECK(sharp.value == Approx(sol.lambda).epsilon(1e-4));
  auto twice = u;
  for (double& x : twice) x *= 2.0;
  CHECK(barta_bound({t, twice, pr}).value == Approx(sharp.value).epsilon(1e-13));

  const auto j = to_json(sharp);
  CHECK(j.at("kind") == "Barta");
  CHECK(j.at("evaluation_range").size() == 2);
}

TEST_CASE("Barta rejects nonpositive test functions") {
  const auto pr = RadialProblem::space_form_ball(2.0, 2, 0.0, 1.0);
  const auto t = uniform_nodes(0.0, 1.0, 101);
  auto eta = parabola(t, 1.0);
  eta[50] = -0.1;
  CHECK_THROWS_AS(barta_bound({t, eta, pr}), InvalidInput);
}

TEST_CASE("certificates stay below the eigenvalue") {
  for (double p : {1.5, 2.0, 2.5, 3.0, 4.0}) {
    for (int m : {1, 2, 3, 5}) {
      for (double c : {-1.0, 0.0, 1.0}) {
        for (double r : {0.5, 1.0, 1.4}) {
          const auto pr = RadialProblem::space_form_ball(p, m, c, r);
          const auto sol = solve_eigenvalue(pr);
          const auto t = uniform_nodes(0.0, r, 1001);
          const double cap = sol.lambda * (1 + 1e-4);
          CHECK(barta_bound({t, parabola(t, r), pr}).value <= cap);
          const auto X = eigen_field(sol);
          CHECK(div_field_bound(X, pr).value <= cap);
          CHECK(div_sup_bound(X, pr).value <= cap);
        }
      }
    }
  }
}

TEST_CASE("Picone defect") {
  const std::vector<double> v{0.5, 1.0, 2.0};
  const std::vector<double> dv{-1.0, 0.3, 2.0};
  for (double p : {1.5, 2.0, 3.0, 4.0}) {
    for (double beta : {1.0, 3.0}) {
      std::vector<double> u(v.size()), du(v.size());
      for (std::size_t i = 0; i < v.size(); ++i) {
        u[i] = beta * v[i];
        du[i] = beta * dv[i];
      }
      for (double d : picone_defect(u, du, v, dv, p)) CHECK(std::abs(d) <= 1e-13 * std::pow(beta * 2.0, p));
    }
  }
  std::mt19937_64 rng(0x5EED);
  std::uniform_real_distribution<double> pos(0.01, 2.0), sgn(-2.0, 2.0);
  for (int k = 0; k < 1000; ++k) {
    const double u = pos(rng), du = sgn(rng), vv = pos(rng), dvv = sgn(rng);
    const double d = picone_defect({u}, {du}, {vv}, {dvv}, 3.0)[0];
    const double scale = std::max(std::pow(std::abs(du), 3.0), std::pow(u / vv, 3.0) * std::pow(std::abs(dvv), 3.0));
    CHECK(d >= -1e-12 * scale);
  }
  CHECK_THROWS_AS(picone_defect({1.0}, {0.0}, {0.0}, {1.0}, 2.0), InvalidInput);
}

TEST_CASE("divergence-field certificates") {
  const auto pr = RadialProblem::space_form_ball(2.0, 3, 0.0, 1.0);
  const auto sol = solve_eigenvalue(pr);
  const auto X = eigen_field(sol);
  CHECK(div_field_bound(X, pr).value == Approx(kPi * kPi).epsilon(1e-4));
  CHECK(std::abs(X.values[1]) < 1e-2);

  const auto zero = RadialField::on_interior(sol.grid, std::vector<double>(sol.grid.size(), 0.0));
  CHECK(div_field_bound(zero, pr).value == 0.0);

  // Unit radial field in flat 3-space: div = 2/t, so (inf div / (p sup|X|))^p = 1.
  const auto t = uniform_nodes(0.0, 1.0, 2001);
  const auto unit = RadialField::on_interior(t, std::vector<double>(t.size(), 1.0));
  const auto ds = div_sup_bound(unit, pr);
  CHECK(ds.value == Approx(1.0).epsilon(1e-2));
  CHECK(ds.value >= 1.0);
  auto scaled = unit;
  for (double& x : scaled.values) x *= 5.0;
  CHECK(div_sup_bound(scaled, pr).value == Approx(ds.value).epsilon(1e-12));
}

TEST_CASE("eigen field closed form for p = 2, m = 3") {
  const auto sol = solve_eigenvalue(RadialProblem::space_form_ball(2.0, 3, 0.0, 1.0));
  const auto X = eigen_field(sol);
  const std::size_t stride = std::max<std::size_t>(1, (X.last - X.first) / 10);
  for (std::size_t i = X.first + stride; i <= X.last; i += stride) {
    const double t = X.grid[i];
    const double w = std::sin(kPi * t) / (kPi * t);
    const double dw = (std::cos(kPi * t) * kPi * t - std::sin(kPi * t)) / (kPi * t * t);
    CHECK(X.values[i] == Approx(-dw / w).epsilon(1e-6));
  }
}

TEST_CASE("mean-curvature bound fixtures") {
  const auto a = theorem17_bound(3, 2.0, 0.0, 1.0, 0.0);
  CHECK(a.admissible);
  CHECK(a.bracket == Approx(1.0));
  CHECK(a.value == Approx(0.25).epsilon(1e-14));
  CHECK_FALSE(theorem17_bound(2, 3.0, 0.0, 1.0, 0.2).admissible);
  CHECK(theorem17_bound(2, 3.0, 0.0, 1.0, 0.2).value == 0.0);
  const auto b = theorem17_bound(3, 3.0, -1.0, 1.0, 0.5);
  const double br = 1.0 / std::tanh(1.0) - 0.5;
  CHECK(b.bracket == Approx(br).epsilon(1e-14));
  CHECK(b.value == Approx(br * br * br / 27.0).epsilon(1e-12));
  CHECK(to_certificate(b, 3, 3.0, -1.0, 1.0).kind == CertificateKind::Theorem17);
}

TEST_CASE("stability criteria and functional") {
  CHECK(stability_criterion_immersion(0.0, 0.7, 3.0, 1.0));
  CHECK(stability_criterion_immersion(4.2, 0.1, 2.0, 4.2));
  CHECK_FALSE(stability_criterion_immersion(6.0, 0.5, 3.0, 10.0));
  CHECK_THROWS_AS(stability_criterion_immersion(1.0, 0.0, 3.0, 1.0), InvalidInput);
  CHECK_THROWS_AS(stability_criterion_immersion(1.0, 0.5, 1.5, 1.0), InvalidInput);

  CHECK(stability_criterion_meancurv(0.0, 2, 2.0, 1.0));
  CHECK(stability_criterion_meancurv(1.0, 3, 2.0, 1.0));
  CHECK_FALSE(stability_criterion_meancurv(0.6, 2, 4.0, 0.5));
  const auto th = meancurv_thresholds(3, 2.0, 1.0);
  CHECK(th.corollary == Approx(1.0));
  CHECK(th.bracket == Approx(0.5));

  const auto g = Grid1D::for_problem(RadialProblem::space_form_ball(2.0, 2, 0.0, 1.0), 1000);
  const auto res = minimize_rayleigh(g, 2.0);
  const double energy = p_energy(res.u_min, g, 2.0);
  CHECK(stability_functional(res.u_min, std::vector<double>(g.size(), 0.0), g, 2.0) == Approx(energy));
  CHECK(std::abs(stability_functional(res.u_min, std::vector<double>(g.size(), res.lambda_est), g, 2.0)) <=
        1e-3 * energy);
  CHECK(stability_functional(res.u_min, std::vector<double>(g.size(), res.lambda_est + 1.0), g, 2.0) < 0.0);
  CHECK_THROWS_AS(stability_functional(res.u_min, std::vector<double>(g.size(), -1.0), g, 2.0), InvalidInput);
}

TEST_CASE("radius lower bound") {
  CHECK(radius_lower_bound(1.0, 2.0, 5.7832, 5.7832) == Approx(1.0));
  CHECK(radius_lower_bound(1.0, 2.0, 5.7832, 1.4458) == Approx(2.0));
  CHECK(radius_lower_bound(0.8, 3.0, 7.0, 7.0) == Approx(std::cbrt(0.8)));
}

TEST_CASE("Kazdan-Kramer transform and source") {
  const auto t = uniform_nodes(0.0, 1.0, 101);
  DiscreteField ones(t.size(), 1.0), expo(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) expo[i] = std::exp(-t[i]);
  for (double v : kazdan_transform(ones).v) CHECK(v == 0.0);
  const auto e = kazdan_transform(expo);
  for (std::size_t i = 0; i < t.size(); ++i) CHECK(e.v[i] == Approx(t[i]).epsilon(1e-14));
  DiscreteField bad = ones;
  bad[40] = 0.0;
  CHECK_THROWS_AS(kazdan_transform(bad), InvalidInput);

  const auto pr = RadialProblem::space_form_ball(2.0, 3, 0.0, 1.0);
  const auto zero = kazdan_source(kazdan_transform(ones), t, pr);
  for (double x : zero) {
    if (std::isfinite(x)) CHECK(x == 0.0);
  }

  const auto sol = solve_eigenvalue(pr);
  const auto nodes = uniform_nodes(0.0, 1.0, 2000);
  const auto v = kazdan_transform(eigen_samples(sol, nodes));
  CHECK(v.v[0] <= v.v[10]);
  const auto psi = kazdan_source(v, nodes, pr);
  const auto [lo, hi] = kazdan_evaluation_range(nodes, pr);
  for (std::size_t i = lo; i <= hi; ++i) CHECK(psi[i] == Approx(kPi * kPi).epsilon(1e-3));
}
