#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "ptone/errors.hpp"
#include "ptone/modelspace.hpp"

using namespace ptone;
using doctest::Approx;

TEST_CASE("s_c branches") {
  CHECK(s_c(0.0, 0.7) == Approx(0.7).epsilon(1e-15));
  CHECK(s_c(1.0, std::numbers::pi / 2) == Approx(1.0).epsilon(1e-14));
  CHECK(s_c(-1.0, 1.0) == Approx(std::sinh(1.0)).epsilon(1e-14));
  CHECK(s_c(-4.0, 0.3) == Approx(std::sinh(0.6) / 2.0).epsilon(1e-14));
}

TEST_CASE("s_c is continuous in c across zero") {
  for (double t : {1e-6, 0.1, 1.0, 2.0}) {
    CHECK(s_c(1e-14, t) == Approx(t).epsilon(1e-12));
    CHECK(s_c(-1e-14, t) == Approx(t).epsilon(1e-12));
  }
}

TEST_CASE("cot_c values and pole") {
  CHECK(cot_c(0.0, 2.0) == Approx(0.5));
  CHECK(cot_c(1.0, std::numbers::pi / 4) == Approx(1.0).epsilon(1e-14));
  CHECK(cot_c(-1.0, 1.0) == Approx(1.3130352854993312).epsilon(1e-13));
  CHECK_THROWS_AS(cot_c(0.0, 0.0), DomainError);
}

TEST_CASE("conjugate radius") {
  CHECK(conjugate_radius(1.0) == Approx(std::numbers::pi));
  CHECK(std::isinf(conjugate_radius(0.0)));
  CHECK(std::isinf(conjugate_radius(-2.0)));
}

TEST_CASE("warping derivatives") {
  const auto flat = WarpingProfile::space_form(0.0).eval(1.0);
  CHECK(flat.f == 1.0);
  CHECK(flat.df == 1.0);
  CHECK(flat.d2f == 0.0);
  const auto pert = WarpingProfile::perturbed(0.0, 0.1).eval(1.0);
  CHECK(pert.f == Approx(1.1));
  CHECK(pert.df == Approx(1.3));
  CHECK(pert.d2f == Approx(0.6));
  const auto pole = WarpingProfile::space_form(-1.0).eval(0.0);
  CHECK(pole.f == 0.0);
  CHECK(pole.df == 1.0);
  CHECK(pole.d2f == 0.0);
}

TEST_CASE("warping rejects out-of-range t") {
  const auto s = WarpingProfile::space_form(1.0);
  CHECK_THROWS_AS((void)s.eval(-0.1), DomainError);
  CHECK_THROWS_AS((void)s.eval(3.2), DomainError);
}

TEST_CASE("curvature verification") {
  const auto nodes = uniform_nodes(0.0, 1.0, 101);
  CHECK(verify_curvature_bound(WarpingProfile::space_form(0.0), 0.0, nodes).ok);
  CHECK(verify_curvature_bound(WarpingProfile::perturbed(0.0, 0.1), 0.0, nodes).ok);
  CHECK(verify_curvature_bound(WarpingProfile::space_form(-1.0), 0.0, nodes).ok);
  const auto bad = verify_curvature_bound(WarpingProfile::space_form(1.0), 0.0, nodes);
  CHECK_FALSE(bad.ok);
  CHECK(bad.worst_curvature == Approx(1.0).epsilon(1e-9));
}

TEST_CASE("tabulated profile reproduces sampled sinh and keeps the pole smooth") {
  std::vector<double> t = uniform_nodes(0.0, 2.0, 201);
  std::vector<double> f(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) f[i] = std::sinh(t[i]);
  const auto tab = WarpingProfile::tabulated(t, f);
  for (double x : {0.003, 0.3, 1.234, 1.99}) CHECK(tab.eval(x).f == Approx(std::sinh(x)).epsilon(1e-6));
  CHECK(tab.eval(0.0).df == 1.0);
  CHECK(tab.eval(0.0).d2f == 0.0);
  const auto rep = verify_curvature_bound(tab, 0.0, uniform_nodes(0.0, 2.0, 4001));
  CHECK(rep.ok);
}

TEST_CASE("tabulated profile validation") {
  CHECK_THROWS_AS(WarpingProfile::tabulated({0.0, 1.0}, {0.0, 1.0}), InvalidInput);
  CHECK_THROWS_AS(WarpingProfile::tabulated({0.1, 1.0, 2.0}, {0.0, 1.0, 2.0}), InvalidInput);
  CHECK_THROWS_AS(WarpingProfile::tabulated({0.0, 1.0, 2.0}, {0.0, -1.0, 2.0}), InvalidInput);
}

TEST_CASE("tabulated profile from csv") {
  const auto path = std::filesystem::temp_directory_path() / "ptone_profile_test.csv";
  {
    std::ofstream os(path);
    os << "t,f\n";
    for (int i = 0; i <= 50; ++i) os << i * 0.02 << "," << i * 0.02 << "\n";
  }
  const auto tab = WarpingProfile::from_csv(path);
  CHECK(tab.eval(0.5).f == Approx(0.5).epsilon(1e-12));
  CHECK(tab.label() == "tab[51]");
  std::filesystem::remove(path);
}

TEST_CASE("uniform nodes hit both ends exactly") {
  const auto x = uniform_nodes(0.25, 1.4, 7);
  CHECK(x.front() == 0.25);
  CHECK(x.back() == 1.4);
  CHECK_THROWS_AS(uniform_nodes(0.0, 1.0, 1), InvalidInput);
}
