#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "ptone/errors.hpp"
#include "ptone/surfaces.hpp"

using namespace ptone;
using doctest::Approx;

TEST_CASE("catenoid geometry") {
  const auto cat = RotSurface::catenoid();
  CHECK(extrinsic_distance(cat, 1.0) == Approx(1.6664).epsilon(1e-4));
  CHECK(extrinsic_distance(cat, 0.0) == Approx(1.0));
  CHECK(angle_cos(cat, 0.0) == 0.0);
  CHECK(second_form_norm(cat, 0.0) == Approx(std::sqrt(2.0)).epsilon(1e-15));
  for (int i = 0; i < 512; ++i) {
    const double s = -3.0 + 6.0 * i / 511.0;
    const auto k = principal_curvatures(cat, s);
    CHECK(std::abs(k.k1 + k.k2) <= 1e-9);
    CHECK(std::abs(angle_cos(cat, s)) <= 1.0 + 1e-12);
    CHECK(cat.radius_prime(s) * cat.radius_prime(s) + cat.height_prime(s) * cat.height_prime(s) ==
          Approx(1.0).epsilon(1e-14));
  }
  for (double s : {-1.5, -0.3, 0.4, 2.0}) {
    const auto exact = principal_curvatures(cat, s);
    const auto num = numeric_principal_curvatures(cat, s);
    CHECK(num.k1 == Approx(exact.k1).epsilon(1e-6));
    CHECK(num.k2 == Approx(exact.k2).epsilon(1e-6));
  }
}

TEST_CASE("plane geometry") {
  const auto pl = RotSurface::plane();
  for (double s : {0.1, 0.5, 2.0}) {
    CHECK(extrinsic_distance(pl, s) == Approx(s));
    CHECK(angle_cos(pl, s) == Approx(1.0));
    CHECK(second_form_norm(pl, s) == 0.0);
    CHECK(radial_normal_component(pl, s) == Approx(0.0).scale(1.0));
  }
}

TEST_CASE("bands") {
  const auto pb = make_band(RotSurface::plane(), 0.8);
  CHECK(pb.s_lo == 0.0);
  CHECK(pb.s_hi == Approx(0.8));
  CHECK(pb.k == Approx(1.0));
  const auto cb = make_band(RotSurface::catenoid(), 1.6664);
  CHECK(cb.s_hi == Approx(1.0).epsilon(1e-4));
  CHECK(cb.s_lo == Approx(-cb.s_hi));
  CHECK(cb.k == Approx(0.0).scale(1.0));
  CHECK_THROWS(make_band(RotSurface::catenoid(), 0.9));
  CHECK_THROWS(make_band(RotSurface::plane(), -1.0));
}

TEST_CASE("p-Laplacian routes agree") {
  for (double p : {2.0, 2.5, 3.0}) {
    const auto sol = solve_eigenvalue(RadialProblem::space_form_ball(p, 2, 0.0, 1.4));
    for (const auto& surf : {RotSurface::plane(), RotSurface::catenoid()}) {
      const auto band = make_band(surf, 1.4);
      const auto field = transplant(sol, band);
      if (surf.kind == SurfaceKind::Catenoid) CHECK(field.psi.front() == 0.0);
      CHECK(field.psi.back() == 0.0);
      const auto ra = route_agreement(field, band, p);
      CHECK(ra.nodes > 100);
      CHECK(ra.scaled_sup <= 1e-5);
    }
  }
}

TEST_CASE("band reports") {
  const auto model = solve_eigenvalue(RadialProblem::space_form_ball(2.0, 2, 0.0, 1.0));
  const auto plane = band_report(RotSurface::plane(), 1.0, 2.0, model);
  CHECK(plane.lambda_band_upper == Approx(model.lambda).epsilon(1e-3));
  CHECK(plane.lambda_band_upper >= model.lambda * (1 - 1e-6));
  CHECK(plane.A_sup == 0.0);

  const auto modelc = solve_eigenvalue(RadialProblem::space_form_ball(2.0, 2, 0.0, 1.2));
  const auto cat = band_report(RotSurface::catenoid(), 1.2, 2.0, modelc);
  CHECK(cat.cor15 == "false");
  CHECK(cat.cor13 == "vacuous");
  CHECK(cat.A_sup == Approx(std::sqrt(2.0)).epsilon(1e-6));
  const std::string header = csv_header_surface();
  CHECK(csv_row(cat).size() == static_cast<std::size_t>(std::count(header.begin(), header.end(), ',') + 1));
  CHECK(to_json(cat).at("surface") == "Catenoid");
}

TEST_CASE("model control on surfaces") {
  const auto model = solve_eigenvalue(RadialProblem::space_form_ball(2.0, 2, 0.0, 1.3));
  const auto mc = modelcontrol_check(make_band(RotSurface::catenoid(), 1.3), model, 2.0);
  CHECK(mc.nodes > 0);
  CHECK(mc.pass == (mc.min_margin >= -1e-6 * model.lambda));
}
