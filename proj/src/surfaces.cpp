#include "ptone/surfaces.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ptone/bounds.hpp"
#include "ptone/critical_radius.hpp"
#include "ptone/csv.hpp"
#include "ptone/errors.hpp"
#include "ptone/numeric.hpp"
#include "ptone/rayleigh.hpp"

namespace ptone {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double d5(const auto& f, double s, double h) {
  return (f(s - 2 * h) - 8 * f(s - h) + 8 * f(s + h) - f(s + 2 * h)) / (12 * h);
}

double dd5(const auto& f, double s, double h) {
  return (-f(s - 2 * h) + 16 * f(s - h) - 30 * f(s) + 16 * f(s + h) - f(s + 2 * h)) / (12 * h * h);
}

}  // namespace

std::string RotSurface::name() const { return kind == SurfaceKind::Plane ? "Plane" : "Catenoid"; }

double RotSurface::radius(double s) const { return kind == SurfaceKind::Plane ? s : std::sqrt(1.0 + s * s); }

double RotSurface::rho(double s) const { return radius(s); }

double RotSurface::height(double s) const { return kind == SurfaceKind::Plane ? 0.0 : std::asinh(s); }

double RotSurface::radius_prime(double s) const {
  return kind == SurfaceKind::Plane ? 1.0 : s / std::sqrt(1.0 + s * s);
}

double RotSurface::height_prime(double s) const {
  return kind == SurfaceKind::Plane ? 0.0 : 1.0 / std::sqrt(1.0 + s * s);
}

PrincipalCurvatures principal_curvatures(const RotSurface& surface, double s) {
  if (surface.kind == SurfaceKind::Plane) return {0.0, 0.0};
  const double q = 1.0 / (1.0 + s * s);
  return {-q, q};
}

PrincipalCurvatures numeric_principal_curvatures(const RotSurface& surface, double s, double h) {
  auto R = [&](double x) { return surface.radius(x); };
  auto Z = [&](double x) { return surface.height(x); };
  const double r1 = d5(R, s, h);
  const double z1 = d5(Z, s, h);
  const double r2 = dd5(R, s, h);
  const double z2 = dd5(Z, s, h);
  const double speed = std::hypot(r1, z1);
  // Meridian curvature of (R, z) against n = (-z', R') / |gamma'|, parallel from
  // the circle of radius R.
  const double k1 = (-r2 * z1 + z2 * r1) / (speed * speed * speed);
  const double k2 = (z1 / speed) / R(s);
  return {k1, k2};
}

double extrinsic_distance(const RotSurface& surface, double s) {
  if (surface.kind == SurfaceKind::Plane) return std::abs(s);
  return std::sqrt(1.0 + s * s + std::asinh(s) * std::asinh(s));
}

double angle_cos(const RotSurface& surface, double s) {
  if (surface.kind == SurfaceKind::Plane) {
    if (s == 0.0) throw DomainError("angle undefined at the plane's pole");
    return 1.0;
  }
  const double R = std::sqrt(1.0 + s * s);
  return std::abs(s + std::asinh(s) / R) / extrinsic_distance(surface, s);
}

double second_form_norm(const RotSurface& surface, double s) {
  if (surface.kind == SurfaceKind::Plane) return 0.0;
  return std::sqrt(2.0) / (1.0 + s * s);
}

double radial_normal_component(const RotSurface& surface, double s) {
  const double t = extrinsic_distance(surface, s);
  if (t == 0.0) return 0.0;
  return (-surface.height_prime(s) * surface.radius(s) + surface.radius_prime(s) * surface.height(s)) / t;
}

SurfaceBand make_band(const RotSurface& surface, double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw InvalidInput("band radius must be positive");
  SurfaceBand b;
  b.surface = surface;
  b.r = r;
  if (surface.kind == SurfaceKind::Plane) {
    b.s_lo = 0.0;
    b.s_hi = r;
    b.k = 1.0;
    return b;
  }
  if (!(r > 1.0)) throw DomainError("catenoid bands need r > 1 (neck distance)");
  double lo = 0.0;
  double hi = r;
  for (int i = 0; i < 200 && hi - lo > 1e-16 * r; ++i) {
    const double mid = 0.5 * (lo + hi);
    (extrinsic_distance(surface, mid) < r ? lo : hi) = mid;
  }
  const double se = 0.5 * (lo + hi);
  b.s_lo = -se;
  b.s_hi = se;
  b.k = 0.0;
  return b;
}

BandField transplant(const RadialSolution& solution, const SurfaceBand& band, std::size_t n) {
  const auto& pr = solution.problem;
  if (!pr.is_ball() || !pr.profile.is_flat() || pr.m != 2) {
    throw InvalidInput("transplant needs a flat two-dimensional ball solution");
  }
  if (std::abs(solution.radius() - band.r) > 1e-12 * band.r) throw InvalidInput("solution radius differs from the band");
  if (n < 11) throw InvalidInput("band grid needs at least 11 nodes");
  BandField f;
  f.s = uniform_nodes(band.s_lo, band.s_hi, n);
  f.t.resize(n);
  f.psi.resize(n);
  f.dpsi_dt.resize(n);
  f.d2psi_dt2.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double t = extrinsic_distance(band.surface, f.s[i]);
    const bool end = (i == n - 1) || (i == 0 && band.surface.kind == SurfaceKind::Catenoid);
    if (t > band.r) {
      if (!end && t > band.r * (1 + 1e-12)) throw DomainError("extrinsic distance exceeds r inside the band");
      t = band.r;
    }
    f.t[i] = t;
    const PointState st = solution.at(t);
    f.psi[i] = end ? 0.0 : st.omega;
    f.dpsi_dt[i] = st.omega_prime;
    f.d2psi_dt2[i] = st.omega_second;
  }
  return f;
}

std::vector<double> plap_intrinsic(const BandField& field, const SurfaceBand& band, double p) {
  const std::size_t n = field.s.size();
  const double h = field.s[1] - field.s[0];
  std::vector<double> flux(n - 1);
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const double mid = 0.5 * (field.s[j] + field.s[j + 1]);
    flux[j] = band.surface.rho(mid) * phi((field.psi[j + 1] - field.psi[j]) / h, p);
  }
  std::vector<double> out(n, kNaN);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double rho = band.surface.rho(field.s[i]);
    if (rho <= 0.0) continue;
    out[i] = (flux[i] - flux[i - 1]) / (h * rho);
  }
  return out;
}

std::vector<double> plap_jk(const BandField& field, const SurfaceBand& band, double p) {
  const std::size_t n = field.s.size();
  std::vector<double> out(n, kNaN);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = field.s[i];
    const double t = field.t[i];
    if (t <= 0.0) continue;
    const double ca = angle_cos(band.surface, s);
    const double grad = std::abs(field.dpsi_dt[i]) * ca;
    if (!(grad > 0.0)) continue;
    const double sa2 = 1.0 - ca * ca;
    const double w1 = field.dpsi_dt[i];
    const double w2 = field.d2psi_dt2[i];
    const auto k = principal_curvatures(band.surface, s);
    const double nt = radial_normal_component(band.surface, s);
    // Hess_N t = (g - dt (x) dt)/t; e2 is orthogonal to the position vector.
    const double hess_e2 = 1.0 / t;
    const double lap = w2 * ca * ca + w1 * sa2 / t + w1 * hess_e2 + w1 * (k.k1 + k.k2) * nt;
    const double hess11 = w2 * ca * ca + w1 * (sa2 / t + k.k1 * nt);
    out[i] = std::pow(grad, p - 2.0) * (lap + (p - 2.0) * hess11);
  }
  return out;
}

RouteAgreement route_agreement(const BandField& field, const SurfaceBand& band, double p) {
  const auto a = plap_intrinsic(field, band, p);
  const auto b = plap_jk(field, band, p);
  double num = 0.0;
  double den = 0.0;
  RouteAgreement out;
  const std::size_t n = a.size();
  const bool left_dirichlet = band.surface.kind == SurfaceKind::Catenoid;
  for (std::size_t i = 0; i < n; ++i) {
    if (i + 2 >= n || (left_dirichlet && i < 2)) continue;
    if (!std::isfinite(a[i]) || !std::isfinite(b[i]) || !(field.psi[i] > 0.0)) continue;
    if (std::abs(field.s[i]) < kCriticalLayer * band.s_hi) continue;
    num = std::max(num, std::abs(a[i] - b[i]));
    den = std::max(den, std::abs(a[i]));
    ++out.nodes;
  }
  if (out.nodes == 0 || den == 0.0) throw DomainError("route comparison has no evaluation nodes");
  out.scaled_sup = num / den;
  return out;
}

ModelControl modelcontrol_check(const SurfaceBand& band, const RadialSolution& solution, double p, std::size_t n) {
  if (p < 2.0) throw InvalidInput("model control needs p >= 2");
  if (std::abs(solution.problem.p - p) > 0.0) throw InvalidInput("solution exponent differs from p");
  if (p > 2.0) {
    const auto rs = compute_r_star(0.0, solution);
    if (band.r > rs.r_star) throw DomainError("band radius exceeds the critical radius");
  }
  const auto field = transplant(solution, band, n);
  const auto lap = plap_jk(field, band, p);
  const double lambda = solution.lambda;
  ModelControl out;
  out.min_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(lap[i]) || field.psi[i] < 1e-6) continue;
    const double ca = angle_cos(band.surface, field.s[i]);
    if (ca < 1e-3) continue;
    const double m = -lap[i] / (std::pow(field.psi[i], p - 1.0) * std::pow(ca, p - 2.0)) - lambda;
    out.min_margin = std::min(out.min_margin, m);
    ++out.nodes;
  }
  if (out.nodes == 0) throw DomainError("model control has no evaluation nodes");
  out.pass = out.min_margin >= -1e-6 * lambda;
  return out;
}

BandReport band_report(const RotSurface& surface, double r, double p, const RadialSolution& model, std::size_t n) {
  const auto band = make_band(surface, r);
  BandReport rep;
  rep.surface = surface.name();
  rep.p = p;
  rep.r = r;
  rep.k = band.k;
  rep.lambda_model = model.lambda;
  rep.rhs = std::pow(band.k, p - 2.0) * model.lambda;
  rep.vacuous = band.k <= 0.0;

  const bool plane = surface.kind == SurfaceKind::Plane;
  const auto grid = Grid1D::uniform(band.s_lo, band.s_hi, n, [&](double s) { return surface.rho(s); }, !plane, true);
  rep.lambda_band_upper = minimize_rayleigh(grid, p).lambda_est;

  const auto mc = modelcontrol_check(band, model, p);
  rep.modelcontrol_margin = mc.min_margin;
  rep.modelcontrol_pass = mc.pass;

  for (double s : grid.nodes) rep.A_sup = std::max(rep.A_sup, second_form_norm(surface, s));
  if (rep.vacuous) {
    rep.cor13 = "vacuous";
  } else {
    rep.cor13 = stability_criterion_immersion(std::pow(rep.A_sup, p), band.k, p, model.lambda) ? "true" : "false";
  }
  rep.cor15 = stability_criterion_meancurv(rep.A_sup, 2, p, r) ? "true" : "false";
  return rep;
}

nlohmann::json to_json(const BandReport& r) {
  return {{"surface", r.surface},
          {"p", r.p},
          {"r", r.r},
          {"k", r.k},
          {"lambda_model", r.lambda_model},
          {"rhs", r.rhs},
          {"vacuous", r.vacuous},
          {"lambda_band_upper", r.lambda_band_upper},
          {"modelcontrol_margin", r.modelcontrol_margin},
          {"modelcontrol_pass", r.modelcontrol_pass},
          {"A_sup", r.A_sup},
          {"cor13", r.cor13},
          {"cor15", r.cor15}};
}

std::string csv_header_surface() {
  return "surface,p,r,k,lambda_model,rhs,lambda_band_upper,modelcontrol_margin,cor13,cor15";
}

std::vector<std::string> csv_row(const BandReport& r) {
  return {r.surface,
          csv::num(r.p),
          csv::num(r.r),
          csv::num(r.k),
          csv::num(r.lambda_model),
          csv::num(r.rhs),
          csv::num(r.lambda_band_upper),
          csv::num(r.modelcontrol_margin),
          r.cor13,
          r.cor15};
}

}  // namespace ptone
