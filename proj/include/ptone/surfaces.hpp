#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "ptone/eigensolver.hpp"

namespace ptone {

enum class SurfaceKind { Plane, Catenoid };

/// Rotationally symmetric minimal surface in flat 3-space, parametrized by the
/// meridian arclength s: X(s, theta) = (R(s) cos theta, R(s) sin theta, z(s)).
struct RotSurface {
  SurfaceKind kind = SurfaceKind::Plane;

  static RotSurface plane() { return {SurfaceKind::Plane}; }
  static RotSurface catenoid() { return {SurfaceKind::Catenoid}; }

  [[nodiscard]] std::string name() const;
  /// Intrinsic warping; equals R(s).
  [[nodiscard]] double rho(double s) const;
  [[nodiscard]] double radius(double s) const;
  [[nodiscard]] double height(double s) const;
  [[nodiscard]] double radius_prime(double s) const;
  [[nodiscard]] double height_prime(double s) const;
};

struct PrincipalCurvatures {
  /// meridian direction
  double k1 = 0.0;
  /// parallel direction
  double k2 = 0.0;
};

/// Closed form, with unit normal n = (-z' cos theta, -z' sin theta, R').
PrincipalCurvatures principal_curvatures(const RotSurface& surface, double s);
/// Shape operator from 5-point differences of the embedding with step h.
PrincipalCurvatures numeric_principal_curvatures(const RotSurface& surface, double s, double h = 1e-3);

double extrinsic_distance(const RotSurface& surface, double s);
double angle_cos(const RotSurface& surface, double s);
double second_form_norm(const RotSurface& surface, double s);
/// <d_t, n> with d_t the unit ambient radial vector.
double radial_normal_component(const RotSurface& surface, double s);

/// Connected component of {t < r} containing the neck (Catenoid) or the
/// centre (Plane, s >= 0).
struct SurfaceBand {
  RotSurface surface;
  double r = 0.0;
  double s_lo = 0.0;
  double s_hi = 0.0;
  /// inf of cos alpha over the band
  double k = 0.0;
};

SurfaceBand make_band(const RotSurface& surface, double r);

struct BandField {
  std::vector<double> s;
  std::vector<double> t;
  std::vector<double> psi;
  /// w'(t(s)), w''(t(s))
  std::vector<double> dpsi_dt;
  std::vector<double> d2psi_dt2;
};

/// psi(s) = w(t(s)) on a uniform grid of n nodes over the band.
BandField transplant(const RadialSolution& solution, const SurfaceBand& band, std::size_t n = 4001);

/// rho^{-1} (rho phi_p(psi'))' by staggered differences; NaN at the band ends
/// and at a plane pole.
std::vector<double> plap_intrinsic(const BandField& field, const SurfaceBand& band, double p);

/// Delta_p psi assembled from the ambient decomposition of psi = w o t; NaN
/// where |grad psi| = 0.
std::vector<double> plap_jk(const BandField& field, const SurfaceBand& band, double p);

struct RouteAgreement {
  double scaled_sup = 0.0;
  std::size_t nodes = 0;
};
inline constexpr double kCriticalLayer = 0.05;
/// sup |jk - intrinsic| / sup |intrinsic| over nodes with |grad psi| > 0,
/// psi > 0 and |s| >= 0.05 s_hi (plane pole, catenoid neck), skipping two
/// layers at each Dirichlet end.
RouteAgreement route_agreement(const BandField& field, const SurfaceBand& band, double p);

struct ModelControl {
  double min_margin = 0.0;
  bool pass = false;
  std::size_t nodes = 0;
};
ModelControl modelcontrol_check(const SurfaceBand& band, const RadialSolution& solution, double p,
                                std::size_t n = 4001);

struct BandReport {
  std::string surface;
  double p = 0.0;
  double r = 0.0;
  double k = 0.0;
  double lambda_model = 0.0;
  double rhs = 0.0;
  bool vacuous = false;
  double lambda_band_upper = 0.0;
  double modelcontrol_margin = 0.0;
  bool modelcontrol_pass = false;
  double A_sup = 0.0;
  std::string cor13;
  std::string cor15;
};

BandReport band_report(const RotSurface& surface, double r, double p, const RadialSolution& model,
                       std::size_t n = 2001);

nlohmann::json to_json(const BandReport& report);
std::string csv_header_surface();
std::vector<std::string> csv_row(const BandReport& report);

}  // namespace ptone
