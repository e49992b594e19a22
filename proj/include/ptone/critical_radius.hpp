#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "ptone/eigensolver.hpp"

namespace ptone {

/// (p+m-2) cot_c(t) phi_p(w'(t)) + lambda w(t)^{p-1}; at t = 0 the pole limit
/// lambda (2-p)/m is returned.
double restriction_W(double t, const RadialSolution& solution, double c);

/// V_0 = exp(-a t^2/2), V_1 = cos(t)^{-a}, V_{-1} = cosh(t)^{-a}, a = lambda/(p+m-2).
double weight_V(double c, double t, double lambda, double p, int m);

struct WeightDerivatives {
  double v = 0.0;
  double dv = 0.0;
  double d2v = 0.0;
};
WeightDerivatives weight_V_derivatives(double c, double t, double lambda, double p, int m);

/// Flat-case integrand as displayed:
/// (p-2)|w|^{p-1} + a s^2 |w|^{p-1} + (p-1)|w|^{p-2}|w'| - |w'|^{p-1}.
double phi0(double s, const RadialSolution& solution, double lambda);

struct SphericalConstants {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
};
SphericalConstants spherical_constants(double lambda, double p, int m);

/// (C1 + C2 tan^2 s)|w|^{p-1} + C3 tan s (|w'|^{p-1}/(p-1) - |w|^{p-2}|w'|).
double phi1(double s, const RadialSolution& solution, double lambda);
/// Young lower bound (C1 + C2 tan^2 s - C3 (p-2)/(p-1) tan s)|w|^{p-1} for phi1.
double phi1_barrier(double s, const RadialSolution& solution, double lambda);

/// S_c^{m-1} (V_c' w^{p-1} - V_c phi_p(w')).
double lhs_expression(double c, double t, const RadialSolution& solution, double lambda);
/// t-derivative of lhs_expression, from the eigenvalue equation.
double lhs_derivative(double c, double t, const RadialSolution& solution, double lambda);

/// Sum of the three flat-case integrands on the right of the integral identity:
/// a(p-2) s^{m-1} w^{p-1} V_0 + a^2 s^{m+1} w^{p-1} V_0 + s^{m-1} w' G V_0',
/// G = (p-1)|w|^{p-2} - |w'|^{p-2}.
double flateq_rhs_integrand(double s, const RadialSolution& solution, double lambda);

struct SphericalCheck {
  bool positive = false;
  double margin = 0.0;
  double barrier_margin = 0.0;
};
SphericalCheck verify_spherical_positivity(const RadialSolution& solution, double lambda, double r);

enum class RStarMethod { DirectW, IntegralLHS };
std::string to_string(RStarMethod method);

struct CriticalRadiusReport {
  double c = 0.0;
  double p = 0.0;
  int m = 0;
  double r = 0.0;
  double lambda = 0.0;
  double r_star = 0.0;
  RStarMethod method = RStarMethod::IntegralLHS;
  std::size_t scan_nodes = 0;
  /// Largest W/lambda over scan nodes in (0, r_star); <= 1e-9 when certified.
  double max_W_scaled = 0.0;
  /// min over (0, r_star) of -W/lambda.
  double min_margin = 0.0;
  std::vector<double> sample_t;
  std::vector<double> W_samples;
  std::vector<double> LHS_samples;
  std::vector<double> Phi_samples;
  double C1 = 0.0, C2 = 0.0, C3 = 0.0, C4 = 0.0;
  nlohmann::json diagnostics;
};

inline constexpr double kWTol = 1e-9;

struct CriticalRadiusOptions {
  std::size_t scan_nodes = 4096;
  std::size_t samples = 129;
};

/// r_star = first scan node where lhs_expression <= 0, else r. For c = 1 the
/// spherical positivity check certifies r directly. Throws VerificationError if
/// W exceeds 1e-9 lambda anywhere on the certified range.
CriticalRadiusReport compute_r_star(double c, const RadialSolution& solution,
                                    const CriticalRadiusOptions& opt = {});

nlohmann::json to_json(const CriticalRadiusReport& report);
std::string csv_header_critical();
std::vector<std::string> csv_row(const CriticalRadiusReport& report);

}  // namespace ptone
