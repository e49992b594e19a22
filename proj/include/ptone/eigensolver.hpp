#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include <json.hpp>

#include "ptone/modelspace.hpp"
#include "ptone/numeric.hpp"

namespace ptone {

struct Ball {
  double r = 1.0;
};
struct Annulus {
  double a = 0.0;
  double b = 1.0;
};
using Domain = std::variant<Ball, Annulus>;

inline constexpr double kMinExponent = 1.05;
inline constexpr double kMaxExponent = 16.0;

/// Dirichlet p-eigenvalue problem on a radial domain of a warped model:
/// (f^{m-1} |w'|^{p-2} w')' + lambda f^{m-1} |w|^{p-2} w = 0.
struct RadialProblem {
  double p = 2.0;
  int m = 2;
  WarpingProfile profile = WarpingProfile::space_form(0.0);
  Domain domain = Ball{1.0};

  static RadialProblem ball(double p, int m, WarpingProfile profile, double r);
  static RadialProblem annulus(double p, int m, WarpingProfile profile, double a, double b);
  /// Convenience: ball in the space form of curvature c.
  static RadialProblem space_form_ball(double p, int m, double c, double r);

  /// Conjugate exponent p/(p-1).
  [[nodiscard]] double q() const { return p / (p - 1.0); }
  [[nodiscard]] bool is_ball() const { return std::holds_alternative<Ball>(domain); }
  [[nodiscard]] double left() const;
  [[nodiscard]] double right() const;
  /// f(t)^{m-1}; exactly 1 when m = 1.
  [[nodiscard]] double weight(double t) const;

  /// Throws InvalidInput / DomainError for unusable problems.
  void validate() const;
};

/// Pointwise data of a solved (or trial) eigenfunction.
struct PointState {
  double omega = 0.0;
  double omega_prime = 0.0;
  double omega_second = 0.0;
  /// F(t) = int_left^t f^{m-1} |w|^{p-2} w ds.
  double flux = 0.0;
};

/// Dense evaluator over an accepted Runge-Kutta trajectory: evaluation at an
/// arbitrary t re-takes one step from the nearest preceding knot.
class DenseTrajectory;

struct Trajectory {
  std::vector<double> grid;
  std::vector<double> omega;
  std::vector<double> omega_prime;
  std::vector<double> flux;
  std::optional<double> first_zero;
  std::size_t steps = 0;
  std::shared_ptr<const DenseTrajectory> dense;
};

/// Integrates the first-order system in (w, G = f^{m-1} phi_p(w')) for a trial
/// eigenvalue. Ball: w(0) = 1 with a power-series start on [0, 1e-4 r].
/// Annulus: w(a) = 0 and unit flux G(a) = 1. Stops at the first zero of w.
Trajectory integrate_profile(const RadialProblem& problem, double lambda);

struct RadialSolution {
  RadialProblem problem;
  double lambda = 0.0;
  std::vector<double> grid;
  std::vector<double> omega;
  std::vector<double> omega_prime;
  std::vector<double> flux;
  double residual = 0.0;
  int iterations = 0;
  std::shared_ptr<const DenseTrajectory> dense;

  /// Normalized eigenfunction data at any t in the domain.
  [[nodiscard]] PointState at(double t) const;
  [[nodiscard]] double radius() const { return problem.right(); }
};

struct SolveOptions {
  double tol = 1e-8;
  std::size_t grid_size = 2048;
  int max_iter = 200;
  int max_doublings = 60;
};

inline constexpr double kBoundaryTol = 1e-6;

RadialSolution solve_ball_eigenvalue(const RadialProblem& problem, const SolveOptions& opt = {});
RadialSolution solve_annulus_eigenvalue(const RadialProblem& problem, const SolveOptions& opt = {});
/// Dispatches on the domain kind.
RadialSolution solve_eigenvalue(const RadialProblem& problem, const SolveOptions& opt = {});

/// Scaled sup-norm of (f^{m-1} phi_p(w'))' + lambda f^{m-1} phi_p(w) over
/// interior grid nodes, normalized by lambda * max_i f_i^{m-1} |w_i|^{p-1}.
double eigen_equation_residual(const RadialSolution& solution, const RadialProblem& problem);

/// r^{-p} lambda(B_1) for flat balls.
double scaled_eigenvalue(double lambda_unit, double r, double p);
/// As above, rejecting non-flat profiles.
double scaled_eigenvalue(double lambda_unit, double r, double p, const WarpingProfile& profile);

/// Closed-form one-dimensional value (p-1) (pi_p / (2 r))^p with
/// pi_p = 2 pi / (p sin(pi/p)).
double interval_eigenvalue(double p, double r);

nlohmann::json to_json(const RadialProblem& problem);
nlohmann::json to_json(const RadialSolution& solution);

}  // namespace ptone
