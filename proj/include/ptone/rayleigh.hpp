#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "ptone/eigensolver.hpp"

namespace ptone {

/// Weighted one-dimensional grid with per-endpoint Dirichlet flags.
struct Grid1D {
  std::vector<double> nodes;
  std::vector<double> weight;
  bool dirichlet_left = true;
  bool dirichlet_right = true;

  static Grid1D uniform(double a, double b, std::size_t n, const std::function<double(double)>& w,
                        bool dirichlet_left = true, bool dirichlet_right = true);
  /// Uniform grid on the problem domain with weight f^{m-1}; a ball gets a
  /// free pole and a Dirichlet rim.
  static Grid1D for_problem(const RadialProblem& problem, std::size_t n);

  [[nodiscard]] std::size_t size() const { return nodes.size(); }
  [[nodiscard]] std::vector<double> spacing() const;
  /// (w_i + w_{i+1}) / 2
  [[nodiscard]] std::vector<double> midpoint_weights() const;
  /// w_i times the dual cell (h_{i-1} + h_i) / 2.
  [[nodiscard]] std::vector<double> lumped_mass() const;
  void validate() const;
};

using DiscreteField = std::vector<double>;

/// Checks length, boundary values and that u is not identically zero.
void check_field(const DiscreteField& u, const Grid1D& grid);

double p_energy(const DiscreteField& u, const Grid1D& grid, double p);
/// sum_i w_i |u_i|^p times the dual cell.
double p_norm_p(const DiscreteField& u, const Grid1D& grid, double p);
double rayleigh_quotient(const DiscreteField& u, const Grid1D& grid, double p);

/// Distance to the Dirichlet part of the boundary.
DiscreteField default_initial_field(const Grid1D& grid);

struct RayleighOptions {
  double tol = 1e-10;
  std::size_t max_iter = 200000;
  std::size_t patience = 20;
  /// Use the OpenMP kernels; results are identical to the serial path.
  bool parallel = false;
};

struct RayleighResult {
  double lambda_est = 0.0;
  DiscreteField u_min;
  std::size_t iterations = 0;
};

/// Preconditioned projected descent on the unit p-norm sphere with Armijo
/// backtracking, keeping u >= 0 by taking absolute values.
RayleighResult minimize_rayleigh(const Grid1D& grid, double p, const DiscreteField& init,
                                 const RayleighOptions& opt = {});
RayleighResult minimize_rayleigh(const Grid1D& grid, double p, const RayleighOptions& opt = {});

}  // namespace ptone
