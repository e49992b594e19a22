#include "ptone/rayleigh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ptone/errors.hpp"
#include "ptone/kernels.hpp"
#include "ptone/numeric.hpp"

namespace ptone {

Grid1D Grid1D::uniform(double a, double b, std::size_t n, const std::function<double(double)>& w,
                       bool dirichlet_left, bool dirichlet_right) {
  if (n < 3) throw InvalidInput("grid needs at least 3 nodes");
  if (!(b > a)) throw InvalidInput("grid interval must have b > a");
  Grid1D g;
  g.nodes = uniform_nodes(a, b, n);
  g.weight.resize(n);
  for (std::size_t i = 0; i < n; ++i) g.weight[i] = w(g.nodes[i]);
  g.dirichlet_left = dirichlet_left;
  g.dirichlet_right = dirichlet_right;
  g.validate();
  return g;
}

Grid1D Grid1D::for_problem(const RadialProblem& problem, std::size_t n) {
  problem.validate();
  return uniform(problem.left(), problem.right(), n, [&](double t) { return problem.weight(t); },
                 !problem.is_ball(), true);
}

std::vector<double> Grid1D::spacing() const {
  std::vector<double> h(nodes.size() - 1);
  for (std::size_t j = 0; j + 1 < nodes.size(); ++j) h[j] = nodes[j + 1] - nodes[j];
  return h;
}

std::vector<double> Grid1D::midpoint_weights() const {
  std::vector<double> w(nodes.size() - 1);
  for (std::size_t j = 0; j + 1 < nodes.size(); ++j) w[j] = 0.5 * (weight[j] + weight[j + 1]);
  return w;
}

std::vector<double> Grid1D::lumped_mass() const {
  const std::size_t n = nodes.size();
  std::vector<double> m(n);
  for (std::size_t i = 0; i < n; ++i) {
    double cell = 0.0;
    if (i > 0) cell += 0.5 * (nodes[i] - nodes[i - 1]);
    if (i + 1 < n) cell += 0.5 * (nodes[i + 1] - nodes[i]);
    m[i] = weight[i] * cell;
  }
  return m;
}

void Grid1D::validate() const {
  const std::size_t n = nodes.size();
  if (n < 3 || weight.size() != n) throw InvalidInput("grid needs >= 3 nodes and one weight per node");
  for (std::size_t j = 0; j + 1 < n; ++j) {
    if (!(nodes[j + 1] > nodes[j])) throw InvalidInput("grid nodes must be strictly increasing");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(weight[i]) || weight[i] < 0.0) throw InvalidInput("grid weight must be finite and >= 0");
    if (weight[i] == 0.0 && !(i == 0 && nodes[0] == 0.0)) {
      throw InvalidInput("grid weight may vanish only at a pole endpoint");
    }
  }
  if (!dirichlet_left && !dirichlet_right) throw InvalidInput("grid needs a Dirichlet endpoint");
}

void check_field(const DiscreteField& u, const Grid1D& grid) {
  if (u.size() != grid.size()) throw InvalidInput("field length does not match the grid");
  if (grid.dirichlet_left && u.front() != 0.0) throw InvalidInput("field violates the left Dirichlet condition");
  if (grid.dirichlet_right && u.back() != 0.0) throw InvalidInput("field violates the right Dirichlet condition");
  bool nonzero = false;
  for (double v : u) {
    if (!std::isfinite(v)) throw InvalidInput("field has non-finite values");
    nonzero = nonzero || v != 0.0;
  }
  if (!nonzero) throw InvalidInput("field is identically zero");
}

double p_energy(const DiscreteField& u, const Grid1D& grid, double p) {
  if (u.size() != grid.size()) throw InvalidInput("field length does not match the grid");
  return kernels::p_energy_serial(grid.spacing(), grid.midpoint_weights(), u, p);
}

double p_norm_p(const DiscreteField& u, const Grid1D& grid, double p) {
  if (u.size() != grid.size()) throw InvalidInput("field length does not match the grid");
  return kernels::p_mass_serial(grid.lumped_mass(), u, p);
}

double rayleigh_quotient(const DiscreteField& u, const Grid1D& grid, double p) {
  const double den = p_norm_p(u, grid, p);
  if (!(den > 0.0)) throw InvalidInput("field has zero p-norm");
  return p_energy(u, grid, p) / den;
}

DiscreteField default_initial_field(const Grid1D& grid) {
  const double a = grid.nodes.front();
  const double b = grid.nodes.back();
  DiscreteField u(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double t = grid.nodes[i];
    double d = std::numeric_limits<double>::infinity();
    if (grid.dirichlet_left) d = std::min(d, t - a);
    if (grid.dirichlet_right) d = std::min(d, b - t);
    u[i] = d;
  }
  if (grid.dirichlet_left) u.front() = 0.0;
  if (grid.dirichlet_right) u.back() = 0.0;
  return u;
}

namespace {

struct Workspace {
  const Grid1D& grid;
  double p;
  bool parallel;
  std::vector<double> h, wmid, mass;

  double energy(const std::vector<double>& u) const {
    return parallel ? kernels::p_energy_parallel(h, wmid, u, p) : kernels::p_energy_serial(h, wmid, u, p);
  }
  double norm_p(const std::vector<double>& u) const {
    return parallel ? kernels::p_mass_parallel(mass, u, p) : kernels::p_mass_serial(mass, u, p);
  }
  void energy_gradient(const std::vector<double>& u, std::vector<double>& out) const {
    if (parallel) {
      kernels::p_energy_gradient_parallel(h, wmid, u, p, out);
    } else {
      kernels::p_energy_gradient_serial(h, wmid, u, p, out);
    }
  }
};

// Thomas algorithm on the free nodes [lo, hi) of a tridiagonal stiffness matrix
// assembled from edge coefficients a_j.
void solve_stiffness(const std::vector<double>& a, std::size_t lo, std::size_t hi,
                     const std::vector<double>& rhs, std::vector<double>& x) {
  const std::size_t n = a.size() + 1;
  const std::size_t k = hi - lo;
  std::vector<double> c(k), d(k);
  for (std::size_t r = 0; r < k; ++r) {
    const std::size_t i = lo + r;
    const double diag = (i > 0 ? a[i - 1] : 0.0) + (i + 1 < n ? a[i] : 0.0);
    const double lower = (r > 0) ? -a[i - 1] : 0.0;
    const double upper = (r + 1 < k) ? -a[i] : 0.0;
    const double denom = diag - (r > 0 ? lower * c[r - 1] : 0.0);
    c[r] = upper / denom;
    d[r] = (rhs[i] - (r > 0 ? lower * d[r - 1] : 0.0)) / denom;
  }
  std::fill(x.begin(), x.end(), 0.0);
  for (std::size_t r = k; r-- > 0;) {
    x[lo + r] = d[r] - (r + 1 < k ? c[r] * x[lo + r + 1] : 0.0);
  }
}

}  // namespace

RayleighResult minimize_rayleigh(const Grid1D& grid, double p, const DiscreteField& init,
                                 const RayleighOptions& opt) {
  grid.validate();
  check_field(init, grid);
  if (!(p > 1.0)) throw InvalidInput("exponent p must exceed 1");
  if (!(opt.tol > 0.0)) throw InvalidInput("tolerance must be positive");

  Workspace ws{grid, p, opt.parallel, grid.spacing(), grid.midpoint_weights(), grid.lumped_mass()};
  const std::size_t n = grid.size();
  const std::size_t lo = grid.dirichlet_left ? 1 : 0;
  const std::size_t hi = grid.dirichlet_right ? n - 1 : n;

  auto normalize = [&](std::vector<double>& v) {
    for (double& x : v) x = std::abs(x);
    const double s = std::pow(ws.norm_p(v), -1.0 / p);
    for (double& x : v) x *= s;
  };

  std::vector<double> u = init;
  normalize(u);
  double R = ws.energy(u);

  std::vector<double> grad(n), s(n), trial(n), a(n - 1);
  std::size_t quiet = 0;
  std::size_t iter = 0;
  constexpr double kArmijo = 1e-4;
  constexpr double kReg = 1e-6;
  while (quiet < opt.patience) {
    if (++iter > opt.max_iter) throw ConvergenceError("Rayleigh minimization hit the iteration cap");

    ws.energy_gradient(u, grad);
    for (std::size_t i = 0; i < n; ++i) grad[i] -= R * p * ws.mass[i] * phi(u[i], p);
    if (grid.dirichlet_left) grad.front() = 0.0;
    if (grid.dirichlet_right) grad.back() = 0.0;

    double dmax = 0.0;
    for (std::size_t j = 0; j + 1 < n; ++j) dmax = std::max(dmax, std::abs((u[j + 1] - u[j]) / ws.h[j]));
    const double floor2 = (kReg * dmax) * (kReg * dmax);
    for (std::size_t j = 0; j + 1 < n; ++j) {
      const double d = (u[j + 1] - u[j]) / ws.h[j];
      a[j] = ws.wmid[j] * std::pow(d * d + floor2, 0.5 * (p - 2.0)) / ws.h[j];
    }
    solve_stiffness(a, lo, hi, grad, s);
    double slope = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = -s[i];
      slope += grad[i] * s[i];
    }

    double R_new = R;
    if (slope < 0.0) {
      double alpha = 1.0 / p;
      for (int k = 0; k < 60; ++k, alpha *= 0.5) {
        for (std::size_t i = 0; i < n; ++i) trial[i] = u[i] + alpha * s[i];
        normalize(trial);
        const double Rt = ws.energy(trial);
        if (std::isfinite(Rt) && Rt <= R + kArmijo * alpha * slope) {
          R_new = Rt;
          u.swap(trial);
          break;
        }
      }
    }
    const double decrease = R - R_new;
    quiet = (decrease < opt.tol * R_new) ? quiet + 1 : 0;
    R = R_new;
  }
  return {R, u, iter};
}

RayleighResult minimize_rayleigh(const Grid1D& grid, double p, const RayleighOptions& opt) {
  return minimize_rayleigh(grid, p, default_initial_field(grid), opt);
}

}  // namespace ptone
