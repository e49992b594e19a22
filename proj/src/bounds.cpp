#include "ptone/bounds.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "ptone/errors.hpp"
#include "ptone/kernels.hpp"
#include "ptone/numeric.hpp"

namespace ptone {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double gauss4(const RadialProblem& problem, double a, double b) {
  static constexpr std::array<double, 4> x{-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                           0.8611363115940526};
  static constexpr std::array<double, 4> w{0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                           0.3478548451374538};
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double s = 0.0;
  for (int k = 0; k < 4; ++k) s += w[k] * problem.weight(mid + half * x[k]);
  return s * half;
}

void check_grid(const std::vector<double>& grid, std::size_t n) {
  if (grid.size() != n) throw InvalidInput("field length does not match the grid");
  if (n < 11) throw InvalidInput("grid needs at least 8 interior nodes");
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (!(grid[i + 1] > grid[i])) throw InvalidInput("grid nodes must be strictly increasing");
  }
}

nlohmann::json problem_json(const RadialProblem& problem) { return to_json(problem); }

}  // namespace

RadialField RadialField::on_interior(std::vector<double> grid, std::vector<double> values) {
  if (grid.size() != values.size() || grid.size() < 3) throw InvalidInput("field and grid sizes differ");
  RadialField f;
  f.last = grid.size() - 2;
  f.grid = std::move(grid);
  f.values = std::move(values);
  return f;
}

std::string to_string(CertificateKind kind) {
  switch (kind) {
    case CertificateKind::Barta: return "Barta";
    case CertificateKind::DivField: return "DivField";
    case CertificateKind::DivSup: return "DivSup";
    case CertificateKind::Theorem17: return "Theorem17";
  }
  return "?";
}

nlohmann::json to_json(const BoundCertificate& cert) {
  return {{"kind", to_string(cert.kind)},
          {"value", cert.value},
          {"witness", cert.witness},
          {"informative", cert.informative},
          {"problem", cert.problem},
          {"evaluation_range", {cert.first, cert.last}}};
}

std::pair<std::size_t, std::size_t> evaluation_range(const std::vector<double>& grid, const RadialProblem& problem,
                                                     double end_layer, double pole_layer) {
  const std::size_t n = grid.size();
  if (n < 11) throw InvalidInput("grid needs at least 8 interior nodes");
  const double a = grid.front();
  const double b = grid.back();
  const double len = b - a;
  const double lo_t = a + (problem.is_ball() ? pole_layer : end_layer) * len;
  const double hi_t = b - end_layer * len;
  std::size_t i0 = problem.is_ball() ? 1 : 3;
  std::size_t i1 = n - 4;
  while (i0 < i1 && grid[i0] < lo_t) ++i0;
  while (i1 > i0 && grid[i1] > hi_t) --i1;
  if (i1 <= i0) throw InvalidInput("evaluation set is empty");
  return {i0, i1};
}

std::vector<double> discrete_plap_radial(const std::vector<double>& grid, const DiscreteField& eta,
                                         const RadialProblem& problem, bool parallel) {
  const std::size_t n = eta.size();
  check_grid(grid, n);
  const double p = problem.p;
  std::vector<double> h(n - 1), wmid(n - 1), cell(n, 0.0);
  for (std::size_t j = 0; j + 1 < n; ++j) {
    h[j] = grid[j + 1] - grid[j];
    const double mid = 0.5 * (grid[j] + grid[j + 1]);
    wmid[j] = problem.weight(mid);
    cell[j] += gauss4(problem, grid[j], mid);
    cell[j + 1] += gauss4(problem, mid, grid[j + 1]);
  }
  std::vector<double> out(n, kNaN);
  if (parallel) {
    kernels::flux_divergence_parallel(h, wmid, cell, eta, p, out);
  } else {
    kernels::flux_divergence_serial(h, wmid, cell, eta, p, out);
  }
  if (problem.is_ball()) out[0] = wmid[0] * phi((eta[1] - eta[0]) / h[0], p) / cell[0];
  return out;
}

std::vector<double> discrete_plap_radial(const BartaInput& input) {
  return discrete_plap_radial(input.grid, input.eta, input.problem);
}

std::vector<double> barta_ratio(const BartaInput& input) {
  const auto& t = input.grid;
  const auto& eta = input.eta;
  const std::size_t n = eta.size();
  check_grid(t, n);
  const auto& problem = input.problem;
  const double p = problem.p;
  auto flux = [&](std::size_t j) {
    return problem.weight(0.5 * (t[j] + t[j + 1])) * phi((eta[j + 1] - eta[j]) / (t[j + 1] - t[j]), p);
  };
  // Integral of f^{m-1} eta^{p-1} over [t_j, t_j + s (t_{j+1} - t_j)] with eta linear on the edge.
  static constexpr std::array<double, 4> x{-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                           0.8611363115940526};
  static constexpr std::array<double, 4> gw{0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                            0.3478548451374538};
  auto mass = [&](std::size_t j, double s0, double s1) {
    const double h = t[j + 1] - t[j];
    double acc = 0.0;
    for (int k = 0; k < 4; ++k) {
      const double s = 0.5 * (s0 + s1) + 0.5 * (s1 - s0) * x[k];
      const double e = eta[j] + (eta[j + 1] - eta[j]) * s;
      acc += gw[k] * problem.weight(t[j] + s * h) * std::pow(std::max(e, 0.0), p - 1.0);
    }
    return acc * 0.5 * (s1 - s0) * h;
  };
  std::vector<double> out(n, kNaN);
  for (std::size_t i = 0; i < n; ++i) {
    const bool pole = (i == 0);
    if (pole && !problem.is_ball()) continue;
    if (i + 1 == n) continue;
    const double div = flux(i) - (pole ? 0.0 : flux(i - 1));
    const double den = mass(i, 0.0, 0.5) + (pole ? 0.0 : mass(i - 1, 0.5, 1.0));
    out[i] = -div / den;
  }
  return out;
}

BoundCertificate barta_bound(const BartaInput& input) {
  const auto ratio = barta_ratio(input);
  const auto [i0, i1] = evaluation_range(input.grid, input.problem);
  double inf = std::numeric_limits<double>::infinity();
  for (std::size_t i = i0; i <= i1; ++i) {
    if (!(input.eta[i] > 0.0)) throw InvalidInput("Barta test function must be positive on the evaluation set");
    inf = std::min(inf, ratio[i]);
  }
  BoundCertificate cert;
  cert.kind = CertificateKind::Barta;
  cert.value = inf;
  cert.witness = "eta";
  cert.first = i0;
  cert.last = i1;
  cert.informative = inf > 0.0;
  cert.problem = problem_json(input.problem);
  return cert;
}

std::vector<double> picone_defect(const std::vector<double>& u_vals, const std::vector<double>& u_grads,
                                  const std::vector<double>& v_vals, const std::vector<double>& v_grads,
                                  double p) {
  const std::size_t n = u_vals.size();
  if (u_grads.size() != n || v_vals.size() != n || v_grads.size() != n) {
    throw InvalidInput("Picone inputs must have equal lengths");
  }
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = u_vals[i];
    const double v = v_vals[i];
    if (!(v > 0.0)) throw InvalidInput("Picone needs v > 0");
    if (u < 0.0) throw InvalidInput("Picone needs u >= 0");
    const double ratio = u / v;
    const double dv = std::abs(v_grads[i]);
    out[i] = std::pow(std::abs(u_grads[i]), p) + (p - 1.0) * std::pow(ratio, p) * std::pow(dv, p) -
             p * std::pow(ratio, p - 1.0) * phi(v_grads[i], p) * u_grads[i];
  }
  return out;
}

std::vector<double> radial_divergence(const RadialField& X, const RadialProblem& problem) {
  const std::size_t n = X.values.size();
  check_grid(X.grid, n);
  std::vector<double> out(n, kNaN);
  const std::size_t lo = std::max<std::size_t>(X.first, 1);
  const std::size_t hi = std::min(X.last, n - 2);
  for (std::size_t i = lo; i <= hi; ++i) {
    const double wl = problem.weight(X.grid[i - 1]);
    const double wr = problem.weight(X.grid[i + 1]);
    const double w = problem.weight(X.grid[i]);
    out[i] = (wr * X.values[i + 1] - wl * X.values[i - 1]) / ((X.grid[i + 1] - X.grid[i - 1]) * w);
  }
  return out;
}

BoundCertificate div_field_bound(const RadialField& X, const RadialProblem& problem) {
  const auto div = radial_divergence(X, problem);
  const double p = problem.p;
  const double q = problem.q();
  const std::size_t lo = std::max<std::size_t>(X.first, 1);
  const std::size_t hi = std::min(X.last, X.values.size() - 2);
  double inf = std::numeric_limits<double>::infinity();
  for (std::size_t i = lo; i <= hi; ++i) {
    if (!std::isfinite(X.values[i])) throw InvalidInput("vector field is not finite on the evaluation set");
    inf = std::min(inf, (1.0 - p) * std::pow(std::abs(X.values[i]), q) + div[i]);
  }
  BoundCertificate cert;
  cert.kind = CertificateKind::DivField;
  cert.value = inf;
  cert.witness = "X";
  cert.first = lo;
  cert.last = hi;
  cert.informative = inf > 0.0;
  cert.problem = problem_json(problem);
  return cert;
}

RadialField eigen_field(const RadialSolution& solution, double layer) {
  if (!solution.problem.is_ball()) throw InvalidInput("eigen field needs a ball solution");
  if (!(layer > 0.0 && layer < 1.0)) throw InvalidInput("boundary layer fraction must lie in (0, 1)");
  const double p = solution.problem.p;
  const std::size_t n = solution.grid.size();
  RadialField X;
  X.grid = solution.grid;
  X.values.assign(n, kNaN);
  const double cut = (1.0 - layer) * solution.radius();
  X.first = 1;
  X.last = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = solution.omega[i];
    if (!(w > 0.0)) continue;
    X.values[i] = -phi(solution.omega_prime[i], p) / std::pow(w, p - 1.0);
    if (solution.grid[i] <= cut) X.last = i;
  }
  if (X.last + 1 >= n || X.last < 2) throw DomainError("evaluation set reaches the Dirichlet endpoint");
  return X;
}

BoundCertificate div_sup_bound(const RadialField& X, const RadialProblem& problem) {
  const auto div = radial_divergence(X, problem);
  const std::size_t lo = std::max<std::size_t>(X.first, 1);
  const std::size_t hi = std::min(X.last, X.values.size() - 2);
  double inf = std::numeric_limits<double>::infinity();
  double sup = 0.0;
  for (std::size_t i = lo; i <= hi; ++i) {
    inf = std::min(inf, div[i]);
    sup = std::max(sup, std::abs(X.values[i]));
  }
  BoundCertificate cert;
  cert.kind = CertificateKind::DivSup;
  cert.witness = "X";
  cert.first = lo;
  cert.last = hi;
  cert.problem = problem_json(problem);
  cert.informative = inf > 0.0 && sup > 0.0 && std::isfinite(sup);
  cert.value = cert.informative ? std::pow(inf / sup / problem.p, problem.p) : 0.0;
  return cert;
}

Theorem17Result theorem17_bound(int m, double p, double c, double r, double h) {
  if (m < 2) throw InvalidInput("mean-curvature bound needs m >= 2");
  if (!(p > 1.0)) throw InvalidInput("exponent p must exceed 1");
  if (c > 0.0 && r >= std::numbers::pi / (2.0 * std::sqrt(c))) {
    throw DomainError("radius beyond pi/(2 sqrt(c))");
  }
  Theorem17Result res;
  res.bracket = (m - 2) * cot_c(c, r) - h;
  res.admissible = res.bracket > 0.0;
  res.value = res.admissible ? std::pow(res.bracket / p, p) : 0.0;
  res.inverse_reading_radius = kNaN;
  res.literal_reading_radius = kNaN;
  if (m > 2) {
    const double x = h / (m - 2);
    // cot_c(t) = x
    if (x > 0.0 || (c < 0.0 && x > std::sqrt(-c))) {
      if (c == 0.0) {
        res.inverse_reading_radius = 1.0 / x;
      } else if (c > 0.0) {
        res.inverse_reading_radius = std::atan(std::sqrt(c) / x) / std::sqrt(c);
      } else if (x > std::sqrt(-c)) {
        res.inverse_reading_radius = std::atanh(std::sqrt(-c) / x) / std::sqrt(-c);
      }
    } else if (x == 0.0 && c > 0.0) {
      res.inverse_reading_radius = std::numbers::pi / (2.0 * std::sqrt(c));
    } else {
      res.inverse_reading_radius = std::numeric_limits<double>::infinity();
    }
    if (x > 0.0 && (c <= 0.0 || x < conjugate_radius(c))) {
      const double dsc = ds_c(c, x);
      if (dsc != 0.0) res.literal_reading_radius = s_c(c, x) / dsc;
    }
  }
  return res;
}

BoundCertificate to_certificate(const Theorem17Result& result, int m, double p, double c, double r) {
  BoundCertificate cert;
  cert.kind = CertificateKind::Theorem17;
  cert.value = result.value;
  cert.witness = "mean-curvature bracket";
  cert.informative = result.admissible;
  cert.problem = {{"m", m}, {"p", p}, {"c", c}, {"r", r}};
  return cert;
}

double stability_functional(const DiscreteField& u, const std::vector<double>& potential, const Grid1D& grid,
                            double p) {
  if (potential.size() != grid.size()) throw InvalidInput("potential length does not match the grid");
  for (double v : potential) {
    if (!(v >= 0.0)) throw InvalidInput("potential must be nonnegative");
  }
  const auto mass = grid.lumped_mass();
  std::vector<double> weighted(mass.size());
  for (std::size_t i = 0; i < mass.size(); ++i) weighted[i] = mass[i] * potential[i];
  return p_energy(u, grid, p) - kernels::p_mass_serial(weighted, u, p);
}

bool stability_criterion_immersion(double supA_p, double k, double p, double lambda_model) {
  if (!(k > 0.0 && k <= 1.0)) throw InvalidInput("gradient bound k must lie in (0, 1]");
  if (!(p >= 2.0)) throw InvalidInput("stability criterion needs p >= 2");
  return supA_p <= std::pow(k, p - 2.0) * lambda_model;
}

MeanCurvatureThresholds meancurv_thresholds(int m, double p, double r) {
  if (!(r > 0.0)) throw InvalidInput("radius must be positive");
  return {(m - 1) / (p * r), (m - 2) / (p * r)};
}

bool stability_criterion_meancurv(double A_sup, int m, double p, double r) {
  return A_sup <= meancurv_thresholds(m, p, r).corollary;
}

double radius_lower_bound(double k, double p, double lambda_unit_ball, double lambda_omega) {
  if (!(k > 0.0 && k <= 1.0)) throw InvalidInput("gradient bound k must lie in (0, 1]");
  if (!(p >= 2.0)) throw InvalidInput("radius bound needs p >= 2");
  if (!(lambda_unit_ball > 0.0) || !(lambda_omega > 0.0)) throw InvalidInput("eigenvalues must be positive");
  return std::pow(std::pow(k, p - 2.0) * lambda_unit_ball / lambda_omega, 1.0 / p);
}

KazdanField kazdan_transform(const DiscreteField& phi_vals) {
  const std::size_t n = phi_vals.size();
  if (n < 3) throw InvalidInput("field needs at least 3 nodes");
  KazdanField k;
  k.v.resize(n);
  k.first = 0;
  k.last = n - 1;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = phi_vals[i];
    const bool end = (i == 0 || i + 1 == n);
    if (f > 0.0) {
      k.v[i] = -std::log(f);
    } else if (end && f == 0.0) {
      k.v[i] = std::numeric_limits<double>::infinity();
      if (i == 0) k.first = 1;
      else k.last = n - 2;
    } else {
      throw InvalidInput("Kazdan transform needs a positive function");
    }
  }
  return k;
}

std::pair<std::size_t, std::size_t> kazdan_evaluation_range(const std::vector<double>& grid,
                                                            const RadialProblem& problem) {
  return evaluation_range(grid, problem, kKazdanLayer, kPoleLayer);
}

std::vector<double> kazdan_source(const KazdanField& v, const std::vector<double>& grid,
                                  const RadialProblem& problem) {
  const std::size_t n = v.v.size();
  check_grid(grid, n);
  const double p = problem.p;
  const auto lap = discrete_plap_radial(grid, v.v, problem);
  std::vector<double> out(n, kNaN);
  for (std::size_t i = v.first; i <= v.last; ++i) {
    double grad;
    if (i == 0) {
      if (!problem.is_ball()) continue;
      grad = 0.0;
    } else if (i + 1 == n) {
      continue;
    } else {
      grad = (v.v[i + 1] - v.v[i - 1]) / (grid[i + 1] - grid[i - 1]);
    }
    const double val = lap[i] - (p - 1.0) * std::pow(std::abs(grad), p);
    if (std::isfinite(val)) out[i] = val;
  }
  return out;
}

}  // namespace ptone
