#include "ptone/critical_radius.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ptone/csv.hpp"
#include "ptone/errors.hpp"
#include "ptone/numeric.hpp"

namespace ptone {
namespace {

void check_curvature(double c) {
  if (c != 0.0 && c != 1.0 && c != -1.0) throw InvalidInput("critical radius needs c in {-1, 0, 1}");
}

double a_coef(double lambda, double p, int m) { return lambda / (p + m - 2.0); }

double W_from(const PointState& s, double t, double c, double lambda, double p, int m) {
  if (t <= 0.0) return lambda * (2.0 - p) / m;
  return (p + m - 2.0) * cot_c(c, t) * phi(s.omega_prime, p) + lambda * std::pow(std::abs(s.omega), p - 1.0);
}

double lhs_from(const PointState& s, double t, double c, double lambda, double p, int m) {
  if (t <= 0.0) return 0.0;
  const auto v = weight_V_derivatives(c, t, lambda, p, m);
  return std::pow(s_c(c, t), m - 1) * (v.dv * std::pow(std::abs(s.omega), p - 1.0) - v.v * phi(s.omega_prime, p));
}

double lhs_derivative_from(const PointState& s, double t, double c, double lambda, double p, int m) {
  const auto v = weight_V_derivatives(c, t, lambda, p, m);
  if (t <= 0.0) return m > 1 ? 0.0 : v.d2v + lambda * v.v;
  const double w = std::abs(s.omega);
  const double wp = s.omega_prime;
  const double bracket = ((m - 1) * cot_c(c, t) * v.dv + v.d2v + lambda * v.v) * std::pow(w, p - 1.0) +
                         (p - 1.0) * v.dv * std::pow(w, p - 2.0) * wp - v.dv * phi(wp, p);
  return std::pow(s_c(c, t), m - 1) * bracket;
}

double phi0_from(const PointState& s, double t, double lambda, double p, int m) {
  const double w = std::abs(s.omega);
  const double d = std::abs(s.omega_prime);
  return (p - 2.0) * std::pow(w, p - 1.0) + a_coef(lambda, p, m) * t * t * std::pow(w, p - 1.0) +
         (p - 1.0) * std::pow(w, p - 2.0) * d - std::pow(d, p - 1.0);
}

double phi1_from(const PointState& s, double t, double lambda, double p, int m) {
  const auto k = spherical_constants(lambda, p, m);
  const double tau = std::tan(t);
  const double w = std::abs(s.omega);
  const double d = std::abs(s.omega_prime);
  return (k.c1 + k.c2 * tau * tau) * std::pow(w, p - 1.0) +
         k.c3 * tau * (std::pow(d, p - 1.0) / (p - 1.0) - std::pow(w, p - 2.0) * d);
}

void check_ball(const RadialSolution& solution) {
  if (!solution.problem.is_ball()) throw InvalidInput("critical radius needs a ball solution");
}

}  // namespace

double restriction_W(double t, const RadialSolution& solution, double c) {
  check_ball(solution);
  const auto& pr = solution.problem;
  if (t < 0.0 || t > solution.radius()) throw DomainError("W evaluated outside the ball");
  const PointState s = t > 0.0 ? solution.at(t) : PointState{1.0, 0.0, 0.0, 0.0};
  return W_from(s, t, c, solution.lambda, pr.p, pr.m);
}

WeightDerivatives weight_V_derivatives(double c, double t, double lambda, double p, int m) {
  check_curvature(c);
  const double a = a_coef(lambda, p, m);
  WeightDerivatives d;
  if (c == 0.0) {
    d.v = std::exp(-a * t * t / 2.0);
    d.dv = -a * t * d.v;
    d.d2v = (a * a * t * t - a) * d.v;
  } else if (c == 1.0) {
    if (t >= std::numbers::pi / 2.0) {
      const double inf = std::numeric_limits<double>::infinity();
      return {inf, inf, inf};
    }
    const double tn = std::tan(t);
    const double cs = std::cos(t);
    d.v = std::pow(cs, -a);
    d.dv = a * tn * d.v;
    d.d2v = (a / (cs * cs) + a * a * tn * tn) * d.v;
  } else {
    const double th = std::tanh(t);
    const double ch = std::cosh(t);
    d.v = std::pow(ch, -a);
    d.dv = -a * th * d.v;
    d.d2v = (-a / (ch * ch) + a * a * th * th) * d.v;
  }
  return d;
}

double weight_V(double c, double t, double lambda, double p, int m) {
  return weight_V_derivatives(c, t, lambda, p, m).v;
}

double phi0(double s, const RadialSolution& solution, double lambda) {
  check_ball(solution);
  const PointState st = s > 0.0 ? solution.at(s) : PointState{1.0, 0.0, 0.0, 0.0};
  return phi0_from(st, s, lambda, solution.problem.p, solution.problem.m);
}

SphericalConstants spherical_constants(double lambda, double p, int m) {
  const double k = p + m - 2.0;
  return {lambda * (p + 2.0 * m - 2.0) / k, lambda * (1.0 / k + lambda / (k * k)), lambda / k};
}

double phi1(double s, const RadialSolution& solution, double lambda) {
  check_ball(solution);
  if (s >= std::numbers::pi / 2.0) throw DomainError("phi1 needs s < pi/2");
  const PointState st = s > 0.0 ? solution.at(s) : PointState{1.0, 0.0, 0.0, 0.0};
  return phi1_from(st, s, lambda, solution.problem.p, solution.problem.m);
}

double phi1_barrier(double s, const RadialSolution& solution, double lambda) {
  check_ball(solution);
  if (s >= std::numbers::pi / 2.0) throw DomainError("phi1 needs s < pi/2");
  const double p = solution.problem.p;
  const auto k = spherical_constants(lambda, p, solution.problem.m);
  const PointState st = s > 0.0 ? solution.at(s) : PointState{1.0, 0.0, 0.0, 0.0};
  const double tau = std::tan(s);
  return (k.c1 + k.c2 * tau * tau - k.c3 * (p - 2.0) / (p - 1.0) * tau) * std::pow(std::abs(st.omega), p - 1.0);
}

double lhs_expression(double c, double t, const RadialSolution& solution, double lambda) {
  check_ball(solution);
  const PointState s = t > 0.0 ? solution.at(t) : PointState{1.0, 0.0, 0.0, 0.0};
  return lhs_from(s, t, c, lambda, solution.problem.p, solution.problem.m);
}

double lhs_derivative(double c, double t, const RadialSolution& solution, double lambda) {
  check_ball(solution);
  const PointState s = t > 0.0 ? solution.at(t) : PointState{1.0, 0.0, 0.0, 0.0};
  return lhs_derivative_from(s, t, c, lambda, solution.problem.p, solution.problem.m);
}

double flateq_rhs_integrand(double s, const RadialSolution& solution, double lambda) {
  check_ball(solution);
  const double p = solution.problem.p;
  const int m = solution.problem.m;
  const PointState st = s > 0.0 ? solution.at(s) : PointState{1.0, 0.0, 0.0, 0.0};
  const auto v = weight_V_derivatives(0.0, s, lambda, p, m);
  const double a = a_coef(lambda, p, m);
  const double w = std::abs(st.omega);
  const double wp = st.omega_prime;
  const double sm1 = std::pow(s, m - 1);
  const double G = (p - 1.0) * std::pow(w, p - 2.0) - std::pow(std::abs(wp), p - 2.0);
  return a * (p - 2.0) * sm1 * std::pow(w, p - 1.0) * v.v + a * a * sm1 * s * s * std::pow(w, p - 1.0) * v.v +
         sm1 * wp * G * v.dv;
}

SphericalCheck verify_spherical_positivity(const RadialSolution& solution, double lambda, double r) {
  check_ball(solution);
  if (r >= std::numbers::pi / 2.0) throw DomainError("spherical positivity needs r < pi/2");
  if (r > solution.radius()) throw DomainError("radius beyond the solved ball");
  const double p = solution.problem.p;
  const int m = solution.problem.m;
  const auto k = spherical_constants(lambda, p, m);
  SphericalCheck out;
  out.margin = std::numeric_limits<double>::infinity();
  out.barrier_margin = std::numeric_limits<double>::infinity();
  const auto& t = solution.grid;
  for (std::size_t i = 1; i + 1 < t.size(); ++i) {
    if (t[i] >= r) break;
    const PointState s{solution.omega[i], solution.omega_prime[i], 0.0, 0.0};
    out.margin = std::min(out.margin, phi1_from(s, t[i], lambda, p, m));
    const double tau = std::tan(t[i]);
    out.barrier_margin = std::min(out.barrier_margin, (k.c1 + k.c2 * tau * tau - k.c3 * (p - 2.0) / (p - 1.0) * tau) *
                                                          std::pow(std::abs(s.omega), p - 1.0));
  }
  out.positive = out.margin > 0.0;
  return out;
}

std::string to_string(RStarMethod method) {
  return method == RStarMethod::DirectW ? "Direct-W" : "Integral-LHS";
}

CriticalRadiusReport compute_r_star(double c, const RadialSolution& solution, const CriticalRadiusOptions& opt) {
  check_curvature(c);
  check_ball(solution);
  const auto& pr = solution.problem;
  const double p = pr.p;
  const int m = pr.m;
  const double r = solution.radius();
  const double lambda = solution.lambda;
  if (p < 2.0) throw InvalidInput("critical radius is defined for p >= 2 only");
  if (!pr.profile.is_space_form() || pr.profile.model_curvature() != c) {
    throw InvalidInput("critical radius needs the space-form solution of the same curvature");
  }
  if (c == 1.0 && r >= std::numbers::pi / 2.0) throw DomainError("spherical case needs r < pi/2");
  if (opt.scan_nodes < 16) throw InvalidInput("scan needs at least 16 nodes");

  CriticalRadiusReport rep;
  rep.c = c;
  rep.p = p;
  rep.m = m;
  rep.r = r;
  rep.lambda = lambda;
  rep.scan_nodes = opt.scan_nodes;
  const auto k = spherical_constants(lambda, p, m);
  rep.C1 = k.c1;
  rep.C2 = k.c2;
  rep.C3 = k.c3;
  rep.C4 = (p - 2.0) / (p + m - 2.0);

  const std::size_t n = opt.scan_nodes;
  std::vector<double> ts(n), W(n), lhs(n);
  std::vector<PointState> states(n);
  for (std::size_t i = 1; i < n; ++i) {
    ts[i] = r * static_cast<double>(i) / static_cast<double>(n - 1);
    states[i] = solution.at(ts[i]);
    W[i] = W_from(states[i], ts[i], c, lambda, p, m);
    lhs[i] = lhs_from(states[i], ts[i], c, lambda, p, m);
  }
  states[0] = PointState{1.0, 0.0, 0.0, 0.0};
  W[0] = W_from(states[0], 0.0, c, lambda, p, m);

  rep.r_star = r;
  rep.method = RStarMethod::IntegralLHS;
  nlohmann::json diag;
  if (p == 2.0) {
    diag["rule"] = "p = 2";
  } else if (c == 1.0) {
    const auto chk = verify_spherical_positivity(solution, lambda, r);
    diag["spherical_positive"] = chk.positive;
    diag["spherical_margin"] = chk.margin;
    diag["spherical_barrier_margin"] = chk.barrier_margin;
    if (!chk.positive) {
      rep.method = RStarMethod::DirectW;
      for (std::size_t i = 1; i < n; ++i) {
        if (W[i] > kWTol * lambda) {
          rep.r_star = ts[i];
          break;
        }
      }
    }
  } else {
    for (std::size_t i = 1; i < n; ++i) {
      if (lhs[i] <= 0.0) {
        rep.r_star = ts[i];
        break;
      }
    }
  }

  double wmax = -std::numeric_limits<double>::infinity();
  double wmax_all = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < n; ++i) {
    wmax_all = std::max(wmax_all, W[i] / lambda);
    if (ts[i] < rep.r_star) wmax = std::max(wmax, W[i] / lambda);
  }
  rep.max_W_scaled = wmax;
  rep.min_margin = -wmax;
  if (wmax > kWTol) {
    throw VerificationError("restriction W is positive inside the certified radius");
  }

  const std::size_t ns = std::max<std::size_t>(opt.samples, 2);
  for (std::size_t j = 1; j <= ns; ++j) {
    const double t = r * static_cast<double>(j) / static_cast<double>(ns);
    const PointState s = solution.at(t);
    rep.sample_t.push_back(t);
    rep.W_samples.push_back(W_from(s, t, c, lambda, p, m));
    rep.LHS_samples.push_back(lhs_from(s, t, c, lambda, p, m));
    double ph;
    if (c == 0.0) {
      ph = phi0_from(s, t, lambda, p, m);
    } else if (c == 1.0) {
      ph = t < std::numbers::pi / 2.0 ? phi1_from(s, t, lambda, p, m) : std::nan("");
    } else {
      ph = lhs_derivative_from(s, t, c, lambda, p, m) /
           (std::pow(s_c(c, t), m - 1) * weight_V(c, t, lambda, p, m));
    }
    rep.Phi_samples.push_back(ph);
  }

  diag["max_W_scaled_whole_ball"] = wmax_all;
  diag["W_pole_limit_scaled"] = (2.0 - p) / m;
  diag["C4_with_lambda"] = lambda * (p - 2.0) / (p + m - 2.0);
  if (c == 0.0) {
    // Displayed integrand: first zero, and the running integral with V_0.
    double first_zero = std::nan("");
    double psi = 0.0;
    double psi_min = std::numeric_limits<double>::infinity();
    double psi_first_nonpos = std::nan("");
    double prev = std::pow(0.0, m - 1) * phi0_from(states[0], 0.0, lambda, p, m) * weight_V(0.0, 0.0, lambda, p, m);
    for (std::size_t i = 1; i < n; ++i) {
      const double ph = phi0_from(states[i], ts[i], lambda, p, m);
      if (std::isnan(first_zero) && ph <= 0.0) first_zero = ts[i];
      const double cur = std::pow(ts[i], m - 1) * ph * weight_V(0.0, ts[i], lambda, p, m);
      psi += 0.5 * (prev + cur) * (ts[i] - ts[i - 1]);
      prev = cur;
      psi_min = std::min(psi_min, psi);
      if (std::isnan(psi_first_nonpos) && psi <= 0.0) psi_first_nonpos = ts[i];
    }
    const double d = std::abs(states[n - 1].omega_prime);
    diag["phi0_first_zero"] = std::isnan(first_zero) ? nlohmann::json(nullptr) : nlohmann::json(first_zero);
    diag["psi0_min"] = psi_min;
    diag["psi0_first_nonpositive"] =
        std::isnan(psi_first_nonpos) ? nlohmann::json(nullptr) : nlohmann::json(psi_first_nonpos);
    diag["phi0_at_r_exponent_p_minus_1"] = -std::pow(d, p - 1.0);
    diag["phi0_at_r_exponent_p_minus_2"] = -std::pow(d, p - 2.0);
  }
  rep.diagnostics = diag;
  return rep;
}

nlohmann::json to_json(const CriticalRadiusReport& rep) {
  return {{"c", rep.c},
          {"p", rep.p},
          {"m", rep.m},
          {"r", rep.r},
          {"lambda", rep.lambda},
          {"r_star", rep.r_star},
          {"method", to_string(rep.method)},
          {"scan_nodes", rep.scan_nodes},
          {"max_W_scaled", rep.max_W_scaled},
          {"min_margin", rep.min_margin},
          {"constants", {{"C1", rep.C1}, {"C2", rep.C2}, {"C3", rep.C3}, {"C4", rep.C4}}},
          {"samples", {{"t", rep.sample_t}, {"W", rep.W_samples}, {"LHS", rep.LHS_samples}, {"Phi", rep.Phi_samples}}},
          {"diagnostics", rep.diagnostics}};
}

std::string csv_header_critical() { return "c,p,m,r,lambda,r_star,min_margin"; }

std::vector<std::string> csv_row(const CriticalRadiusReport& rep) {
  return {csv::num(rep.c), csv::num(rep.p), std::to_string(rep.m), csv::num(rep.r),
          csv::num(rep.lambda), csv::num(rep.r_star), csv::num(rep.min_margin)};
}

}  // namespace ptone
