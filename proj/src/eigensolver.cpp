#include <cstdio>
#include <cstdlib>
#include "ptone/eigensolver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "ptone/errors.hpp"
#include "ptone/ode.hpp"

namespace ptone {

namespace {

using State2 = ode::State<2>;

// Pole start-up interval as a fraction of the radius.
constexpr double kPoleFraction = 1e-4;
// Knot spacing cap as a fraction of the domain length.
constexpr double kKnotFraction = 1.0 / 1024.0;

// 8-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 8> kGaussX = {-0.9602898564975363, -0.7966664774136267,
                                           -0.5255324099163290, -0.1834346424956498,
                                           0.1834346424956498,  0.5255324099163290,
                                           0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kGaussW = {0.1012285362903763, 0.2223810344533745,
                                           0.3137066458778873, 0.3626837833783620,
                                           0.3626837833783620, 0.3137066458778873,
                                           0.2223810344533745, 0.1012285362903763};

}  // namespace

// ---------------------------------------------------------------------------

RadialProblem RadialProblem::ball(double p, int m, WarpingProfile profile, double r) {
  RadialProblem pr{p, m, std::move(profile), Ball{r}};
  pr.validate();
  return pr;
}

RadialProblem RadialProblem::annulus(double p, int m, WarpingProfile profile, double a, double b) {
  RadialProblem pr{p, m, std::move(profile), Annulus{a, b}};
  pr.validate();
  return pr;
}

RadialProblem RadialProblem::space_form_ball(double p, int m, double c, double r) {
  return ball(p, m, WarpingProfile::space_form(c), r);
}

double RadialProblem::left() const {
  return is_ball() ? 0.0 : std::get<Annulus>(domain).a;
}

double RadialProblem::right() const {
  return is_ball() ? std::get<Ball>(domain).r : std::get<Annulus>(domain).b;
}

double RadialProblem::weight(double t) const {
  if (m == 1) return 1.0;
  const double f = profile.f(t);
  return m == 2 ? f : std::pow(f, m - 1);
}

void RadialProblem::validate() const {
  if (!std::isfinite(p) || p < kMinExponent || p > kMaxExponent) {
    throw InvalidInput("exponent p must lie in [1.05, 16]");
  }
  if (m < 1) throw InvalidInput("dimension m must be >= 1");
  if (is_ball()) {
    const double r = std::get<Ball>(domain).r;
    if (!(r > 0.0) || !std::isfinite(r)) throw InvalidInput("ball radius must be positive");
    if (r > profile.r_max()) throw DomainError("ball radius exceeds the profile domain");
    if (profile.kind() != WarpingProfile::Kind::Tabulated && profile.model_curvature() > 0.0 &&
        r >= conjugate_radius(profile.model_curvature())) {
      throw DomainError("ball radius at or beyond the conjugate point");
    }
  } else {
    const auto [a, b] = std::get<Annulus>(domain);
    if (!(b > a) || !(a >= 0.0)) throw InvalidInput("annulus needs 0 <= a < b");
    if (a == 0.0 && m > 1) throw InvalidInput("annulus with a = 0 requires m = 1");
    if (m > 1 && b > profile.r_max()) throw DomainError("annulus exceeds the profile domain");
  }
}

// ---------------------------------------------------------------------------

class DenseTrajectory {
 public:
  DenseTrajectory(RadialProblem problem, double lambda, double pole_t0,
                  std::vector<ode::Knot<2>> knots)
      : problem_(std::move(problem)), lambda_(lambda), t0_(pole_t0), knots_(std::move(knots)) {
    times_.reserve(knots_.size());
    for (const auto& k : knots_) times_.push_back(k.t);
    g_left_ = problem_.is_ball() ? 0.0 : knots_.front().y[1];
  }

  void set_scale(double s) { scale_ = s; }
  [[nodiscard]] double scale() const { return scale_; }

  [[nodiscard]] State2 rhs(double t, const State2& y) const {
    const double w = problem_.weight(t);
    return {phi_inv(y[1] / w, problem_.p), -lambda_ * w * phi(y[0], problem_.p)};
  }

  [[nodiscard]] State2 raw_state(double t) const {
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    std::size_t k = it == times_.begin() ? 0 : static_cast<std::size_t>(it - times_.begin()) - 1;
    k = std::min(k, knots_.size() - 1);
    const double dt = t - knots_[k].t;
    if (dt == 0.0) return knots_[k].y;
    auto f = [this](double tt, const State2& y) { return rhs(tt, y); };
    return ode::dopri_step<2>(f, knots_[k].t, knots_[k].y, dt, nullptr);
  }

  [[nodiscard]] PointState eval(double t) const {
    const double p = problem_.p;
    const double m = problem_.m;
    PointState s;
    if (problem_.is_ball() && t < t0_) {
      // Leading-order series at the pole.
      const double k = std::pow(lambda_ / m, 1.0 / (p - 1.0));
      if (t <= 0.0) {
        s.omega = 1.0;
        return s;
      }
      const double tq = std::pow(t, 1.0 / (p - 1.0));
      s.omega = 1.0 - (p - 1.0) / p * k * tq * t;
      s.omega_prime = -k * tq;
      s.omega_second = -k / (p - 1.0) * tq / t;
      s.flux = pole_flux(t);
      return s;
    }
    const State2 y = raw_state(t);
    const double w = problem_.weight(t);
    const double u = y[1] / w;
    s.omega = scale_ * y[0];
    s.omega_prime = scale_ * phi_inv(u, p);
    // w'' = phi_inv'(u) u',  u' = G'/W - G W'/W^2.
    double dw = 0.0;
    if (problem_.m > 1) {
      const WarpValues fv = problem_.profile.eval(t);
      dw = (m - 1.0) * std::pow(fv.f, m - 2.0) * fv.df;
    }
    const double dg = -lambda_ * w * phi(y[0], p);
    const double du = dg / w - y[1] * dw / (w * w);
    const double au = std::abs(u);
    s.omega_second = au > 0.0 ? scale_ * std::pow(au, (2.0 - p) / (p - 1.0)) * du / (p - 1.0)
                              : 0.0;
    s.flux = std::pow(scale_, p - 1.0) * (g_left_ - y[1]) / lambda_;
    return s;
  }

  /// F(t) = int_0^t W w^{p-1} ds with the series start, by Gauss-Legendre.
  [[nodiscard]] double pole_flux(double t) const {
    const double p = problem_.p;
    const double k = std::pow(lambda_ / problem_.m, 1.0 / (p - 1.0));
    double acc = 0.0;
    for (std::size_t i = 0; i < kGaussX.size(); ++i) {
      const double s = 0.5 * t * (kGaussX[i] + 1.0);
      const double om = 1.0 - (p - 1.0) / p * k * std::pow(s, p / (p - 1.0));
      acc += kGaussW[i] * problem_.weight(s) * std::pow(om, p - 1.0);
    }
    return 0.5 * t * acc;
  }

  [[nodiscard]] const std::vector<ode::Knot<2>>& knots() const { return knots_; }

 private:
  RadialProblem problem_;
  double lambda_;
  double t0_;
  std::vector<ode::Knot<2>> knots_;
  std::vector<double> times_;
  double g_left_ = 0.0;
  double scale_ = 1.0;
};

namespace {

struct RunResult {
  std::shared_ptr<DenseTrajectory> dense;
  std::optional<double> first_zero;
  std::size_t steps = 0;
};

RunResult run_trajectory(const RadialProblem& problem, double lambda, bool stop_at_zero) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidInput("trial eigenvalue must be > 0");
  const double a = problem.left();
  const double b = problem.right();
  const double p = problem.p;

  double t_start = a;
  State2 y0{};
  double pole_t0 = 0.0;
  // Temporary evaluator for the pole flux and the right-hand side.
  DenseTrajectory proto(problem, lambda, 0.0, {{a, {0.0, 0.0}}});
  if (problem.is_ball()) {
    pole_t0 = kPoleFraction * b;
    t_start = pole_t0;
    const double k = std::pow(lambda / problem.m, 1.0 / (p - 1.0));
    const double om = 1.0 - (p - 1.0) / p * k * std::pow(pole_t0, p / (p - 1.0));
    y0 = {om, -lambda * proto.pole_flux(pole_t0)};
  } else {
    y0 = {0.0, 1.0};
  }

  ode::Options opt;
  opt.rtol = 1e-10;
  opt.atol = 1e-10;
  opt.h_max = (b - a) * kKnotFraction;
  opt.h_init = problem.is_ball() ? pole_t0 : opt.h_max * 1e-3;
  auto rhs = [&proto](double t, const State2& y) { return proto.rhs(t, y); };
  auto res = ode::integrate<2>(rhs, t_start, y0, b, opt,
                               stop_at_zero ? std::optional<std::size_t>(0) : std::nullopt,
                               1e-12 * b);

  RunResult out;
  out.first_zero = res.first_zero;
  out.steps = res.steps;
  out.dense = std::make_shared<DenseTrajectory>(problem, lambda, pole_t0, std::move(res.knots));
  return out;
}

bool zero_before_right(const RadialProblem& problem, double lambda) {
  const auto r = run_trajectory(problem, lambda, true);
  return r.first_zero.has_value() && *r.first_zero < problem.right();
}

// Barta value of a cosine / sine test profile, used only to seed the bracket.
double barta_seed(const RadialProblem& problem) {
  const double a = problem.left();
  const double b = problem.right();
  const double L = b - a;
  const double p = problem.p;
  double best = std::numeric_limits<double>::infinity();
  constexpr int kNodes = 64;
  for (int i = 1; i < kNodes; ++i) {
    const double t = a + L * i / kNodes;
    double eta, deta, d2eta;
    if (problem.is_ball()) {
      const double k = std::numbers::pi / (2.0 * L);
      eta = std::cos(k * t);
      deta = -k * std::sin(k * t);
      d2eta = -k * k * eta;
    } else {
      const double k = std::numbers::pi / L;
      eta = std::sin(k * (t - a));
      deta = k * std::cos(k * (t - a));
      d2eta = -k * k * eta;
    }
    double drift = 0.0;
    if (problem.m > 1) {
      const WarpValues fv = problem.profile.eval(t);
      drift = (problem.m - 1.0) * fv.df / fv.f;
    }
    if (deta == 0.0) continue;
    const double lap = std::pow(std::abs(deta), p - 2.0) * ((p - 1.0) * d2eta + drift * deta);
    const double val = -lap / std::pow(eta, p - 1.0);
    if (std::isfinite(val)) best = std::min(best, val);
  }
  return best;
}

RadialSolution finish(const RadialProblem& problem, double lambda, int iterations,
                      const SolveOptions& opt) {
  auto run = run_trajectory(problem, lambda, false);
  RadialSolution sol;
  sol.problem = problem;
  sol.lambda = lambda;
  sol.iterations = iterations;
  const std::size_t n = std::max<std::size_t>(opt.grid_size, 18);
  sol.grid = uniform_nodes(problem.left(), problem.right(), n);
  if (!problem.is_ball()) {
    double mx = 0.0;
    for (const double t : sol.grid) mx = std::max(mx, run.dense->eval(t).omega);
    if (!(mx > 0.0)) throw ConvergenceError("annulus eigenfunction vanished");
    run.dense->set_scale(1.0 / mx);
  }
  sol.dense = run.dense;
  sol.omega.resize(n);
  sol.omega_prime.resize(n);
  sol.flux.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const PointState s = sol.dense->eval(sol.grid[i]);
    sol.omega[i] = s.omega;
    sol.omega_prime[i] = s.omega_prime;
    sol.flux[i] = s.flux;
  }
  if (std::abs(sol.omega.back()) > kBoundaryTol || (!problem.is_ball() && std::abs(sol.omega.front()) > kBoundaryTol)) {
    throw ConvergenceError("Dirichlet condition not met within tolerance");
  }
  sol.omega.back() = 0.0;
  if (!problem.is_ball()) sol.omega.front() = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (!(sol.omega[i] > 0.0)) throw ConvergenceError("eigenfunction changes sign inside the domain");
    if (problem.is_ball() && sol.omega_prime[i] > 1e-10) throw ConvergenceError("ball eigenfunction is not decreasing");
  }
  sol.residual = eigen_equation_residual(sol, problem);
  return sol;
}

RadialSolution shoot(const RadialProblem& problem, const SolveOptions& opt) {
  problem.validate();
  if (!(opt.tol > 0.0)) throw InvalidInput("tolerance must be positive");
  // Half the cosine-profile Barta value, floored so that degenerate seeds
  // (p > 2 makes the cosine quotient vanish at the pole) stay within the
  // doubling budget.
  const double L = problem.right() - problem.left();
  const double floor = 1e-3 / std::pow(L, problem.p);
  double lo = 0.5 * barta_seed(problem);
  if (!(lo > floor) || !std::isfinite(lo)) lo = floor;

  int guard = 0;
  while (zero_before_right(problem, lo)) {
    lo *= 0.5;
    if (++guard > opt.max_doublings) throw ConvergenceError("could not find a zero-free lower bracket");
  }
  double hi = 2.0 * lo;
  guard = 0;
  while (!zero_before_right(problem, hi)) {
    lo = hi;
    hi *= 2.0;
    if (++guard > opt.max_doublings) throw ConvergenceError("could not bracket the eigenvalue");
  }
  int iter = 0;
  while (hi - lo > 2.0 * opt.tol * lo) {
    if (++iter > opt.max_iter) throw ConvergenceError("bisection did not converge");
    const double mid = 0.5 * (lo + hi);
    if (zero_before_right(problem, mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return finish(problem, 0.5 * (lo + hi), iter, opt);
}

}  // namespace

Trajectory integrate_profile(const RadialProblem& problem, double lambda) {
  problem.validate();
  auto run = run_trajectory(problem, lambda, true);
  Trajectory tr;
  tr.first_zero = run.first_zero;
  tr.steps = run.steps;
  const auto& knots = run.dense->knots();
  if (problem.is_ball()) {
    tr.grid.push_back(0.0);
    tr.omega.push_back(1.0);
    tr.omega_prime.push_back(0.0);
    tr.flux.push_back(0.0);
  }
  for (const auto& k : knots) {
    const PointState s = run.dense->eval(k.t);
    tr.grid.push_back(k.t);
    tr.omega.push_back(s.omega);
    tr.omega_prime.push_back(s.omega_prime);
    tr.flux.push_back(s.flux);
  }
  tr.dense = run.dense;
  return tr;
}

RadialSolution solve_ball_eigenvalue(const RadialProblem& problem, const SolveOptions& opt) {
  if (!problem.is_ball()) throw InvalidInput("solve_ball_eigenvalue needs a Ball domain");
  return shoot(problem, opt);
}

RadialSolution solve_annulus_eigenvalue(const RadialProblem& problem, const SolveOptions& opt) {
  if (problem.is_ball()) throw InvalidInput("solve_annulus_eigenvalue needs an Annulus domain");
  return shoot(problem, opt);
}

RadialSolution solve_eigenvalue(const RadialProblem& problem, const SolveOptions& opt) {
  return shoot(problem, opt);
}

PointState RadialSolution::at(double t) const {
  if (!dense) throw InvalidInput("solution has no dense trajectory");
  if (t < problem.left() || t > problem.right()) throw DomainError("evaluation outside the domain");
  return dense->eval(t);
}

double eigen_equation_residual(const RadialSolution& solution, const RadialProblem& problem) {
  const auto& t = solution.grid;
  const std::size_t n = t.size();
  if (n < 18) throw InvalidInput("residual needs >= 16 interior nodes");
  const double p = problem.p;
  const double lambda = solution.lambda;
  const double h = (t.back() - t.front()) / static_cast<double>(n - 1);
  std::vector<double> w(n), g(n);
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = problem.weight(t[i]);
    g[i] = w[i] * phi(solution.omega_prime[i], p);
    scale = std::max(scale, w[i] * std::pow(std::abs(solution.omega[i]), p - 1.0));
  }
  scale *= lambda;
  // Ball: the flux has parity (-1)^m about the pole, which supplies g_{-1}.
  const bool ball = problem.is_ball();
  const double parity = (problem.m % 2 == 0) ? 1.0 : -1.0;
  auto g_at = [&](std::ptrdiff_t i) {
    if (i < 0) return parity * g[static_cast<std::size_t>(-i)];
    return g[static_cast<std::size_t>(i)];
  };
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const auto k = static_cast<std::ptrdiff_t>(i);
    double dg;
    if ((i >= 2 || ball) && i + 2 < n) {
      dg = (-g_at(k + 2) + 8.0 * g_at(k + 1) - 8.0 * g_at(k - 1) + g_at(k - 2)) / (12.0 * h);
    } else if (i + 2 >= n) {
      dg = (3.0 * g_at(k + 1) + 10.0 * g_at(k) - 18.0 * g_at(k - 1) + 6.0 * g_at(k - 2) - g_at(k - 3)) /
           (12.0 * h);
    } else {
      dg = (-3.0 * g_at(k - 1) - 10.0 * g_at(k) + 18.0 * g_at(k + 1) - 6.0 * g_at(k + 2) + g_at(k + 3)) /
           (12.0 * h);
    }
    const double r = dg + lambda * w[i] * phi(solution.omega[i], p);
    worst = std::max(worst, std::abs(r));
  }
  return worst / scale;
}

double scaled_eigenvalue(double lambda_unit, double r, double p) {
  if (!(r > 0.0)) throw InvalidInput("radius must be positive");
  return std::pow(r, -p) * lambda_unit;
}

double scaled_eigenvalue(double lambda_unit, double r, double p, const WarpingProfile& profile) {
  if (!profile.is_flat()) throw InvalidInput("scaling law applies to flat profiles only");
  return scaled_eigenvalue(lambda_unit, r, p);
}

double interval_eigenvalue(double p, double r) {
  const double pi_p = 2.0 * std::numbers::pi / (p * std::sin(std::numbers::pi / p));
  return (p - 1.0) * std::pow(pi_p / (2.0 * r), p);
}

nlohmann::json to_json(const RadialProblem& problem) {
  nlohmann::json j;
  j["p"] = problem.p;
  j["m"] = problem.m;
  j["profile"] = problem.profile.label();
  if (!problem.is_ball()) j["a"] = problem.left();
  j["r"] = problem.right();
  return j;
}

nlohmann::json to_json(const RadialSolution& s) {
  nlohmann::json j;
  j["p"] = s.problem.p;
  j["m"] = s.problem.m;
  j["profile"] = s.problem.profile.label();
  if (!s.problem.is_ball()) j["a"] = s.problem.left();
  j["r"] = s.problem.right();
  j["lambda"] = s.lambda;
  j["residual"] = s.residual;
  j["iterations"] = s.iterations;
  j["grid"] = s.grid;
  j["omega"] = s.omega;
  j["omega_prime"] = s.omega_prime;
  return j;
}

}  // namespace ptone
