#include "ptone/harness/acceptance.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>

#include <fmt/format.h>

#include "ptone/bounds.hpp"
#include "ptone/critical_radius.hpp"
#include "ptone/eigensolver.hpp"
#include "ptone/errors.hpp"
#include "ptone/harness/commands.hpp"
#include "ptone/harness/parallel.hpp"
#include "ptone/rayleigh.hpp"
#include "ptone/surfaces.hpp"

namespace ptone::harness {
namespace {

using Clock = std::chrono::steady_clock;
constexpr double kPi = std::numbers::pi;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

/// Collects failed checks and a few summary notes.
class Verdict {
 public:
  void require(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    ++failed_;
    if (failures_.size() < 4) failures_.push_back(what);
  }
  void note(std::string s) { notes_.push_back(std::move(s)); }

  CriterionResult finish() const {
    CriterionResult r;
    r.pass = failed_ == 0 && checks_ > 0;
    std::string d = fmt::format("{}/{} checks", checks_ - failed_, checks_);
    for (const auto& n : notes_) d += "; " + n;
    if (failed_ > 0) {
      d += "; failed:";
      for (const auto& f : failures_) d += " [" + f + "]";
      if (failed_ > failures_.size()) d += fmt::format(" (+{} more)", failed_ - failures_.size());
    }
    r.detail = d;
    return r;
  }

 private:
  std::size_t checks_ = 0;
  std::size_t failed_ = 0;
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
};

std::string tag(double p, int m, double c, double r) { return fmt::format("p={} m={} c={} r={}", p, m, c, r); }

struct MatrixPoint {
  double p;
  int m;
  double c;
};

std::vector<MatrixPoint> cross_matrix() {
  std::vector<MatrixPoint> pts;
  for (double p : {1.5, 2.0, 2.5, 3.0}) {
    for (int m : {1, 2, 3}) {
      for (double c : {-1.0, 0.0, 1.0}) pts.push_back({p, m, c});
    }
  }
  return pts;
}

RadialSolution solve(double p, int m, double c, double r, std::size_t grid = 2048) {
  SolveOptions o;
  o.grid_size = grid;
  return solve_eigenvalue(RadialProblem::space_form_ball(p, m, c, r), o);
}

// ---------------------------------------------------------------------------

CriterionResult closed_form(const AcceptanceContext& ctx) {
  Verdict v;
  struct Case {
    double p;
    int m;
    double expected;
  };
  const double j01 = 2.404825557695772768621631879;
  std::vector<Case> cases{{2.0, 3, kPi * kPi}, {2.0, 2, j01 * j01}};
  for (double p : {1.5, 3.0, 4.0}) {
    const double pi_p = 2.0 * kPi / (p * std::sin(kPi / p));
    cases.push_back({p, 1, (p - 1.0) * std::pow(pi_p / 2.0, p)});
  }
  double worst = 0.0;
  double slowest = 0.0;
  for (const auto& cs : cases) {
    const auto t0 = Clock::now();
    const double lam = solve(cs.p, cs.m, 0.0, 1.0).lambda;
    const double dt = seconds_since(t0);
    const double err = rel(lam, ctx.oracle(1, cs.expected));
    worst = std::max(worst, err);
    slowest = std::max(slowest, dt);
    v.require(err <= 1e-5, fmt::format("{} lambda={:.10g} oracle={:.10g}", tag(cs.p, cs.m, 0, 1), lam, cs.expected));
    v.require(dt <= 1.0, fmt::format("{} took {:.2f}s", tag(cs.p, cs.m, 0, 1), dt));
  }
  v.note(fmt::format("max rel err {:.1e}", worst));
  return v.finish();
}

CriterionResult scaling_law(const AcceptanceContext&) {
  Verdict v;
  double worst = 0.0;
  for (double p : {1.5, 2.0, 3.0, 4.0}) {
    for (int m : {1, 2, 3}) {
      const double unit = solve(p, m, 0.0, 1.0).lambda;
      for (double r : {0.5, 2.0}) {
        const double lam = solve(p, m, 0.0, r).lambda;
        const double err = std::abs(lam - std::pow(r, -p) * unit) / lam;
        worst = std::max(worst, err);
        v.require(err <= 1e-6, fmt::format("{} err={:.2e}", tag(p, m, 0, r), err));
      }
    }
  }
  v.note(fmt::format("max rel err {:.1e}", worst));
  return v.finish();
}

CriterionResult solver_cross_validation(const AcceptanceContext&) {
  Verdict v;
  const auto pts = cross_matrix();
  const auto errs = parallel_map<double>(pts.size(), [&](std::size_t i) {
    const auto& pt = pts[i];
    const auto problem = RadialProblem::space_form_ball(pt.p, pt.m, pt.c, 1.0);
    const double shoot = solve_eigenvalue(problem).lambda;
    const double est = minimize_rayleigh(Grid1D::for_problem(problem, 2000), pt.p).lambda_est;
    return rel(est, shoot);
  });
  double worst = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    worst = std::max(worst, errs[i]);
    v.require(errs[i] <= 1e-3, fmt::format("{} rel={:.2e}", tag(pts[i].p, pts[i].m, pts[i].c, 1), errs[i]));
  }
  v.note(fmt::format("max rel diff {:.1e}", worst));
  return v.finish();
}

struct BartaOutcome {
  double sharp_err = 0.0;
  double worst_perturbed = 0.0;
  int perturbed_not_below = 0;
};

/// Barta at the eigenfunction and at 10 seeded multiplicative perturbations.
BartaOutcome barta_case(const MatrixPoint& pt, std::uint64_t seed, double lambda_ref_scale) {
  const auto problem = RadialProblem::space_form_ball(pt.p, pt.m, pt.c, 1.0);
  const auto sol = solve_eigenvalue(problem);
  const double lam = sol.lambda * lambda_ref_scale;
  const auto nodes = uniform_nodes(0.0, 1.0, 2001);
  const auto eta = sample_eigenfunction(sol, nodes);
  BartaOutcome out;
  out.sharp_err = rel(barta_bound({nodes, eta, problem}).value, lam);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> amp(0.05, 0.3);
  std::uniform_int_distribution<int> freq(1, 4);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
  out.worst_perturbed = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < 10; ++k) {
    const double a = amp(rng);
    const int f = freq(rng);
    const double ph = phase(rng);
    DiscreteField pert(eta.size());
    for (std::size_t i = 0; i < eta.size(); ++i) pert[i] = eta[i] * (1.0 + a * std::sin(f * kPi * nodes[i] + ph));
    const double val = barta_bound({nodes, pert, problem}).value;
    out.worst_perturbed = std::max(out.worst_perturbed, (val - lam) / lam);
    if (!(val < lam)) ++out.perturbed_not_below;
  }
  return out;
}

CriterionResult barta_sharpness(const AcceptanceContext& ctx) {
  Verdict v;
  const auto pts = cross_matrix();
  const double scale = ctx.oracle(4, 1.0);
  const auto res = parallel_map<BartaOutcome>(pts.size(), [&](std::size_t i) {
    return barta_case(pts[i], ctx.seed + i, scale);
  });
  double worst = 0.0;
  double closest = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto& pt = pts[i];
    worst = std::max(worst, res[i].sharp_err);
    closest = std::max(closest, res[i].worst_perturbed);
    v.require(res[i].sharp_err <= 1e-4, fmt::format("{} eigen rel={:.2e}", tag(pt.p, pt.m, pt.c, 1), res[i].sharp_err));
    v.require(res[i].perturbed_not_below == 0,
              fmt::format("{} {} perturbed bounds not below lambda", tag(pt.p, pt.m, pt.c, 1), res[i].perturbed_not_below));
  }
  v.note(fmt::format("max eigen rel err {:.1e}", worst));
  v.note(fmt::format("closest perturbed (value-lambda)/lambda {:.1e}", closest));
  return v.finish();
}

CriterionResult picone(const AcceptanceContext& ctx) {
  Verdict v;
  std::mt19937_64 rng(ctx.seed);
  std::uniform_real_distribution<double> val(0.01, 3.0);
  std::uniform_real_distribution<double> grad(-3.0, 3.0);
  std::uniform_real_distribution<double> beta(0.1, 10.0);
  double worst = 0.0;
  double worst_prop = 0.0;
  for (double p : {1.5, 2.0, 3.0, 4.0}) {
    const std::size_t n = 1000;
    std::vector<double> u(n), du(n), w(n), dw(n), pu(n), pdu(n);
    for (std::size_t i = 0; i < n; ++i) {
      u[i] = val(rng);
      du[i] = grad(rng);
      w[i] = val(rng);
      dw[i] = grad(rng);
      const double b = beta(rng);
      pu[i] = b * w[i];
      pdu[i] = b * dw[i];
    }
    const auto d = picone_defect(u, du, w, dw, p);
    const auto dp = picone_defect(pu, pdu, w, dw, p);
    for (std::size_t i = 0; i < n; ++i) {
      const double s = std::max(std::pow(std::abs(du[i]), p), std::pow(u[i] / w[i], p) * std::pow(std::abs(dw[i]), p));
      const double sp =
          std::max(std::pow(std::abs(pdu[i]), p), std::pow(pu[i] / w[i], p) * std::pow(std::abs(dw[i]), p));
      worst = std::min(worst, d[i] / s);
      worst_prop = std::max(worst_prop, std::abs(dp[i]) / sp);
      v.require(d[i] >= -1e-12 * s, fmt::format("p={} pair {} defect={:.3e}", p, i, d[i]));
      v.require(std::abs(dp[i]) <= 1e-13 * sp, fmt::format("p={} proportional pair {} defect={:.3e}", p, i, dp[i]));
    }
  }
  v.note(fmt::format("min scaled defect {:.1e}", worst));
  v.note(fmt::format("max proportional defect {:.1e}", worst_prop));
  return v.finish();
}

struct DivOutcome {
  double bound_err = 0.0;
  double identity_err = 0.0;
};

CriterionResult div_field_sharpness(const AcceptanceContext& ctx) {
  Verdict v;
  const auto pts = cross_matrix();
  const double scale = ctx.oracle(6, 1.0);
  const auto res = parallel_map<DivOutcome>(pts.size(), [&](std::size_t i) {
    const auto& pt = pts[i];
    const auto sol = solve(pt.p, pt.m, pt.c, 1.0, 16385);
    const auto& problem = sol.problem;
    const double lam = sol.lambda * scale;
    const auto X = eigen_field(sol);
    DivOutcome o;
    o.bound_err = rel(div_field_bound(X, problem).value, lam);
    // The eigenfunction satisfies -Delta_p w / w^{p-1} = lambda.
    const auto div = radial_divergence(X, problem);
    const double q = problem.q();
    double num = 0.0;
    double den = 0.0;
    const auto [lo, hi] = evaluation_range(X.grid, problem);
    for (std::size_t k = std::max(lo, X.first); k <= std::min(hi, X.last); ++k) {
      const double lhs = (1.0 - pt.p) * std::pow(std::abs(X.values[k]), q) + div[k];
      num = std::max(num, std::abs(lhs - lam));
      den = std::max({den, std::abs(div[k]), lam});
    }
    o.identity_err = num / den;
    return o;
  });
  double wb = 0.0;
  double wi = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto& pt = pts[i];
    wb = std::max(wb, res[i].bound_err);
    wi = std::max(wi, res[i].identity_err);
    v.require(res[i].bound_err <= 1e-4, fmt::format("{} bound rel={:.2e}", tag(pt.p, pt.m, pt.c, 1), res[i].bound_err));
    v.require(res[i].identity_err <= 1e-6,
              fmt::format("{} identity scaled={:.2e}", tag(pt.p, pt.m, pt.c, 1), res[i].identity_err));
  }
  v.note(fmt::format("max bound rel err {:.1e}", wb));
  v.note(fmt::format("max identity scaled err {:.1e}", wi));
  return v.finish();
}

CriterionResult curvature_monotonicity(const AcceptanceContext&) {
  Verdict v;
  double tightest = std::numeric_limits<double>::infinity();
  for (double p : {1.5, 2.0, 3.0}) {
    for (int m : {2, 3}) {
      for (double r : {0.8, 1.4}) {
        const double hyp = solve(p, m, -1.0, r).lambda;
        const double flat = solve(p, m, 0.0, r).lambda;
        const double sph = solve(p, m, 1.0, r).lambda;
        tightest = std::min({tightest, (hyp - flat) / flat, (flat - sph) / flat});
        v.require(hyp > flat && flat > sph,
                  fmt::format("p={} m={} r={}: {:.8g} {:.8g} {:.8g}", p, m, r, hyp, flat, sph));
      }
    }
  }
  v.note(fmt::format("smallest relative gap {:.2e}", tightest));
  return v.finish();
}

CriterionResult cheng_comparison(const AcceptanceContext& ctx) {
  Verdict v;
  ExperimentConfig cfg;
  cfg.p = {2.0, 2.5, 3.0};
  cfg.m = {2, 3};
  cfg.c = {0.0};
  cfg.r = {1.0};
  cfg.profiles = {"identity", "hyperbolic", "tabulated"};
  const auto rs = cmd_compare(cfg);
  double worst_warp = std::numeric_limits<double>::infinity();
  double worst_eq = 0.0;
  const double shift = ctx.oracle(8, 1.0) - 1.0;
  for (const auto& row : rs.rows) {
    const auto& rec = row.record;
    const std::string label = rec.at("profile").get<std::string>();
    const auto where = fmt::format("{} {}", tag(rec.at("p").get<double>(), rec.at("m").get<int>(), 0, 1), label);
    v.require(rec.at("admissible").get<bool>(), where + " curvature not verified");
    if (!rec.at("admissible").get<bool>()) continue;
    const double margin = rec.at("cert_margin").get<double>() - shift;
    if (label == WarpingProfile::space_form(0.0).label()) {
      worst_eq = std::max(worst_eq, std::abs(margin));
      v.require(std::abs(margin) <= 1e-6, fmt::format("{} identity margin {:.2e}", where, margin));
    } else {
      worst_warp = std::min(worst_warp, margin);
      v.require(margin >= -1e-6, fmt::format("{} margin {:.2e}", where, margin));
      const double ray = rec.at("lambda_rayleigh").get<double>();
      const double model = rec.at("lambda_model").get<double>();
      v.require(ray >= model * (1.0 - 1e-3), fmt::format("{} rayleigh {:.8g} below model {:.8g}", where, ray, model));
    }
  }
  v.note(fmt::format("min warped margin {:.2e}", worst_warp));
  v.note(fmt::format("max identity |margin| {:.1e}", worst_eq));
  return v.finish();
}

CriterionResult critical_radius(const AcceptanceContext&) {
  Verdict v;
  for (double c : {-1.0, 0.0, 1.0}) {
    const auto rep = compute_r_star(c, solve(2.0, 2, c, 1.0));
    v.require(rep.r_star == 1.0, fmt::format("p=2 c={} r_star={}", c, rep.r_star));
  }
  for (double p : {3.0, 4.0}) {
    const auto sol = solve(p, 2, 1.0, 1.4);
    const auto rep = compute_r_star(1.0, sol);
    const auto chk = verify_spherical_positivity(sol, sol.lambda, 1.4);
    v.require(rep.r_star == 1.4, fmt::format("c=1 p={} r_star={}", p, rep.r_star));
    v.require(chk.positive && chk.margin > 0.0, fmt::format("c=1 p={} spherical margin {:.3e}", p, chk.margin));
  }
  for (double c : {0.0, -1.0}) {
    const auto sol = solve(3.0, 2, c, 1.0);
    CriticalRadiusOptions fine;
    fine.scan_nodes = 16384;
    CriticalRadiusOptions finer;
    finer.scan_nodes = 32768;
    const auto a = compute_r_star(c, sol, fine);
    const auto b = compute_r_star(c, sol, finer);
    v.require(a.r_star > 0.0 && a.r_star < 1.0,
              fmt::format("c={} p=3: r_star={} not inside (0, r); max W/lambda={:.3f}", c, a.r_star, a.max_W_scaled));
    v.require(a.max_W_scaled <= kWTol, fmt::format("c={} p=3: W/lambda reaches {:.2e}", c, a.max_W_scaled));
    v.require(std::abs(a.r_star - b.r_star) <= 2.0 / 16384.0,
              fmt::format("c={} p=3: r_star moved {:.2e} under refinement", c, std::abs(a.r_star - b.r_star)));
    v.note(fmt::format("c={} p=3 r_star={:.6g} max W/lambda={:.4f}", c, a.r_star, a.max_W_scaled));
  }
  return v.finish();
}

CriterionResult flat_integral_identity(const AcceptanceContext&) {
  Verdict v;
  double worst = 0.0;
  double literal_worst = 0.0;
  for (double p : {2.5, 3.0}) {
    for (int m : {2, 3}) {
      const auto sol = solve(p, m, 0.0, 1.0);
      const double lam = sol.lambda;
      const auto t = uniform_nodes(0.0, 1.0, 16385);
      const double a = lam / (p + m - 2.0);
      double acc = 0.0;
      double acc_lit = 0.0;
      double prev = flateq_rhs_integrand(0.0, sol, lam);
      double prev_lit = 0.0;
      double num = 0.0;
      double num_lit = 0.0;
      double den = 0.0;
      for (std::size_t k = 1; k < t.size(); ++k) {
        const double h = t[k] - t[k - 1];
        const double cur = flateq_rhs_integrand(t[k], sol, lam);
        const double cur_lit = std::pow(t[k], m - 1) * phi0(t[k], sol, lam) * std::exp(-0.5 * a * t[k] * t[k]);
        acc += 0.5 * h * (prev + cur);
        acc_lit += 0.5 * h * (prev_lit + cur_lit);
        prev = cur;
        prev_lit = cur_lit;
        const double lhs = lhs_expression(0.0, t[k], sol, lam);
        num = std::max(num, std::abs(acc - lhs));
        num_lit = std::max(num_lit, std::abs(acc_lit - lhs));
        den = std::max(den, std::abs(lhs));
      }
      worst = std::max(worst, num / den);
      literal_worst = std::max(literal_worst, num_lit / den);
      v.require(num / den <= 1e-4, fmt::format("p={} m={} scaled err {:.2e}", p, m, num / den));
    }
  }
  v.note(fmt::format("max scaled err {:.1e}", worst));
  v.note(fmt::format("displayed single-integrand form differs by {:.0f}% (diagnostic)", 100.0 * literal_worst));
  return v.finish();
}

CriterionResult route_agreement_check(const AcceptanceContext&) {
  Verdict v;
  double worst = 0.0;
  for (double p : {2.0, 2.5, 3.0, 4.0}) {
    const auto sol = solve(p, 2, 0.0, 1.2);
    for (const auto& s : {RotSurface::plane(), RotSurface::catenoid()}) {
      const auto band = make_band(s, 1.2);
      const auto ra = route_agreement(transplant(sol, band), band, p);
      worst = std::max(worst, ra.scaled_sup);
      v.require(ra.scaled_sup <= 1e-6, fmt::format("{} p={} scaled={:.2e}", s.name(), p, ra.scaled_sup));
    }
  }
  v.note(fmt::format("max scaled diff {:.1e}", worst));
  return v.finish();
}

CriterionResult model_control(const AcceptanceContext&) {
  Verdict v;
  double cat_min = std::numeric_limits<double>::infinity();
  double plane_max = 0.0;
  for (double r : {1.1, 1.2}) {
    for (double p : {2.0, 3.0}) {
      const auto sol = solve(p, 2, 0.0, r);
      const double rs = p > 2.0 ? compute_r_star(0.0, sol).r_star : r;
      v.require(r <= rs, fmt::format("p={} r={} exceeds r_star={}", p, r, rs));
      const auto cat = modelcontrol_check(make_band(RotSurface::catenoid(), r), sol, p);
      const auto pl = modelcontrol_check(make_band(RotSurface::plane(), r), sol, p);
      cat_min = std::min(cat_min, cat.min_margin / sol.lambda);
      plane_max = std::max(plane_max, std::abs(pl.min_margin) / sol.lambda);
      v.require(cat.pass, fmt::format("Catenoid p={} r={} margin {:.3e}", p, r, cat.min_margin));
      v.require(std::abs(pl.min_margin) <= 1e-4 * sol.lambda,
                fmt::format("Plane p={} r={} margin {:.3e}", p, r, pl.min_margin));
    }
  }
  v.note(fmt::format("min catenoid margin/lambda {:.3g}", cat_min));
  v.note(fmt::format("max plane |margin|/lambda {:.1e}", plane_max));
  return v.finish();
}

CriterionResult kazdan_kramer(const AcceptanceContext& ctx) {
  Verdict v;
  const auto pts = cross_matrix();
  const std::array<std::size_t, 3> sizes{1000, 2000, 4000};
  const double scale = ctx.oracle(13, 1.0);
  const auto devs = parallel_map<std::array<double, 3>>(pts.size(), [&](std::size_t i) {
    const auto& pt = pts[i];
    const auto sol = solve(pt.p, pt.m, pt.c, 1.0);
    const double lam = sol.lambda * scale;
    std::array<double, 3> d{};
    for (std::size_t k = 0; k < sizes.size(); ++k) {
      const auto nodes = uniform_nodes(0.0, 1.0, sizes[k]);
      d[k] = kazdan_stats(sample_eigenfunction(sol, nodes), nodes, sol.problem, lam).max_dev;
    }
    return d;
  });
  double worst = 0.0;
  double worst_ratio = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto& d = devs[i];
    const auto where = tag(pts[i].p, pts[i].m, pts[i].c, 1);
    worst = std::max(worst, d[1]);
    worst_ratio = std::max({worst_ratio, d[1] / d[0], d[2] / d[1]});
    v.require(d[1] <= 1e-2, fmt::format("{} sup|Psi-lambda|/lambda={:.2e}", where, d[1]));
    v.require(d[1] < 0.6 * d[0] && d[2] < 0.6 * d[1],
              fmt::format("{} refinement ratios {:.2f} {:.2f}", where, d[1] / d[0], d[2] / d[1]));
  }
  for (double p : {1.5, 2.0, 3.0, 4.0}) {
    const auto sol = solve(p, 2, 0.0, 1.0);
    const auto nodes = uniform_nodes(0.0, 1.0, 2000);
    DiscreteField phi(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) phi[i] = 1.0 - nodes[i] * nodes[i];
    phi.back() = 0.0;
    const auto st = kazdan_stats(phi, nodes, sol.problem, sol.lambda);
    const double lo = st.inf;
    const double hi = st.sup;
    v.require(lo <= sol.lambda && sol.lambda <= hi,
              fmt::format("p={} trial: [{:.6g}, {:.6g}] misses {:.6g}", p, lo, hi, sol.lambda));
  }
  v.note(fmt::format("max sup|Psi-lambda|/lambda at n=2000 {:.1e}", worst));
  v.note(fmt::format("worst refinement ratio {:.2f}", worst_ratio));
  return v.finish();
}

CriterionResult stability_arithmetic(const AcceptanceContext& ctx) {
  Verdict v;
  const auto a = theorem17_bound(3, 2.0, 0.0, 1.0, 0.0);
  v.require(a.admissible && std::abs(a.value - ctx.oracle(14, 0.25)) <= 1e-10,
            fmt::format("theorem17(3,2,0,1,0)={:.15g}", a.value));
  const double bracket = std::cosh(1.0) / std::sinh(1.0) - 0.5;
  const double oracle = ctx.oracle(14, bracket * bracket * bracket / 27.0);
  const auto b = theorem17_bound(3, 3.0, -1.0, 1.0, 0.5);
  v.require(b.admissible && std::abs(b.value - oracle) <= 1e-10,
            fmt::format("theorem17(3,3,-1,1,0.5)={:.15g} oracle={:.15g}", b.value, oracle));
  v.require(!theorem17_bound(2, 3.0, 0.0, 1.0, 0.0).admissible, "m=2 must be inadmissible");

  struct Imm {
    double supA, k, p, lam;
    bool expected;
  };
  for (const auto& t : std::vector<Imm>{{0.0, 0.7, 3.0, 10.0, true},
                                        {5.0, 0.3, 2.0, 5.0, true},
                                        {6.0, 0.5, 3.0, 10.0, false},
                                        {4.9, 0.5, 3.0, 10.0, true},
                                        {5.0 + 1e-9, 0.5, 3.0, 10.0, false}}) {
    v.require(stability_criterion_immersion(t.supA, t.k, t.p, t.lam) == t.expected,
              fmt::format("immersion({}, {}, {}, {})", t.supA, t.k, t.p, t.lam));
  }
  struct Mc {
    double A;
    int m;
    double p, r;
    bool expected;
  };
  for (const auto& t : std::vector<Mc>{{0.0, 2, 2.0, 1.0, true},
                                       {1.0, 3, 2.0, 1.0, true},
                                       {0.6, 2, 4.0, 0.5, false},
                                       {std::sqrt(2.0), 2, 2.0, 1.2, false}}) {
    v.require(stability_criterion_meancurv(t.A, t.m, t.p, t.r) == t.expected,
              fmt::format("meancurv({}, {}, {}, {})", t.A, t.m, t.p, t.r));
  }
  double worst = 0.0;
  for (const auto& [p, m] : std::vector<std::pair<double, int>>{{2.0, 2}, {3.0, 3}, {1.5, 1}}) {
    const auto grid = Grid1D::for_problem(RadialProblem::space_form_ball(p, m, 0.0, 1.0), 2000);
    const auto res = minimize_rayleigh(grid, p);
    const double energy = p_energy(res.u_min, grid, p);
    const double q = stability_functional(res.u_min, std::vector<double>(grid.size(), res.lambda_est), grid, p);
    const double q1 = stability_functional(res.u_min, std::vector<double>(grid.size(), res.lambda_est + 1.0), grid, p);
    worst = std::max(worst, std::abs(q) / energy);
    v.require(std::abs(q) <= 1e-3 * energy, fmt::format("p={} m={} Q_p={:.3e} energy={:.6g}", p, m, q, energy));
    v.require(q1 < 0.0, fmt::format("p={} m={} shifted Q_p={:.3e}", p, m, q1));
  }
  v.note(fmt::format("max |Q_p|/energy {:.1e}", worst));
  return v.finish();
}

CriterionResult harness_determinism(const AcceptanceContext& ctx) {
  Verdict v;
  ExperimentConfig cfg;
  cfg.p = {2.0, 3.0};
  cfg.m = {2, 3};
  cfg.c = {0.0, 1.0};
  cfg.r = {1.0};
  cfg.seed = ctx.seed;
  cfg.threads = 1;
  const auto serial = cmd_sweep(cfg).table().body();
  cfg.threads = 0;
  const auto parallel = cmd_sweep(cfg).table().body();
  const auto again = cmd_sweep(cfg).table().body();
  v.require(serial == parallel, "sweep body differs between 1 and N workers");
  v.require(parallel == again, "sweep body differs between identical runs");

  const MatrixPoint pt{3.0, 2, 0.0};
  const auto x = barta_case(pt, ctx.seed, 1.0);
  const auto y = barta_case(pt, ctx.seed, 1.0);
  v.require(x.worst_perturbed == y.worst_perturbed, "seeded perturbation run not reproducible");

  const auto grid = Grid1D::uniform(0.0, 1.0, 4096, [](double t) { return t; }, false, true);
  RayleighOptions ser;
  RayleighOptions par = ser;
  par.parallel = true;
  const auto init = default_initial_field(grid);
  v.require(minimize_rayleigh(grid, 3.0, init, ser).lambda_est == minimize_rayleigh(grid, 3.0, init, par).lambda_est,
            "serial and OpenMP kernels disagree");

  const double elapsed = ctx.elapsed();
  v.require(elapsed <= kSuiteBudgetSeconds, fmt::format("suite exceeded {} s", kSuiteBudgetSeconds));
  v.note(fmt::format("sweep body {} bytes", serial.size()));
  return v.finish();
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char ch) { return std::tolower(ch); });
  return out;
}

}  // namespace

double AcceptanceContext::elapsed() const { return seconds_since(start); }

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> list{
      {1, "closed-form eigenvalues", {"eig", "shooting"}, closed_form},
      {2, "scaling law", {"eig", "shooting"}, scaling_law},
      {3, "shooting vs rayleigh", {"eig", "rayleigh"}, solver_cross_validation},
      {4, "barta sharpness", {"barta", "bounds"}, barta_sharpness},
      {5, "picone nonnegativity", {"picone", "bounds"}, picone},
      {6, "divergence-field sharpness", {"divfield", "bounds"}, div_field_sharpness},
      {7, "curvature monotonicity", {"eig", "compare"}, curvature_monotonicity},
      {8, "cheng comparison on warped models", {"compare", "barta"}, cheng_comparison},
      {9, "critical radius", {"rstar"}, critical_radius},
      {10, "flat integral identity", {"rstar"}, flat_integral_identity},
      {11, "route agreement", {"surface"}, route_agreement_check},
      {12, "model-control inequality", {"surface"}, model_control},
      {13, "kazdan-kramer transform", {"kazdan", "bounds"}, kazdan_kramer},
      {14, "mean-curvature bound and stability arithmetic", {"stability", "bounds"}, stability_arithmetic},
      {15, "harness determinism", {"harness", "sweep"}, harness_determinism},
  };
  return list;
}

bool matches(const Criterion& c, std::string_view filter) {
  if (filter.empty()) return true;
  for (const auto& word : parse_word_list(filter)) {
    if (!word.empty() && std::all_of(word.begin(), word.end(), [](unsigned char ch) { return std::isdigit(ch); })) {
      if (std::stoi(word) == c.id) return true;
      continue;
    }
    const auto w = lower(word);
    if (lower(c.name).find(w) != std::string::npos) return true;
    for (const auto& t : c.tags) {
      if (lower(t).find(w) != std::string::npos) return true;
    }
  }
  return false;
}

bool SuiteReport::all_pass() const {
  return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.pass; });
}

csv::Table SuiteReport::table() const {
  csv::Table t;
  t.header = {"criterion", "name", "status", "detail"};
  for (const auto& r : results) {
    t.add({static_cast<double>(r.id), 0.0, 0.0, 0.0}, {std::to_string(r.id), r.name, r.pass ? "PASS" : "FAIL", r.detail});
  }
  return t;
}

nlohmann::json SuiteReport::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : results) {
    arr.push_back({{"criterion", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}, {"seconds", r.seconds}});
  }
  return {{"all_pass", all_pass()}, {"seconds", seconds}, {"criteria", arr}};
}

std::string format_line(const CriterionResult& r) {
  return fmt::format("[{}] {:02d} {}: {} ({:.1f}s)", r.pass ? "PASS" : "FAIL", r.id, r.name, r.detail, r.seconds);
}

SuiteReport run_acceptance(std::string_view filter, const AcceptanceContext& ctx, std::ostream* log) {
  SuiteReport rep;
  for (const auto& c : criteria()) {
    if (!matches(c, filter)) continue;
    const auto t0 = Clock::now();
    CriterionResult r;
    try {
      r = c.run(ctx);
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.id = c.id;
    r.name = c.name;
    r.seconds = seconds_since(t0);
    if (log != nullptr) *log << format_line(r) << '\n' << std::flush;
    rep.results.push_back(std::move(r));
  }
  if (rep.results.empty()) throw InvalidInput("filter '" + std::string(filter) + "' selects no criteria");
  rep.seconds = ctx.elapsed();
  return rep;
}

}  // namespace ptone::harness
