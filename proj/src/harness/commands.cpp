#include "ptone/harness/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

#include <omp.h>

#include "ptone/bounds.hpp"
#include "ptone/critical_radius.hpp"
#include "ptone/errors.hpp"
#include "ptone/harness/parallel.hpp"
#include "ptone/surfaces.hpp"

namespace ptone::harness {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kCompareTol = 1e-6;

csv::Table::Key key_of(const GridPoint& pt) { return {pt.p, static_cast<double>(pt.m), pt.c, pt.r}; }

std::vector<std::string> point_fields(const GridPoint& pt) {
  return {csv::num(pt.p), std::to_string(pt.m), csv::num(pt.c), csv::num(pt.r)};
}

nlohmann::json point_json(const GridPoint& pt) { return {{"p", pt.p}, {"m", pt.m}, {"c", pt.c}, {"r", pt.r}}; }

SolveOptions solve_options(const ExperimentConfig& cfg) {
  SolveOptions o;
  o.tol = cfg.tol;
  return o;
}

void validate_points(const std::vector<GridPoint>& pts, double inner) {
  for (const auto& pt : pts) make_problem(pt, inner).validate();
}

struct ExtremeStats {
  double inf = std::numeric_limits<double>::infinity();
  double sup = -std::numeric_limits<double>::infinity();
  std::size_t count = 0;
};

ExtremeStats finite_stats(const std::vector<double>& v) {
  ExtremeStats s;
  for (double x : v) {
    if (!std::isfinite(x)) continue;
    s.inf = std::min(s.inf, x);
    s.sup = std::max(s.sup, x);
    ++s.count;
  }
  if (s.count == 0) throw DomainError("no finite values on the evaluation set");
  return s;
}

DiscreteField trial_profile(const std::vector<double>& nodes, double r) {
  DiscreteField eta(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) eta[i] = 1.0 - (nodes[i] / r) * (nodes[i] / r);
  eta.back() = 0.0;
  return eta;
}

}  // namespace

int worker_count() {
  if (const char* env = std::getenv("PTONE_THREADS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1 || v > 4096) throw InvalidInput("PTONE_THREADS must be a positive integer");
    return static_cast<int>(v);
  }
  return std::max(1, omp_get_max_threads());
}

int effective_threads(int requested) {
  const int cap = worker_count();
  return requested > 0 ? std::min(requested, cap) : cap;
}

void ResultSet::sort() {
  std::stable_sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) { return a.key < b.key; });
}

csv::Table ResultSet::table(const std::vector<std::string>& metadata) const {
  csv::Table t;
  t.metadata = metadata;
  t.header = header;
  for (const auto& row : rows) t.add(row.key, row.fields);
  return t;
}

nlohmann::json ResultSet::to_json() const {
  auto sorted = *this;
  sorted.sort();
  nlohmann::json rows_json = nlohmann::json::array();
  for (const auto& row : sorted.rows) rows_json.push_back(row.record);
  return {{"command", command}, {"exit_code", exit_code}, {"rows", rows_json}};
}

std::vector<GridPoint> parameter_grid(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<GridPoint> pts;
  for (double p : cfg.p) {
    for (int m : cfg.m) {
      for (double c : cfg.c) {
        for (double r : cfg.r) pts.push_back({p, m, c, r});
      }
    }
  }
  return pts;
}

RadialProblem make_problem(const GridPoint& pt, double inner) {
  if (inner > 0.0) {
    return RadialProblem::annulus(pt.p, pt.m, WarpingProfile::space_form(pt.c, std::max(10.0, pt.r)), inner, pt.r);
  }
  return RadialProblem::space_form_ball(pt.p, pt.m, pt.c, pt.r);
}

DiscreteField sample_eigenfunction(const RadialSolution& solution, const std::vector<double>& nodes) {
  DiscreteField u(nodes.size());
  const bool ball = solution.problem.is_ball();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const bool end = i + 1 == nodes.size() || (!ball && i == 0);
    u[i] = end ? 0.0 : solution.at(nodes[i]).omega;
  }
  return u;
}

SourceStats kazdan_stats(const DiscreteField& phi, const std::vector<double>& nodes, const RadialProblem& problem,
                         double lambda) {
  const auto psi = kazdan_source(kazdan_transform(phi), nodes, problem);
  const auto [lo, hi] = kazdan_evaluation_range(nodes, problem);
  const std::vector<double> window(psi.begin() + static_cast<std::ptrdiff_t>(lo),
                                   psi.begin() + static_cast<std::ptrdiff_t>(hi) + 1);
  const auto s = finite_stats(window);
  return {s.inf, s.sup, std::max(s.sup - lambda, lambda - s.inf) / lambda};
}

WarpingProfile compare_profile(const std::string& spec, double c, double r) {
  const double r_max = std::max(10.0, 1.25 * r);
  if (spec == "identity") return WarpingProfile::space_form(c, c > 0.0 ? 0.0 : r_max);
  if (spec == "hyperbolic") return WarpingProfile::space_form(c - 1.0, c - 1.0 > 0.0 ? 0.0 : r_max);
  if (spec.starts_with("perturbed:")) {
    const auto eps = parse_number_list(spec.substr(10));
    if (eps.size() != 1) throw InvalidInput("perturbed profile takes one epsilon");
    return WarpingProfile::perturbed(c, eps[0], c > 0.0 ? 0.999 * conjugate_radius(c) : r_max);
  }
  if (spec == "tabulated") {
    const double cm = c - 1.0;
    const double top = cm > 0.0 ? std::min(1.25 * r, 0.999 * conjugate_radius(cm)) : 1.25 * r;
    const auto t = uniform_nodes(0.0, top, 257);
    std::vector<double> f(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) f[i] = s_c(cm, t[i]) * (1.0 + 0.05 * t[i] * t[i]);
    return WarpingProfile::tabulated(t, f);
  }
  return WarpingProfile::from_csv(spec);
}

ResultSet cmd_eig(const ExperimentConfig& cfg) {
  const auto pts = parameter_grid(cfg);
  validate_points(pts, cfg.inner);
  ResultSet rs;
  rs.command = "eig";
  rs.header = {"p", "m", "c", "r", "lambda", "residual", "iterations"};
  rs.rows = parallel_map<ResultRow>(pts.size(), effective_threads(cfg.threads), [&](std::size_t i) {
    const auto& pt = pts[i];
    const auto problem = make_problem(pt, cfg.inner);
    const auto sol = solve_eigenvalue(problem, solve_options(cfg));
    auto f = point_fields(pt);
    f.insert(f.end(), {csv::num(sol.lambda), csv::num(sol.residual), std::to_string(sol.iterations)});
    auto rec = point_json(pt);
    rec["inner"] = cfg.inner;
    rec["lambda"] = sol.lambda;
    rec["residual"] = sol.residual;
    rec["iterations"] = sol.iterations;
    return ResultRow{key_of(pt), std::move(f), std::move(rec)};
  });
  rs.sort();
  return rs;
}

ResultSet cmd_rstar(const ExperimentConfig& cfg) {
  if (cfg.inner > 0.0) throw InvalidInput("rstar works on balls only");
  const auto pts = parameter_grid(cfg);
  validate_points(pts, 0.0);
  ResultSet rs;
  rs.command = "rstar";
  rs.header = parse_word_list(csv_header_critical());
  CriticalRadiusOptions opt;
  opt.scan_nodes = cfg.scan;
  rs.rows = parallel_map<ResultRow>(pts.size(), effective_threads(cfg.threads), [&](std::size_t i) {
    const auto& pt = pts[i];
    const auto sol = solve_eigenvalue(make_problem(pt), solve_options(cfg));
    const auto rep = compute_r_star(pt.c, sol, opt);
    auto rec = to_json(rep);
    rec.erase("sample_t");
    rec.erase("W_samples");
    rec.erase("LHS_samples");
    rec.erase("Phi_samples");
    return ResultRow{key_of(pt), csv_row(rep), std::move(rec)};
  });
  rs.sort();
  return rs;
}

ResultSet cmd_barta(const ExperimentConfig& cfg) {
  if (cfg.inner > 0.0) throw InvalidInput("barta works on balls only");
  const auto pts = parameter_grid(cfg);
  validate_points(pts, 0.0);
  ResultSet rs;
  rs.command = "barta";
  rs.header = {"p", "m", "c", "r", "lambda", "barta_eigen", "barta_trial", "div_field", "div_sup"};
  rs.rows = parallel_map<ResultRow>(pts.size(), effective_threads(cfg.threads), [&](std::size_t i) {
    const auto& pt = pts[i];
    const auto problem = make_problem(pt);
    const auto sol = solve_eigenvalue(problem, solve_options(cfg));
    const auto nodes = uniform_nodes(0.0, pt.r, cfg.n);
    const auto eig = barta_bound({nodes, sample_eigenfunction(sol, nodes), problem});
    const auto trial = barta_bound({nodes, trial_profile(nodes, pt.r), problem});
    const auto X = eigen_field(sol);
    const auto df = div_field_bound(X, problem);
    const auto ds = div_sup_bound(X, problem);
    auto f = point_fields(pt);
    f.insert(f.end(), {csv::num(sol.lambda), csv::num(eig.value), csv::num(trial.value), csv::num(df.value),
                       csv::num(ds.value)});
    auto rec = point_json(pt);
    rec["lambda"] = sol.lambda;
    rec["certificates"] = {to_json(eig), to_json(trial), to_json(df), to_json(ds)};
    return ResultRow{key_of(pt), std::move(f), std::move(rec)};
  });
  rs.sort();
  return rs;
}

ResultSet cmd_compare(const ExperimentConfig& cfg) {
  if (cfg.inner > 0.0) throw InvalidInput("compare works on balls only");
  const auto pts = parameter_grid(cfg);
  validate_points(pts, 0.0);
  struct Task {
    GridPoint pt;
    std::string spec;
  };
  std::vector<Task> tasks;
  for (const auto& pt : pts) {
    for (const auto& s : cfg.profiles) tasks.push_back({pt, s});
  }
  // Profiles are built up front so that bad specs fail before any solve.
  for (const auto& t : tasks) RadialProblem::ball(t.pt.p, t.pt.m, compare_profile(t.spec, t.pt.c, t.pt.r), t.pt.r).validate();
  const std::size_t n_cert = 4 * (cfg.n - 1) + 1;

  ResultSet rs;
  rs.command = "compare";
  rs.header = {"p",           "m",           "c",               "r",      "profile", "admissible", "lambda_model",
               "certificate", "cert_margin", "lambda_rayleigh", "holds"};
  rs.rows = parallel_map<ResultRow>(tasks.size(), effective_threads(cfg.threads), [&](std::size_t i) {
    const auto& [pt, spec] = tasks[i];
    const auto profile = compare_profile(spec, pt.c, pt.r);
    const auto model = solve_eigenvalue(make_problem(pt), solve_options(cfg));
    const auto nodes = uniform_nodes(0.0, pt.r, n_cert);
    const auto curv = verify_curvature_bound(profile, pt.c, nodes);
    const auto warped = RadialProblem::ball(pt.p, pt.m, profile, pt.r);

    double cert = kNaN;
    double margin = kNaN;
    double rayleigh = kNaN;
    std::string holds = "n/a";
    if (curv.ok) {
      cert = barta_bound({nodes, sample_eigenfunction(model, nodes), warped}).value;
      margin = (cert - model.lambda) / model.lambda;
      holds = margin >= -kCompareTol ? "true" : "false";
      rayleigh = minimize_rayleigh(Grid1D::for_problem(warped, cfg.n), pt.p).lambda_est;
    }
    auto f = point_fields(pt);
    f.insert(f.end(), {profile.label(), curv.ok ? "true" : "false", csv::num(model.lambda), csv::num(cert),
                       csv::num(margin), csv::num(rayleigh), holds});
    auto rec = point_json(pt);
    rec["profile"] = profile.label();
    rec["admissible"] = curv.ok;
    rec["curvature_worst_margin"] = curv.worst_margin;
    rec["lambda_model"] = model.lambda;
    rec["certificate"] = cert;
    rec["cert_margin"] = margin;
    rec["lambda_rayleigh"] = rayleigh;
    rec["holds"] = holds;
    return ResultRow{key_of(pt), std::move(f), std::move(rec)};
  });
  for (const auto& row : rs.rows) {
    if (row.fields.back() == "false") rs.exit_code = 1;
  }
  rs.sort();
  return rs;
}

ResultSet cmd_surface(const ExperimentConfig& cfg) {
  struct Task {
    std::string surface;
    double p;
    double r;
  };
  cfg.validate();
  std::vector<Task> tasks;
  for (double p : cfg.p) {
    for (double r : cfg.r) {
      for (const auto& s : cfg.surfaces) {
        if (s != "Plane" && s != "Catenoid") throw InvalidInput("unknown surface '" + s + "'");
        if (p < 2.0) throw InvalidInput("surface reports need p >= 2");
        if (s == "Catenoid" && !(r > 1.0)) throw InvalidInput("catenoid bands need r > 1");
        tasks.push_back({s, p, r});
      }
    }
  }
  ResultSet rs;
  rs.command = "surface";
  rs.header = parse_word_list(csv_header_surface());
  rs.rows = parallel_map<ResultRow>(tasks.size(), effective_threads(cfg.threads), [&](std::size_t i) {
    const auto& t = tasks[i];
    const auto surface = t.surface == "Plane" ? RotSurface::plane() : RotSurface::catenoid();
    const auto model = solve_eigenvalue(RadialProblem::space_form_ball(t.p, 2, 0.0, t.r), solve_options(cfg));
    const auto rep = band_report(surface, t.r, t.p, model, cfg.n);
    return ResultRow{{t.p, 2.0, 0.0, t.r}, csv_row(rep), to_json(rep)};
  });
  for (const auto& row : rs.rows) {
    if (!row.record.at("modelcontrol_pass").get<bool>()) rs.exit_code = 1;
  }
  rs.sort();
  return rs;
}

ResultSet cmd_kazdan(const ExperimentConfig& cfg) {
  if (cfg.inner > 0.0) throw InvalidInput("kazdan works on balls only");
  const auto pts = parameter_grid(cfg);
  validate_points(pts, 0.0);
  ResultSet rs;
  rs.command = "kazdan";
  rs.header = {"p", "m", "c", "r", "lambda", "psi_inf", "psi_sup", "psi_spread", "trial_inf", "trial_sup", "sandwich"};
  rs.rows = parallel_map<ResultRow>(pts.size(), effective_threads(cfg.threads), [&](std::size_t i) {
    const auto& pt = pts[i];
    const auto problem = make_problem(pt);
    const auto sol = solve_eigenvalue(problem, solve_options(cfg));
    const auto nodes = uniform_nodes(0.0, pt.r, cfg.n);
    const auto eig = kazdan_stats(sample_eigenfunction(sol, nodes), nodes, problem, sol.lambda);
    const auto trial = kazdan_stats(trial_profile(nodes, pt.r), nodes, problem, sol.lambda);
    const bool sandwich = trial.inf <= sol.lambda && sol.lambda <= trial.sup;
    auto f = point_fields(pt);
    f.insert(f.end(), {csv::num(sol.lambda), csv::num(eig.inf), csv::num(eig.sup), csv::num(eig.sup - eig.inf),
                       csv::num(trial.inf), csv::num(trial.sup), sandwich ? "true" : "false"});
    auto rec = point_json(pt);
    rec["lambda"] = sol.lambda;
    rec["psi_inf"] = eig.inf;
    rec["psi_sup"] = eig.sup;
    rec["psi_spread"] = eig.sup - eig.inf;
    rec["trial_inf"] = trial.inf;
    rec["trial_sup"] = trial.sup;
    rec["sandwich"] = sandwich;
    return ResultRow{key_of(pt), std::move(f), std::move(rec)};
  });
  for (const auto& row : rs.rows) {
    if (row.fields.back() == "false") rs.exit_code = 1;
  }
  rs.sort();
  return rs;
}

ResultSet cmd_sweep(const ExperimentConfig& cfg) {
  if (cfg.inner > 0.0) throw InvalidInput("sweep works on balls only");
  const auto pts = parameter_grid(cfg);
  validate_points(pts, 0.0);
  ResultSet rs;
  rs.command = "sweep";
  rs.header = {"p", "m", "c", "r", "lambda", "residual", "lambda_rayleigh", "barta", "div_field", "r_star"};
  CriticalRadiusOptions opt;
  opt.scan_nodes = cfg.scan;
  rs.rows = parallel_map<ResultRow>(pts.size(), effective_threads(cfg.threads), [&](std::size_t i) {
    const auto& pt = pts[i];
    const auto problem = make_problem(pt);
    const auto sol = solve_eigenvalue(problem, solve_options(cfg));
    const double rayleigh = minimize_rayleigh(Grid1D::for_problem(problem, cfg.n), pt.p).lambda_est;
    const auto nodes = uniform_nodes(0.0, pt.r, cfg.n);
    const double barta = barta_bound({nodes, sample_eigenfunction(sol, nodes), problem}).value;
    const double df = div_field_bound(eigen_field(sol), problem).value;
    double r_star = kNaN;
    const bool rstar_defined = pt.p >= 2.0 && (pt.c <= 0.0 || pt.r < 0.5 * std::acos(-1.0) / std::sqrt(pt.c));
    if (rstar_defined) r_star = compute_r_star(pt.c, sol, opt).r_star;
    auto f = point_fields(pt);
    f.insert(f.end(), {csv::num(sol.lambda), csv::num(sol.residual), csv::num(rayleigh), csv::num(barta), csv::num(df),
                       csv::num(r_star)});
    auto rec = point_json(pt);
    rec["lambda"] = sol.lambda;
    rec["residual"] = sol.residual;
    rec["lambda_rayleigh"] = rayleigh;
    rec["barta"] = barta;
    rec["div_field"] = df;
    rec["r_star"] = rstar_defined ? nlohmann::json(r_star) : nlohmann::json(nullptr);
    return ResultRow{key_of(pt), std::move(f), std::move(rec)};
  });
  rs.sort();
  return rs;
}

}  // namespace ptone::harness
