#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "ptone/eigensolver.hpp"
#include "ptone/rayleigh.hpp"

namespace ptone {

/// Positive test function on grid nodes of a radial problem.
struct BartaInput {
  std::vector<double> grid;
  DiscreteField eta;
  RadialProblem problem;
};

/// Radial vector field X(t) d/dt sampled on grid nodes, trusted on [first, last].
struct RadialField {
  std::vector<double> grid;
  std::vector<double> values;
  std::size_t first = 1;
  std::size_t last = 0;

  /// All interior nodes.
  static RadialField on_interior(std::vector<double> grid, std::vector<double> values);
};

enum class CertificateKind { Barta, DivField, DivSup, Theorem17 };
std::string to_string(CertificateKind kind);

struct BoundCertificate {
  CertificateKind kind = CertificateKind::Barta;
  double value = 0.0;
  std::string witness;
  std::size_t first = 0;
  std::size_t last = 0;
  /// False when the certificate degenerated to the trivial bound.
  bool informative = true;
  nlohmann::json problem;
};

nlohmann::json to_json(const BoundCertificate& cert);

inline constexpr double kEndLayer = 0.05;
inline constexpr double kPoleLayer = 0.02;

/// Inclusive node range where pointwise ratios are trusted: at least the pole
/// node and two layers next to each Dirichlet endpoint are dropped, and nodes
/// within the given fractions of the domain length from the ends.
std::pair<std::size_t, std::size_t> evaluation_range(const std::vector<double>& grid, const RadialProblem& problem,
                                                     double end_layer = kEndLayer,
                                                     double pole_layer = kPoleLayer);

/// Finite-volume radial p-Laplacian: staggered flux f^{m-1} phi_p(eta') at cell
/// midpoints, differenced and divided by the integral of f^{m-1} over the dual cell.
/// Dirichlet endpoints are NaN; a ball pole uses the half cell [0, h/2].
std::vector<double> discrete_plap_radial(const std::vector<double>& grid, const DiscreteField& eta,
                                         const RadialProblem& problem, bool parallel = false);
std::vector<double> discrete_plap_radial(const BartaInput& input);

/// -Delta_p eta / eta^{p-1} in finite-volume form: the flux balance over each
/// dual cell divided by the integral of f^{m-1} eta^{p-1} over that cell, with
/// eta piecewise linear.
std::vector<double> barta_ratio(const BartaInput& input);

BoundCertificate barta_bound(const BartaInput& input);

/// Pointwise |u'|^p + (p-1)(u/v)^p |v'|^p - p (u/v)^{p-1} |v'|^{p-2} u' v'.
std::vector<double> picone_defect(const std::vector<double>& u_vals, const std::vector<double>& u_grads,
                                  const std::vector<double>& v_vals, const std::vector<double>& v_grads,
                                  double p);

/// (f^{m-1} X)' / f^{m-1} by centered differences on [first, last].
std::vector<double> radial_divergence(const RadialField& X, const RadialProblem& problem);

BoundCertificate div_field_bound(const RadialField& X, const RadialProblem& problem);

/// X = -phi_p(w') / w^{p-1} on the solution grid, trusted up to t <= (1 - layer) r.
RadialField eigen_field(const RadialSolution& solution, double layer = 0.1);

BoundCertificate div_sup_bound(const RadialField& X, const RadialProblem& problem);

struct Theorem17Result {
  double bracket = 0.0;
  bool admissible = false;
  double value = 0.0;
  /// Radius where (m-2) cot_c equals h, when it exists (inverse reading).
  double inverse_reading_radius = 0.0;
  /// S_c/S_c' evaluated at h/(m-2) (literal reading); NaN when undefined.
  double literal_reading_radius = 0.0;
};

Theorem17Result theorem17_bound(int m, double p, double c, double r, double h);
BoundCertificate to_certificate(const Theorem17Result& result, int m, double p, double c, double r);

/// p_energy(u) - sum_i w_i V_i |u_i|^p over the dual cells.
double stability_functional(const DiscreteField& u, const std::vector<double>& potential, const Grid1D& grid,
                            double p);

bool stability_criterion_immersion(double supA_p, double k, double p, double lambda_model);
bool stability_criterion_meancurv(double A_sup, int m, double p, double r);

struct MeanCurvatureThresholds {
  /// (m-1)/(p r)
  double corollary = 0.0;
  /// (m-2)/(p r), the flat bracket of the mean-curvature bound
  double bracket = 0.0;
};
MeanCurvatureThresholds meancurv_thresholds(int m, double p, double r);

double radius_lower_bound(double k, double p, double lambda_unit_ball, double lambda_omega);

struct KazdanField {
  std::vector<double> v;
  std::size_t first = 0;
  std::size_t last = 0;
};

/// v = -log(phi); zero endpoint values become +inf and fall outside [first, last].
KazdanField kazdan_transform(const DiscreteField& phi);

inline constexpr double kKazdanLayer = 0.2;

/// Trusted range for the Kazdan source: v and |v'| blow up at a Dirichlet end.
std::pair<std::size_t, std::size_t> kazdan_evaluation_range(const std::vector<double>& grid,
                                                            const RadialProblem& problem);

/// Delta_p v - (p-1)|v'|^p on [first, last]; NaN elsewhere.
std::vector<double> kazdan_source(const KazdanField& v, const std::vector<double>& grid,
                                  const RadialProblem& problem);

}  // namespace ptone
