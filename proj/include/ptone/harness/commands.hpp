#pragma once

#include <array>
#include <string>
#include <vector>

#include <json.hpp>

#include "ptone/csv.hpp"
#include "ptone/eigensolver.hpp"
#include "ptone/harness/config.hpp"
#include "ptone/rayleigh.hpp"

namespace ptone::harness {

struct ResultRow {
  csv::Table::Key key{};
  std::vector<std::string> fields;
  nlohmann::json record;
};

/// Rows of one command, emitted sorted by (p, m, c, r) with ties kept in task order.
struct ResultSet {
  std::string command;
  std::vector<std::string> header;
  std::vector<ResultRow> rows;
  /// 0 ok, 1 when a row failed its check.
  int exit_code = 0;

  void sort();
  [[nodiscard]] csv::Table table(const std::vector<std::string>& metadata = {}) const;
  [[nodiscard]] nlohmann::json to_json() const;
};

struct GridPoint {
  double p;
  int m;
  double c;
  double r;
};

/// Cartesian product of the config lists in (p, m, c, r) order.
std::vector<GridPoint> parameter_grid(const ExperimentConfig& cfg);
RadialProblem make_problem(const GridPoint& pt, double inner = 0.0);

/// Eigenfunction values at the nodes, exactly zero at Dirichlet endpoints.
DiscreteField sample_eigenfunction(const RadialSolution& solution, const std::vector<double>& nodes);

struct SourceStats {
  double inf = 0.0;
  double sup = 0.0;
  /// sup |Psi - lambda| / lambda
  double max_dev = 0.0;
};

/// Kazdan-Kramer source of phi over the trusted window of the problem.
SourceStats kazdan_stats(const DiscreteField& phi, const std::vector<double>& nodes, const RadialProblem& problem,
                         double lambda);

/// Warping for the compare command relative to a model of curvature c.
WarpingProfile compare_profile(const std::string& spec, double c, double r);

ResultSet cmd_eig(const ExperimentConfig& cfg);
ResultSet cmd_rstar(const ExperimentConfig& cfg);
ResultSet cmd_barta(const ExperimentConfig& cfg);
ResultSet cmd_compare(const ExperimentConfig& cfg);
ResultSet cmd_surface(const ExperimentConfig& cfg);
ResultSet cmd_kazdan(const ExperimentConfig& cfg);
ResultSet cmd_sweep(const ExperimentConfig& cfg);

}  // namespace ptone::harness
