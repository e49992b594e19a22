#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ptone/csv.hpp"
#include "ptone/harness/config.hpp"

namespace ptone::harness {

inline constexpr double kSuiteBudgetSeconds = 600.0;

struct AcceptanceContext {
  std::uint64_t seed = kDefaultSeed;
  /// Criterion whose oracle values are shifted by 1% (0 = none).
  int tamper = 0;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  [[nodiscard]] double oracle(int id, double value) const { return id == tamper ? value * 1.01 : value; }
  [[nodiscard]] double elapsed() const;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct Criterion {
  int id = 0;
  std::string name;
  std::vector<std::string> tags;
  std::function<CriterionResult(const AcceptanceContext&)> run;
};

const std::vector<Criterion>& criteria();

/// Empty filter selects everything; otherwise a comma list of ids or
/// case-insensitive substrings of names and tags.
bool matches(const Criterion& c, std::string_view filter);

struct SuiteReport {
  std::vector<CriterionResult> results;
  double seconds = 0.0;
  [[nodiscard]] bool all_pass() const;
  /// Timing-free table keyed by criterion id.
  [[nodiscard]] csv::Table table() const;
  [[nodiscard]] nlohmann::json to_json() const;
};

/// Runs the selected criteria in id order, printing one line each to `log`.
/// Throws InvalidInput when the filter selects nothing.
SuiteReport run_acceptance(std::string_view filter, const AcceptanceContext& ctx, std::ostream* log);

std::string format_line(const CriterionResult& r);

}  // namespace ptone::harness
