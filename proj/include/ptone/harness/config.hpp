#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace ptone::harness {

inline constexpr std::uint64_t kDefaultSeed = 0x5EED;

/// Parameters shared by every subcommand. Unused blocks are ignored.
struct ExperimentConfig {
  std::vector<double> p{2.0};
  std::vector<int> m{2};
  std::vector<double> c{0.0};
  std::vector<double> r{1.0};
  /// Inner radius for annuli; 0 selects balls.
  double inner = 0.0;
  std::size_t n = 2001;
  double tol = 1e-8;
  std::size_t scan = 4096;
  std::uint64_t seed = kDefaultSeed;
  /// Worker cap for sweeps; 0 uses PTONE_THREADS or the OpenMP default.
  int threads = 0;
  std::vector<std::string> surfaces{"Plane", "Catenoid"};
  /// compare: identity, hyperbolic, perturbed:<eps>, tabulated, or a path to a t,f CSV.
  std::vector<std::string> profiles{"identity", "hyperbolic", "tabulated"};
  std::string filter;
  std::string out;
  std::string json;

  /// Throws InvalidInput on empty lists or nonpositive tolerances.
  void validate() const;
};

/// "2,3", "0.5:1.5:0.25" or a mix such as "1,2:4:1". Ranges include the end
/// point when it lies on the step lattice.
std::vector<double> parse_number_list(std::string_view text);
std::vector<int> parse_int_list(std::string_view text);
std::vector<std::string> parse_word_list(std::string_view text);

/// Seed given as decimal or 0x-prefixed hex.
std::uint64_t parse_seed(std::string_view text);

/// Overwrites fields present in the object. Lists may be arrays or strings in
/// the flag grammar.
void apply_json(ExperimentConfig& cfg, const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

nlohmann::json to_json(const ExperimentConfig& cfg);

}  // namespace ptone::harness
