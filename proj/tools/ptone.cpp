// ptone: radial p-Laplacian eigenvalue experiments.

#include <chrono>
#include <ctime>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ptone/errors.hpp"
#include "ptone/harness/acceptance.hpp"
#include "ptone/harness/commands.hpp"
#include "ptone/harness/config.hpp"
#include "ptone/harness/parallel.hpp"

namespace {

using namespace ptone;
using namespace ptone::harness;

enum Exit { kOk = 0, kFailure = 1, kInvalid = 2, kNoConvergence = 3 };

/// Raw flag values; only the ones given on the command line override the config file.
struct Flags {
  std::string config;
  std::optional<std::string> p, m, c, r, seed, surfaces, profiles;
  std::optional<double> inner, tol;
  std::optional<std::size_t> n, scan;
  std::optional<int> threads;
  std::optional<std::string> out, json, filter;
  int tamper = 0;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON config file; flags override its values")->check(CLI::ExistingFile);
  sub->add_option("--p", f.p, "exponents, e.g. 2,3 or 1.5:4:0.5");
  sub->add_option("--m", f.m, "dimensions");
  sub->add_option("--c", f.c, "model curvatures");
  sub->add_option("--r", f.r, "radii");
  sub->add_option("--n", f.n, "grid size");
  sub->add_option("--tol", f.tol, "eigenvalue tolerance");
  sub->add_option("--seed", f.seed, "seed (decimal or 0x hex), default 0x5EED");
  sub->add_option("--threads", f.threads, "worker cap (PTONE_THREADS caps it further)");
  sub->add_option("--out", f.out, "CSV output path");
  sub->add_option("--json", f.json, "JSON output path");
}

ExperimentConfig build_config(const Flags& f) {
  ExperimentConfig cfg = f.config.empty() ? ExperimentConfig{} : load_config(f.config);
  if (f.p) cfg.p = parse_number_list(*f.p);
  if (f.m) cfg.m = parse_int_list(*f.m);
  if (f.c) cfg.c = parse_number_list(*f.c);
  if (f.r) cfg.r = parse_number_list(*f.r);
  if (f.seed) cfg.seed = parse_seed(*f.seed);
  if (f.surfaces) cfg.surfaces = parse_word_list(*f.surfaces);
  if (f.profiles) cfg.profiles = parse_word_list(*f.profiles);
  if (f.inner) cfg.inner = *f.inner;
  if (f.tol) cfg.tol = *f.tol;
  if (f.n) cfg.n = *f.n;
  if (f.scan) cfg.scan = *f.scan;
  if (f.threads) cfg.threads = *f.threads;
  if (f.out) cfg.out = *f.out;
  if (f.json) cfg.json = *f.json;
  if (f.filter) cfg.filter = *f.filter;
  cfg.validate();
  return cfg;
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InvalidInput("cannot write " + path);
  os << text;
  if (!os) throw InvalidInput("write failed for " + path);
}

std::vector<std::string> metadata(const std::string& command, const ExperimentConfig& cfg) {
  return {"ptone " + command, "generated " + utc_now(), "threads " + std::to_string(effective_threads(cfg.threads)),
          "config " + to_json(cfg).dump()};
}

int emit(const ResultSet& rs, const ExperimentConfig& cfg) {
  const auto table = rs.table(metadata(rs.command, cfg));
  if (cfg.out.empty()) {
    table.write(std::cout);
  } else {
    write_file(cfg.out, table.str());
  }
  if (!cfg.json.empty()) {
    nlohmann::json j = rs.to_json();
    j["generated"] = utc_now();
    j["config"] = to_json(cfg);
    write_file(cfg.json, j.dump(2) + "\n");
  }
  return rs.exit_code;
}

int run_selftest(const ExperimentConfig& cfg, int tamper) {
  AcceptanceContext ctx;
  ctx.seed = cfg.seed;
  ctx.tamper = tamper;
  const auto rep = run_acceptance(cfg.filter, ctx, &std::cout);
  int failed = 0;
  for (const auto& r : rep.results) failed += r.pass ? 0 : 1;
  std::cout << rep.results.size() - failed << "/" << rep.results.size() << " criteria passed in " << rep.seconds
            << " s\n";
  if (failed > 0) {
    std::cout << "failure manifest:";
    for (const auto& r : rep.results) {
      if (!r.pass) std::cout << " " << r.id << " (" << r.name << ")";
    }
    std::cout << "\n";
  }
  if (!cfg.out.empty()) {
    auto t = rep.table();
    t.metadata = metadata("selftest", cfg);
    write_file(cfg.out, t.str());
  }
  if (!cfg.json.empty()) write_file(cfg.json, rep.to_json().dump(2) + "\n");
  return rep.all_pass() ? kOk : kFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ptone: first Dirichlet eigenvalues of the radial p-Laplacian"};
  app.require_subcommand(1);
  Flags flags;

  const std::map<std::string, std::pair<std::string, std::function<ResultSet(const ExperimentConfig&)>>> commands{
      {"eig", {"shooting eigenvalues over the (p, m, c, r) grid", cmd_eig}},
      {"rstar", {"critical radius r_star", cmd_rstar}},
      {"barta", {"Barta and divergence-field certificates", cmd_barta}},
      {"compare", {"transplanted Barta certificates on warped balls", cmd_compare}},
      {"surface", {"minimal-surface band reports", cmd_surface}},
      {"kazdan", {"Kazdan-Kramer source statistics", cmd_kazdan}},
      {"sweep", {"combined eigenvalue, bound and r_star sweep", cmd_sweep}},
  };
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, entry] : commands) {
    auto* sub = app.add_subcommand(name, entry.first);
    add_common(sub, flags);
    subs[name] = sub;
  }
  subs["eig"]->add_option("--inner", flags.inner, "inner radius; > 0 solves annuli");
  subs["rstar"]->add_option("--scan", flags.scan, "scan nodes for the sign of the weighted expression");
  subs["sweep"]->add_option("--scan", flags.scan, "scan nodes for r_star");
  subs["surface"]->add_option("--surfaces", flags.surfaces, "Plane,Catenoid");
  subs["compare"]->add_option("--profiles", flags.profiles,
                              "identity, hyperbolic, perturbed:<eps>, tabulated, or a t,f CSV path");
  auto* self = app.add_subcommand("selftest", "run the acceptance suite");
  add_common(self, flags);
  self->add_option("--filter", flags.filter, "criterion ids or name/tag substrings, comma separated");
  self->add_option("--tamper", flags.tamper, "shift the oracle of one criterion by 1%")->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    const auto cfg = build_config(flags);
    (void)worker_count();
    if (self->parsed()) return run_selftest(cfg, flags.tamper);
    for (const auto& [name, entry] : commands) {
      if (subs[name]->parsed()) return emit(entry.second(cfg), cfg);
    }
  } catch (const InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kInvalid;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kInvalid;
  } catch (const ConvergenceError& e) {
    std::cerr << "no convergence: " << e.what() << "\n";
    return kNoConvergence;
  } catch (const VerificationError& e) {
    std::cerr << "verification failed: " << e.what() << "\n";
    return kFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kInvalid;
}
