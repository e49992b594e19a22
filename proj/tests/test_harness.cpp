#include <doctest.h>

#include <cstdlib>
#include <sstream>
#include <stdexcept>

#include "ptone/csv.hpp"
#include "ptone/errors.hpp"
#include "ptone/harness/acceptance.hpp"
#include "ptone/harness/commands.hpp"
#include "ptone/harness/config.hpp"
#include "ptone/harness/parallel.hpp"

using namespace ptone;
using namespace ptone::harness;
using doctest::Approx;

TEST_CASE("number lists and ranges") {
  CHECK(parse_number_list("2,3") == std::vector<double>{2.0, 3.0});
  const auto r = parse_number_list("0.5:1.5:0.25");
  REQUIRE(r.size() == 5);
  CHECK(r.back() == Approx(1.5));
  CHECK(parse_number_list("1,2:4:1") == std::vector<double>{1.0, 2.0, 3.0, 4.0});
  CHECK(parse_number_list(" 2 , 3 ").size() == 2);
  CHECK(parse_int_list("2:5:1") == std::vector<int>{2, 3, 4, 5});
  CHECK(parse_word_list("Plane,Catenoid") == std::vector<std::string>{"Plane", "Catenoid"});
  CHECK_THROWS_AS(parse_number_list(""), InvalidInput);
  CHECK_THROWS_AS(parse_number_list("1,,2"), InvalidInput);
  CHECK_THROWS_AS(parse_number_list("1:2:0"), InvalidInput);
  CHECK_THROWS_AS(parse_number_list("2:1:0.5"), InvalidInput);
  CHECK_THROWS_AS(parse_number_list("abc"), InvalidInput);
  CHECK_THROWS_AS(parse_int_list("2.5"), InvalidInput);
}

TEST_CASE("seeds") {
  CHECK(parse_seed("0x5EED") == 0x5EED);
  CHECK(parse_seed("24301") == 24301);
  CHECK(ExperimentConfig{}.seed == 0x5EED);
  CHECK_THROWS_AS(parse_seed("seed"), InvalidInput);
}

TEST_CASE("config json") {
  ExperimentConfig cfg;
  apply_json(cfg, nlohmann::json::parse(R"({"p": [2, 3], "m": "2:3:1", "r": 1.5, "seed": "0x10", "n": 501})"));
  CHECK(cfg.p == std::vector<double>{2.0, 3.0});
  CHECK(cfg.m == std::vector<int>{2, 3});
  CHECK(cfg.r == std::vector<double>{1.5});
  CHECK(cfg.seed == 16);
  CHECK(cfg.n == 501);
  const auto round = to_json(cfg);
  ExperimentConfig back;
  apply_json(back, round);
  CHECK(to_json(back) == round);
  CHECK_THROWS_AS(apply_json(cfg, nlohmann::json::parse(R"({"bogus": 1})")), InvalidInput);
  ExperimentConfig bad;
  bad.tol = 0.0;
  CHECK_THROWS_AS(bad.validate(), InvalidInput);
  bad = ExperimentConfig{};
  bad.p.clear();
  CHECK_THROWS_AS(bad.validate(), InvalidInput);
}

TEST_CASE("csv formatting") {
  CHECK(csv::num(0.1) == "0.10000000000000001");
  CHECK(std::stod(csv::num(9.869604401089358)) == 9.869604401089358);
  CHECK(csv::quote("plain") == "plain");
  CHECK(csv::quote("a,b") == "\"a,b\"");
  CHECK(csv::quote("say \"hi\"") == "\"say \"\"hi\"\"\"");
  csv::Table t;
  t.metadata = {"ptone test"};
  t.header = {"p", "name"};
  t.add({3, 2, 0, 1}, {"3", "x,y"});
  t.add({2, 2, 0, 1}, {"2", "z"});
  const std::string s = t.str();
  CHECK(s.rfind("# ptone test", 0) == 0);
  CHECK(t.body() == "p,name\r\n2,z\r\n3,\"x,y\"\r\n");
}

TEST_CASE("parameter grid and sorting") {
  ExperimentConfig cfg;
  cfg.p = {3.0, 2.0};
  cfg.r = {1.0, 0.5};
  const auto g = parameter_grid(cfg);
  REQUIRE(g.size() == 4);
  CHECK(g[0].p == 3.0);
  CHECK(g[1].r == 0.5);
  const auto rs = cmd_eig(cfg);
  REQUIRE(rs.rows.size() == 4);
  const auto body = rs.table().body();
  std::istringstream in(body);
  std::string line;
  std::getline(in, line);
  CHECK(line.rfind("p,m,c,r,lambda", 0) == 0);
  std::vector<std::string> firsts;
  while (std::getline(in, line)) firsts.push_back(line.substr(0, line.find(',', line.find(',') + 1)));
  CHECK(firsts.front().rfind("2,", 0) == 0);
  CHECK(firsts.back().rfind("3,", 0) == 0);
}

TEST_CASE("commands are deterministic across thread counts") {
  ExperimentConfig cfg;
  cfg.p = {2.0, 3.0};
  cfg.m = {2, 3};
  cfg.threads = 1;
  const auto a = cmd_sweep(cfg).table().body();
  cfg.threads = 4;
  const auto b = cmd_sweep(cfg).table().body();
  CHECK(a == b);
}

TEST_CASE("command failures map to exceptions or exit codes") {
  ExperimentConfig cfg;
  cfg.p = {0.5};
  CHECK_THROWS_AS(cmd_eig(cfg), InvalidInput);
  cfg.p = {2.0};
  cfg.c = {1.0};
  cfg.r = {3.5};
  CHECK_THROWS_AS(cmd_eig(cfg), DomainError);
  cfg = ExperimentConfig{};
  cfg.profiles = {"no-such-profile.csv"};
  CHECK_THROWS_AS(cmd_compare(cfg), InvalidInput);
  cfg = ExperimentConfig{};
  CHECK(cmd_compare(cfg).exit_code == 0);
}

TEST_CASE("parallel map keeps order and reports the first failure") {
  const auto sq = parallel_map<int>(50, 4, [](std::size_t i) { return static_cast<int>(i * i); });
  for (std::size_t i = 0; i < sq.size(); ++i) CHECK(sq[i] == static_cast<int>(i * i));
  try {
    parallel_map<int>(20, 4, [](std::size_t i) -> int {
      if (i == 7 || i == 13) throw std::runtime_error(std::to_string(i));
      return 0;
    });
    FAIL("expected a throw");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "7");
  }
  CHECK(effective_threads(1) == 1);
  CHECK(effective_threads(0) == worker_count());
}

TEST_CASE("PTONE_THREADS validation") {
  ::setenv("PTONE_THREADS", "0", 1);
  CHECK_THROWS_AS(worker_count(), InvalidInput);
  ::setenv("PTONE_THREADS", "two", 1);
  CHECK_THROWS_AS(worker_count(), InvalidInput);
  ::setenv("PTONE_THREADS", "1", 1);
  CHECK(worker_count() == 1);
  ::unsetenv("PTONE_THREADS");
}

TEST_CASE("acceptance filters") {
  const auto& all = criteria();
  CHECK(all.size() == 15);
  AcceptanceContext ctx;
  const auto rep = run_acceptance("1", ctx, nullptr);
  REQUIRE(rep.results.size() == 1);
  CHECK(rep.results[0].pass);
  AcceptanceContext tampered;
  tampered.tamper = 1;
  CHECK_FALSE(run_acceptance("1", tampered, nullptr).all_pass());
  CHECK_THROWS_AS(run_acceptance("no-such-criterion", ctx, nullptr), InvalidInput);
}
