#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "dfrc/config.hpp"
#include "dfrc/eval.hpp"
#include "dfrc/report_io.hpp"

using namespace dfrc;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) : path("/tmp/dfrc_test_" + name) {}
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("scenario config round trip") {
  ScenarioConfig cfg;
  cfg.n_tx = 7;
  cfg.mui_budget = 3.5e-5;
  cfg.rng_seed = 42;
  std::istringstream in(scenario_to_text(cfg));
  const ScenarioConfig back = parse_scenario_stream(in);
  CHECK(back.n_tx == 7);
  CHECK(back.mui_budget == doctest::Approx(3.5e-5).epsilon(1e-12));
  CHECK(back.rng_seed == 42);
  CHECK(scenario_hash(back) == scenario_hash(cfg));
}

TEST_CASE("unknown keys are rejected by name") {
  std::istringstream in("[scenario]\nn_tx = 4\nbogus_key = 1\n");
  try {
    parse_scenario_stream(in);
    FAIL("expected an exception");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("bogus_key") != std::string::npos);
  }
}

TEST_CASE("comments and sections are tolerated, bad values are not") {
  std::istringstream ok("# comment\n[scenario]\nn_tx = 4  # inline\n");
  CHECK(parse_scenario_stream(ok).n_tx == 4);
  std::istringstream bad("n_tx = banana\n");
  CHECK_THROWS_AS(parse_scenario_stream(bad), std::invalid_argument);
  std::istringstream invalid("noise_power = -1\n");
  CHECK_THROWS_AS(parse_scenario_stream(invalid), std::invalid_argument);
}

TEST_CASE("config hash tracks content") {
  ScenarioConfig a, b;
  b.mui_budget = 2e-6;
  CHECK(scenario_hash(a) != scenario_hash(b));
  CHECK(scenario_hash(a) == scenario_hash(ScenarioConfig{}));
}

TEST_CASE("artifact files carry seed and config hash headers") {
  ScenarioConfig cfg;
  cfg.rng_seed = 99;
  TempFile f("curve.tsv");
  write_xy_curve(f.path, "p", "d", {1.0, 2.0}, {3.0, 4.0}, cfg);
  const std::string text = slurp(f.path);
  CHECK(text.find("# seed\t99") != std::string::npos);
  CHECK(text.find(scenario_hash(cfg)) != std::string::npos);
  CHECK(text.find("p\td\n1\t3\n2\t4\n") != std::string::npos);
  CHECK(text.find('\r') == std::string::npos);

  CHECK_THROWS(write_xy_curve(f.path, "p", "d", {1.0}, {1.0, 2.0}, cfg));
}

TEST_CASE("solver trace and curve writers") {
  ScenarioConfig cfg;
  SolverReport rep;
  rep.objective_trace = {1.0, 2.0};
  rep.mui_trace = {0.5, 0.25};
  rep.residual_trace = {{0.1, 0.2}, {0.01, 0.02}};
  rep.time_trace = {0.0, 1.5};
  TempFile f("trace.tsv");
  write_solver_trace(f.path, rep, cfg);
  const std::string text = slurp(f.path);
  CHECK(text.find("relative_entropy") != std::string::npos);
  CHECK(text.find("\n0\t0\t1\t0.5\t0.1\t0.2\n") != std::string::npos);

  RocCurve roc;
  roc.pfa_grid = RealVector::Constant(1, 0.1);
  roc.pd = RealVector::Constant(1, 0.9);
  roc.trials = 1000;
  TempFile g("roc.tsv");
  write_roc_curve(g.path, roc, cfg);
  CHECK(slurp(g.path).find("0.1\t0.9") != std::string::npos);
}

TEST_CASE("manifest records experiment, config, and convergence flags") {
  ScenarioConfig cfg;
  TempFile f("manifest.txt");
  write_manifest(f.path, cfg, "convergence",
                 {{"a.tsv", "mm-admm", true}, {"b.tsv", "admm", false}});
  const std::string text = slurp(f.path);
  CHECK(text.find("experiment = convergence") != std::string::npos);
  CHECK(text.find(scenario_hash(cfg)) != std::string::npos);
  CHECK(text.find("[scenario]") != std::string::npos);
  CHECK(text.find("a.tsv = mm-admm, converged") != std::string::npos);
  CHECK(text.find("b.tsv = admm, not-converged") != std::string::npos);
}
