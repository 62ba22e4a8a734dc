#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "corrsphere/scenario.hpp"

using namespace corrsphere;

namespace {

const Comparison* find_quantity(const Report& report, const std::string& name) {
  for (const Comparison& c : report.quantities) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

const Check* find_check(const Report& report, const std::string& name) {
  for (const Check& c : report.checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

// Small, fast verification setup shared by the determinism tests.
VerifyOptions quick_options() {
  VerifyOptions options;
  options.max_n = 2;
  options.samples = 3;
  return options;
}

}  // namespace

TEST_SUITE("scenario") {

TEST_CASE("violation_ratio equals 3^N") {
  CHECK(std::abs(violation_ratio(1) - 3.0) <= 1e-12 * 3.0);
  CHECK(std::abs(violation_ratio(2) - 9.0) <= 1e-12 * 9.0);
  CHECK(std::abs(violation_ratio(4) - 81.0) <= 1e-12 * 81.0);
  for (int n = 1; n <= 8; ++n) {
    const double expected = int_pow(3.0, n);
    CHECK(std::abs(violation_ratio(n) - expected) <= 1e-12 * expected);
  }
  CHECK_THROWS_AS(violation_ratio(0), ValidationError);
}

TEST_CASE("builtin scenario names and intrinsic party caps") {
  const auto& names = builtin_scenario_names();
  CHECK(names.size() == 8);

  VerifyOptions wide;
  wide.max_n = 8;
  CHECK(builtin_scenario("main-result", wide).n_parties == 8);
  CHECK(builtin_scenario("bloch-saturation", wide).n_parties == 6);
  CHECK(builtin_scenario("ghz-witness", wide).n_parties == 6);
  CHECK(builtin_scenario("lhv-saturation", wide).n_parties == 3);
  CHECK(builtin_scenario("property-suite", wide).n_parties == 3);
  CHECK(builtin_scenario("bell-witness", wide).n_parties == 2);
  CHECK(builtin_scenario("lhv-mixing-slack", wide).n_parties == 1);
  CHECK(builtin_scenario("single-qubit-simulator", wide).n_parties == 1);

  CHECK_THROWS_AS(builtin_scenario("made-up", wide), ConfigError);
}

TEST_CASE("run_scenario validates its configuration") {
  ScenarioConfig cfg;
  cfg.scenario = "main-result";
  cfg.n_parties = 0;
  CHECK_THROWS_AS(run_scenario(cfg), ConfigError);
  cfg.n_parties = 9;
  CHECK_THROWS_AS(run_scenario(cfg), ConfigError);
  cfg.n_parties = 2;
  cfg.samples = 0;
  CHECK_THROWS_AS(run_scenario(cfg), ConfigError);
  cfg.samples = 1;
  cfg.grid.n_phi = 0;
  CHECK_THROWS_AS(run_scenario(cfg), ConfigError);
  cfg.grid.n_phi = 8;
  cfg.resolution = 0;
  CHECK_THROWS_AS(run_scenario(cfg), ConfigError);
  cfg.resolution = 10;
  cfg.scenario = "";
  CHECK_THROWS_AS(run_scenario(cfg), ConfigError);
  cfg.scenario = "no-such-scenario";  // generic runner, nothing declared
  CHECK_THROWS_AS(run_scenario(cfg), ConfigError);
}

TEST_CASE("main-result reproduces the 3^N ratio sequence") {
  ScenarioConfig cfg;
  cfg.scenario = "main-result";
  cfg.n_parties = 5;
  const Report report = run_scenario(cfg);
  CHECK(report.all_pass());

  for (int n = 1; n <= 5; ++n) {
    const std::string name = "violation-ratio(N=" + std::to_string(n) + ")";
    const Comparison* c = find_quantity(report, name);
    REQUIRE(c != nullptr);
    CHECK(c->has_reference);
    CHECK(c->reference == int_pow(3.0, n));
    CHECK(c->reference_formula == "3^N");
    CHECK(c->pass);
  }
  CHECK(find_quantity(report, "sep-maximum(N=3)") != nullptr);
  CHECK(find_quantity(report, "lhv-maximum(N=3)") != nullptr);
  CHECK(find_check(report, "ratio-recursion(N=2)") != nullptr);
}

TEST_CASE("bloch-saturation passes on random pure products") {
  ScenarioConfig cfg;
  cfg.scenario = "bloch-saturation";
  cfg.n_parties = 3;
  cfg.samples = 5;
  const Report report = run_scenario(cfg);
  CHECK(report.all_pass());
  const Comparison* worst =
      find_quantity(report, "scalar-product-exact-worst(N=3)");
  REQUIRE(worst != nullptr);
  CHECK(worst->rel_error <= 1e-10);
}

TEST_CASE("lhv-saturation hits the (4*pi)^N bound") {
  ScenarioConfig cfg;
  cfg.scenario = "lhv-saturation";
  cfg.n_parties = 2;
  const Report report = run_scenario(cfg);
  CHECK(report.all_pass());
  const Comparison* c = find_quantity(report, "lhv-scalar-product(N=2)");
  REQUIRE(c != nullptr);
  CHECK(c->reference_formula == "(4*pi)^N");
}

TEST_CASE("lhv-mixing-slack evaluates the hemispheric mixture") {
  ScenarioConfig cfg;
  cfg.scenario = "lhv-mixing-slack";
  cfg.n_parties = 1;
  const Report report = run_scenario(cfg);
  CHECK(report.all_pass());
  const Comparison* mix = find_quantity(report, "mixing-scalar-product");
  REQUIRE(mix != nullptr);
  CHECK(std::abs(mix->value - 2.0 * kPi) <= 1e-12);
  REQUIRE(find_check(report, "strict-slack") != nullptr);
  CHECK(find_check(report, "strict-slack")->pass);
}

TEST_CASE("single-qubit-simulator matches quantum statistics") {
  ScenarioConfig cfg;
  cfg.scenario = "single-qubit-simulator";
  cfg.n_parties = 1;
  cfg.samples = 3;
  const Report report = run_scenario(cfg);
  CHECK(report.all_pass());
  CHECK(find_quantity(report, "simulator-setting-error-max") != nullptr);
  CHECK(find_quantity(report, "simulator-scalar-product-worst") != nullptr);
}

TEST_CASE("tightening a tolerance to zero fails the simulator scenario") {
  ScenarioConfig cfg;
  cfg.scenario = "single-qubit-simulator";
  cfg.n_parties = 1;
  cfg.samples = 2;
  cfg.tolerances.simulator_abs = 0.0;  // staircase error is always > 0
  const Report report = run_scenario(cfg);
  CHECK_FALSE(report.all_pass());
}

TEST_CASE("ghz-witness certifies entanglement for every N") {
  ScenarioConfig cfg;
  cfg.scenario = "ghz-witness";
  cfg.n_parties = 4;
  const Report report = run_scenario(cfg);
  CHECK(report.all_pass());

  const Comparison* three = find_quantity(report, "ghz-sum-of-squares(N=3)");
  REQUIRE(three != nullptr);
  CHECK(std::abs(three->value - 4.0) <= 1e-12);
  const Comparison* four = find_quantity(report, "ghz-sum-of-squares(N=4)");
  REQUIRE(four != nullptr);
  CHECK(std::abs(four->value - 9.0) <= 1e-12);

  const Check* verdict = find_check(report, "separability-verdict(N=4)");
  REQUIRE(verdict != nullptr);
  CHECK(verdict->pass);
  CHECK(verdict->detail.find("violated") != std::string::npos);
}

TEST_CASE("bell-witness pins the tensor diagonal") {
  ScenarioConfig cfg;
  cfg.scenario = "bell-witness";
  cfg.n_parties = 2;
  const Report report = run_scenario(cfg);
  CHECK(report.all_pass());

  const Comparison* xx = find_quantity(report, "tensor-entry-xx");
  const Comparison* yy = find_quantity(report, "tensor-entry-yy");
  const Comparison* zz = find_quantity(report, "tensor-entry-zz");
  REQUIRE(xx != nullptr);
  REQUIRE(yy != nullptr);
  REQUIRE(zz != nullptr);
  CHECK(xx->value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(yy->value == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(zz->value == doctest::Approx(1.0).epsilon(1e-12));
  const Comparison* numeric = find_quantity(report, "scalar-product-numeric");
  REQUIRE(numeric != nullptr);
  CHECK(numeric->pass);
}

TEST_CASE("property-suite passes on the default grid") {
  ScenarioConfig cfg;
  cfg.scenario = "property-suite";
  cfg.n_parties = 2;
  cfg.samples = 4;
  const Report report = run_scenario(cfg);
  CHECK(report.all_pass());
  CHECK(find_quantity(report, "orthogonality-residual") != nullptr);
  CHECK(find_check(report, "bloch-ball-bound") != nullptr);
}

TEST_CASE("generic configs report product-state quantities") {
  const ScenarioConfig cfg = ScenarioConfig::parse(
      "scenario = report\n"
      "n-parties = 2\n"
      "state {\n"
      "  kind = mixed-product\n"
      "  party {\n    bloch = 0,0,0.5\n  }\n"
      "  party {\n    bloch = 0,0,1\n  }\n"
      "}\n");
  const Report report = run_scenario(cfg);
  CHECK(report.all_pass());

  const Comparison* sos = find_quantity(report, "sum-of-squares");
  REQUIRE(sos != nullptr);
  CHECK(std::abs(sos->value - 0.25) <= 1e-12);
  CHECK(sos->reference_formula == "prod_j |bloch_j|^2");

  const Comparison* numeric = find_quantity(report, "scalar-product-numeric");
  REQUIRE(numeric != nullptr);  // N = 2 stays under the quadrature cutoff
  CHECK(numeric->pass);

  const Check* verdict = find_check(report, "separability-verdict");
  REQUIRE(verdict != nullptr);
  CHECK(verdict->detail.find("satisfied") != std::string::npos);
}

TEST_CASE("generic configs accept explicit matrices and models") {
  const ScenarioConfig entangled = ScenarioConfig::parse(
      "scenario = report\n"
      "n-parties = 2\n"
      "state {\n"
      "  kind = bell\n"
      "}\n");
  const Report report = run_scenario(entangled);
  const Check* verdict = find_check(report, "separability-verdict");
  REQUIRE(verdict != nullptr);
  CHECK(verdict->detail.find("violated") != std::string::npos);

  const ScenarioConfig modeled = ScenarioConfig::parse(
      "scenario = report\n"
      "n-parties = 1\n"
      "model {\n"
      "  member {\n"
      "    weight = 1\n"
      "    response = sign-of-cos-theta\n"
      "  }\n"
      "}\n");
  const Report lhv = run_scenario(modeled);
  CHECK(lhv.all_pass());
  const Comparison* value = find_quantity(lhv, "lhv-scalar-product");
  REQUIRE(value != nullptr);
  CHECK(value->has_reference);  // single deterministic member saturates

  const ScenarioConfig bad = ScenarioConfig::parse(
      "scenario = report\n"
      "n-parties = 3\n"
      "state {\n  kind = bell\n}\n");
  CHECK_THROWS_AS(run_scenario(bad), ConfigError);
}

TEST_CASE("reports serialize to parseable JSON records") {
  ScenarioConfig cfg;
  cfg.scenario = "bell-witness";
  cfg.n_parties = 2;
  const std::vector<Report> reports = {run_scenario(cfg)};

  const std::string records = report_records(reports);
  std::istringstream lines(records);
  std::string line;
  int quantities = 0;
  int checks = 0;
  while (std::getline(lines, line)) {
    const nlohmann::json record = nlohmann::json::parse(line);
    CHECK(record.contains("record"));
    CHECK(record.contains("scenario"));
    CHECK(record.contains("name"));
    CHECK(record.contains("pass"));
    CHECK_FALSE(record.contains("duration_seconds"));
    if (record["record"] == "quantity") {
      ++quantities;
      if (record.contains("reference")) {
        CHECK(record.contains("reference_formula"));
        CHECK(record.contains("tolerance"));
      }
    } else {
      CHECK(record["record"] == "check");
      ++checks;
    }
  }
  CHECK(quantities == static_cast<int>(reports[0].quantities.size()));
  CHECK(checks == static_cast<int>(reports[0].checks.size()));

  const std::string summaries = report_summaries(reports);
  const nlohmann::json summary =
      nlohmann::json::parse(summaries.substr(0, summaries.find('\n')));
  CHECK(summary["record"] == "scenario-summary");
  CHECK(summary.contains("duration_seconds"));
  CHECK(summary["pass"] == true);

  const std::string csv = report_csv(reports);
  std::istringstream csv_lines(csv);
  std::string header;
  std::getline(csv_lines, header);
  CHECK(header ==
        "scenario,name,value,reference,reference_formula,abs_error,"
        "rel_error,tolerance,tolerance_kind,pass");
  int rows = 0;
  while (std::getline(csv_lines, line)) ++rows;
  CHECK(rows == static_cast<int>(reports[0].quantities.size()));
}

TEST_CASE("print_report_table renders a PASS footer") {
  ScenarioConfig cfg;
  cfg.scenario = "lhv-mixing-slack";
  cfg.n_parties = 1;
  const Report report = run_scenario(cfg);
  std::ostringstream out;
  print_report_table(report, out);
  const std::string text = out.str();
  CHECK(text.find("lhv-mixing-slack") != std::string::npos);
  CHECK(text.find("mixing-scalar-product") != std::string::npos);
  CHECK(text.find("reference formula:") != std::string::npos);
  CHECK(text.find("=> PASS") != std::string::npos);
}

TEST_CASE("verify_all runs every applicable scenario and passes") {
  const std::vector<Report> reports = verify_all(quick_options());
  CHECK(reports.size() == 8);
  for (const Report& report : reports) {
    CHECK(report.all_pass());
  }

  VerifyOptions single;
  single.max_n = 1;
  single.samples = 2;
  const std::vector<Report> trimmed = verify_all(single);
  CHECK(trimmed.size() == 6);  // ghz/bell witnesses need two parties
}

TEST_CASE("verify_all output is deterministic run to run") {
  const std::vector<Report> first = verify_all(quick_options());
  const std::vector<Report> second = verify_all(quick_options());
  CHECK(report_records(first) == report_records(second));
  CHECK(report_csv(first) == report_csv(second));
}

TEST_CASE("scenario round-trip preserves the records exactly") {
  const ScenarioConfig cfg = builtin_scenario("ghz-witness", quick_options());
  const ScenarioConfig reparsed = ScenarioConfig::parse(cfg.serialize());
  const std::vector<Report> a = {run_scenario(cfg)};
  const std::vector<Report> b = {run_scenario(reparsed)};
  CHECK(report_records(a) == report_records(b));
}

}  // TEST_SUITE("scenario")
