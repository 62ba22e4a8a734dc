// scenario.hpp
// Scenario runner: built-in verification scenarios reproducing the
// closed-form results (violation ratio 3^N, both scalar-product maxima,
// witness tensors, the single-qubit simulator), config-file parsing for
// user scenarios, and structured report output.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "corrsphere/config.hpp"
#include "corrsphere/lhv.hpp"
#include "corrsphere/quantum.hpp"

namespace corrsphere {

struct GridSpec {
  int n_theta = kDefaultThetaNodes;
  int n_phi = kDefaultPhiNodes;
};

struct Tolerances {
  double exact_rel = 1e-10;     // closed-form scalar product saturation
  double numeric_rel = 1e-9;    // quadrature vs closed form
  double lhv_rel = 1e-9;        // LHV scalar product vs (4*pi)^N
  double separability = 1e-9;   // sum T^2 vs 1
  double orthogonality_abs = 1e-12;  // grid orthogonality residual
  double ratio_rel = 1e-12;     // violation ratio vs 3^N
  double witness_rel = 1e-12;   // GHZ/Bell tensor values
  double purity_abs = 1e-12;    // Bloch-norm saturation for pure states
  double simulator_abs = 1e-4;  // per-setting |e_lr - n.bloch|
  double simulator_rel = 1e-3;  // simulator scalar product vs quantum value
};

struct StateSpec {
  enum class Kind {
    kNone,
    kPureProduct,
    kMixedProduct,
    kGhz,
    kBell,
    kExplicit
  };

  Kind kind = Kind::kNone;
  std::vector<std::pair<double, double>> angles;  // pure-product (theta, phi)
  std::vector<Vector3> blochs;                    // mixed-product
  Matrix matrix;                                  // explicit
};

struct ModelSpec {
  std::vector<MemberSpec> members;

  bool empty() const { return members.empty(); }
};

inline constexpr std::uint64_t kDefaultSeed = 20260817;

// Dense-matrix scenarios stop at 6 parties (64x64 states), closed-form
// product/ratio computations at 8.
inline constexpr int kMaxDenseParties = 6;
inline constexpr int kMaxClosedFormParties = 8;

struct ScenarioConfig {
  std::string scenario;
  int n_parties = 1;
  StateSpec state;
  ModelSpec model;
  GridSpec grid;
  Tolerances tolerances;
  int samples = 20;
  int resolution = kDefaultSimulatorResolution;
  std::uint64_t seed = kDefaultSeed;

  static ScenarioConfig parse(const std::string& text);
  std::string serialize() const;
};

// One computed number, optionally against a closed-form reference.
struct Comparison {
  std::string name;
  double value = 0.0;
  bool has_reference = false;
  double reference = 0.0;
  std::string reference_formula;  // closed form behind the reference
  double abs_error = 0.0;
  double rel_error = 0.0;
  std::string tol_kind = "rel";  // "rel" or "abs"
  double tolerance = 0.0;
  bool pass = true;
};

// Qualitative verdict (e.g. separability violated as expected).
struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct Report {
  std::string scenario;
  int n_parties = 0;
  GridSpec grid;
  std::string version = kVersion;
  std::vector<Comparison> quantities;
  std::vector<Check> checks;
  double duration_seconds = 0.0;

  bool all_pass() const;
};

// (E_LR, E_LR)_max / (E_Sep, E_Sep)_max = (4*pi)^N / (4*pi/3)^N = 3^N.
double violation_ratio(int n_parties);

struct VerifyOptions {
  int max_n = kMaxDenseParties;
  GridSpec grid;
  Tolerances tolerances;
  std::uint64_t seed = kDefaultSeed;
  int samples = 20;
};

const std::vector<std::string>& builtin_scenario_names();

// Fully populated config for a built-in scenario name.
ScenarioConfig builtin_scenario(const std::string& name,
                                const VerifyOptions& options = {});

Report run_scenario(const ScenarioConfig& config);

// Every built-in scenario plus the cross-module property suite; never
// aborts early, so all failures surface in one run.
std::vector<Report> verify_all(const VerifyOptions& options = {});

void print_report_table(const Report& report, std::ostream& out);

// Line-delimited JSON. Records hold only deterministic fields; the
// summaries carry wall-clock durations, kept separate so identical
// configs produce byte-identical record streams.
std::string report_records(const std::vector<Report>& reports);
std::string report_summaries(const std::vector<Report>& reports);

// CSV of all quantity rows (ratio/saturation tables).
std::string report_csv(const std::vector<Report>& reports);

}  // namespace corrsphere
