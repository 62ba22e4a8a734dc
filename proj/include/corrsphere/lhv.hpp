// lhv.hpp
// Local-hidden-variable models: finite weighted ensembles of
// deterministic +/-1 response functions, the correlation E_LR they
// induce, and its scalar product over the setting spheres. Includes the
// deterministic model that saturates the (4*pi)^N bound and a
// threshold model that reproduces single-qubit quantum statistics.

#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "corrsphere/core.hpp"
#include "corrsphere/quadrature.hpp"

namespace corrsphere {

// Deterministic map Setting -> {-1, +1}. Ties resolve as sign(0) := +1.
class ResponseFunction {
 public:
  // +1 on the upper hemisphere (cos(theta) >= 0), -1 below.
  static ResponseFunction sign_cos_theta();

  // sign(n . axis) for a fixed axis (need not be normalized).
  static ResponseFunction sign_dot(const Vector3& axis);

  // Constant +1 or -1 regardless of setting.
  static ResponseFunction constant(int value);

  // +1 iff lambda < (1 + n . bloch)/2; one hidden-variable slice of the
  // single-qubit simulator.
  static ResponseFunction threshold(const Vector3& bloch, double lambda);

  // Arbitrary signs sampled on a grid, node order theta-major. Only
  // evaluable at that grid's own nodes.
  static ResponseFunction sign_table(std::shared_ptr<const SphereGrid> grid,
                                     std::vector<int> signs);

  int operator()(const Setting& setting) const;

 private:
  struct SignCosTheta {};
  struct SignDot {
    Vector3 axis;
  };
  struct Constant {
    int value;
  };
  struct Threshold {
    Vector3 bloch;
    double lambda;
  };
  struct SignTable {
    std::shared_ptr<const SphereGrid> grid;
    std::vector<int> signs;
  };
  using Body = std::variant<SignCosTheta, SignDot, Constant, Threshold,
                            SignTable>;

  explicit ResponseFunction(Body body) : body_(std::move(body)) {}

  Body body_;
};

// Weighted ensemble over hidden variables; each member fixes one
// response function per party.
class LhvModel {
 public:
  struct Member {
    double weight = 0.0;
    std::vector<ResponseFunction> responses;
  };

  LhvModel(int n_parties, std::vector<Member> ensemble);

  int n_parties() const { return n_parties_; }
  const std::vector<Member>& ensemble() const { return ensemble_; }

 private:
  int n_parties_;
  std::vector<Member> ensemble_;
};

// Convex combination of models over the same party count.
LhvModel mix_models(const std::vector<std::pair<double, LhvModel>>& parts);

// E_LR = sum_lambda w(lambda) * prod_j I_j(n_j, lambda); in [-1, 1].
double e_lr(const LhvModel& model, std::span<const Setting> settings);

// Numeric (E_LR, E_LR) over the product of setting spheres.
double scalar_product_lhv(const LhvModel& model,
                          std::span<const SphereGrid> grids,
                          std::uint64_t node_budget = kDefaultNodeBudget);

// (4*pi)^n_parties, the ceiling no model can exceed.
double lhv_upper_bound(int n_parties);

// Single-hidden-variable deterministic model (all parties
// sign(cos(theta))); its correlation is +/-1 everywhere, so the scalar
// product hits (4*pi)^N.
LhvModel saturating_model(int n_parties);

inline constexpr int kDefaultSimulatorResolution = 10'000;

// One-party model with lambda_k = (k + 1/2)/resolution and response
// +1 iff lambda_k < (1 + n.bloch)/2. Reproduces the quantum prediction
// n.bloch within 1/resolution at every setting.
LhvModel single_qubit_simulator_model(
    const Vector3& bloch, int resolution = kDefaultSimulatorResolution);

// --- Model-specification vocabulary -------------------------------------
// Textual response predicates used by scenario configs:
//   sign-of-cos-theta
//   sign-of-dot-product-with(x,y,z)
//   constant(+1) | constant(-1)
//   threshold-simulator(x,y,z;resolution)
// threshold-simulator is an ensemble-level shorthand: building the model
// expands it into `resolution` equally weighted hidden-variable slices.

struct ResponseSpec {
  enum class Kind { kSignCosTheta, kSignDot, kConstant, kThresholdSimulator };

  Kind kind = Kind::kSignCosTheta;
  Vector3 vector = Vector3::Zero();  // axis (sign-dot) or bloch (simulator)
  int constant = 1;
  int resolution = kDefaultSimulatorResolution;

  static ResponseSpec parse(const std::string& text);
  std::string to_string() const;
};

struct MemberSpec {
  double weight = 1.0;
  std::vector<ResponseSpec> responses;
};

// Cap on the expanded ensemble size when threshold-simulator terms
// multiply out.
inline constexpr std::size_t kMaxEnsembleSize = 1'000'000;

LhvModel build_model(int n_parties, const std::vector<MemberSpec>& members);

}  // namespace corrsphere
