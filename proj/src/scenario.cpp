#include "corrsphere/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "corrsphere/quadrature.hpp"
#include "corrsphere/random.hpp"

namespace corrsphere {
namespace {

using ordered_json = nlohmann::ordered_json;

std::string with_n(const std::string& base, int n) {
  return base + "(N=" + std::to_string(n) + ")";
}

Comparison rel_compare(std::string name, double value, double reference,
                       std::string formula, double tol) {
  Comparison c;
  c.name = std::move(name);
  c.value = value;
  c.has_reference = true;
  c.reference = reference;
  c.reference_formula = std::move(formula);
  c.abs_error = std::abs(value - reference);
  c.rel_error =
      reference != 0.0 ? c.abs_error / std::abs(reference) : c.abs_error;
  c.tol_kind = "rel";
  c.tolerance = tol;
  c.pass = c.rel_error <= tol;
  return c;
}

Comparison abs_compare(std::string name, double value, double reference,
                       std::string formula, double tol) {
  Comparison c;
  c.name = std::move(name);
  c.value = value;
  c.has_reference = true;
  c.reference = reference;
  c.reference_formula = std::move(formula);
  c.abs_error = std::abs(value - reference);
  c.rel_error =
      reference != 0.0 ? c.abs_error / std::abs(reference) : c.abs_error;
  c.tol_kind = "abs";
  c.tolerance = tol;
  c.pass = c.abs_error <= tol;
  return c;
}

Comparison plain_value(std::string name, double value) {
  Comparison c;
  c.name = std::move(name);
  c.value = value;
  return c;
}

std::vector<SphereGrid> grids_for(int n_parties, const GridSpec& spec) {
  return std::vector<SphereGrid>(
      static_cast<std::size_t>(n_parties),
      build_grid(spec.n_theta, spec.n_phi));
}

// Sum T^2 for the n-party GHZ state: the z-basis diagonal contributes
// 2^(N-1) and the transverse x/y sector one more unit when N is even.
double ghz_sum_of_squares_reference(int n) {
  return std::ldexp(1.0, n - 1) + (n % 2 == 0 ? 1.0 : 0.0);
}

const char* kGhzFormula = "2^(N-1) + (1 if N even else 0)";

// --- built-in scenario runners -------------------------------------------

void run_main_result(const ScenarioConfig& cfg, Report& report) {
  const int max_n = std::min(cfg.n_parties, kMaxClosedFormParties);
  double previous = 0.0;
  for (int n = 1; n <= max_n; ++n) {
    report.quantities.push_back(rel_compare(
        with_n("sep-maximum", n), sep_upper_bound(n),
        int_pow(kFullSolidAngle / 3.0, n), "(4*pi/3)^N",
        cfg.tolerances.ratio_rel));
    report.quantities.push_back(rel_compare(
        with_n("lhv-maximum", n), lhv_upper_bound(n),
        int_pow(kFullSolidAngle, n), "(4*pi)^N", cfg.tolerances.ratio_rel));
    const double ratio = violation_ratio(n);
    report.quantities.push_back(rel_compare(with_n("violation-ratio", n),
                                            ratio, int_pow(3.0, n), "3^N",
                                            cfg.tolerances.ratio_rel));
    if (n > 1) {
      const double step = ratio / (3.0 * previous);
      Check check;
      check.name = with_n("ratio-recursion", n);
      check.pass = std::abs(step - 1.0) <= cfg.tolerances.ratio_rel;
      check.detail = "ratio(N)/(3*ratio(N-1)) = " + format_double(step);
      report.checks.push_back(check);
    }
    previous = ratio;
  }
}

void run_bloch_saturation(const ScenarioConfig& cfg, Report& report) {
  Rng rng(cfg.seed);
  const int max_n = std::min(cfg.n_parties, kMaxDenseParties);
  for (int n = 1; n <= max_n; ++n) {
    const double reference = sep_upper_bound(n);
    double worst_product = reference;
    double worst_product_dev = -1.0;
    double worst_norm = 1.0;
    double worst_norm_dev = -1.0;
    for (int s = 0; s < cfg.samples; ++s) {
      const ProductState state = random_pure_product(rng, n);
      const double sp = scalar_product_exact(
          correlation_tensor(JointState(state)));
      const double dev = std::abs(sp / reference - 1.0);
      if (dev > worst_product_dev) {
        worst_product_dev = dev;
        worst_product = sp;
      }
      const double norm = bloch_norm_product(state);
      if (std::abs(norm - 1.0) > worst_norm_dev) {
        worst_norm_dev = std::abs(norm - 1.0);
        worst_norm = norm;
      }
    }
    report.quantities.push_back(rel_compare(
        with_n("scalar-product-exact-worst", n), worst_product, reference,
        "(4*pi/3)^N", cfg.tolerances.exact_rel));
    report.quantities.push_back(abs_compare(
        with_n("bloch-norm-product-worst", n), worst_norm, 1.0,
        "1 (pure product)", cfg.tolerances.purity_abs));
  }
}

void run_lhv_saturation(const ScenarioConfig& cfg, Report& report) {
  Rng rng(cfg.seed);
  const int max_n = std::min(cfg.n_parties, 3);
  for (int n = 1; n <= max_n; ++n) {
    const LhvModel model = saturating_model(n);
    const std::vector<SphereGrid> grids = grids_for(n, cfg.grid);
    const double value = scalar_product_lhv(model, grids);
    report.quantities.push_back(rel_compare(
        with_n("lhv-scalar-product", n), value, lhv_upper_bound(n),
        "(4*pi)^N", cfg.tolerances.lhv_rel));

    double worst = 0.0;
    for (int s = 0; s < 8; ++s) {
      const std::vector<Setting> settings = random_settings(rng, n);
      const double e = e_lr(model, settings);
      worst = std::max(worst, std::abs(e * e - 1.0));
    }
    Check check;
    check.name = with_n("deterministic-correlation", n);
    check.pass = worst == 0.0;
    check.detail = "max |E^2 - 1| over sampled settings = " +
                   format_double(worst);
    report.checks.push_back(check);
  }
}

void run_lhv_mixing_slack(const ScenarioConfig& cfg, Report& report) {
  // Equal mixture of sign(cos(theta)) and constant(+1): the two hidden
  // variables disagree on the lower hemisphere, so E_LR vanishes there
  // and the scalar product drops to 2*pi (half the 4*pi maximum).
  std::vector<MemberSpec> members(2);
  members[0].weight = 0.5;
  members[0].responses = {ResponseSpec{}};  // sign-of-cos-theta
  members[1].weight = 0.5;
  ResponseSpec constant_plus;
  constant_plus.kind = ResponseSpec::Kind::kConstant;
  constant_plus.constant = 1;
  members[1].responses = {constant_plus};
  const LhvModel model = build_model(1, members);

  const std::vector<SphereGrid> grids = grids_for(1, cfg.grid);
  const double value = scalar_product_lhv(model, grids);
  report.quantities.push_back(rel_compare("mixing-scalar-product", value,
                                          2.0 * kPi, "2*pi",
                                          cfg.tolerances.lhv_rel));

  const double bound = lhv_upper_bound(1);
  Check below;
  below.name = "bound-satisfied";
  below.pass = value <= bound * (1.0 + cfg.tolerances.lhv_rel);
  below.detail = "scalar product " + format_double(value) +
                 " vs bound " + format_double(bound);
  report.checks.push_back(below);

  Check slack;
  slack.name = "strict-slack";
  slack.pass = value < bound - 1.0;
  slack.detail = "gap to (4*pi) = " + format_double(bound - value);
  report.checks.push_back(slack);
}

void run_single_qubit_simulator(const ScenarioConfig& cfg, Report& report) {
  Rng rng(cfg.seed);
  const SphereGrid grid = build_grid(cfg.grid.n_theta, cfg.grid.n_phi);
  const std::vector<SphereGrid> grids(1, grid);

  // Norms stay >= 0.7: the scalar-product claim is relative, and the
  // simulator's 1/resolution staircase error is absolute, so tiny Bloch
  // vectors would make the relative form vacuous.
  double max_setting_error = 0.0;
  double worst_sp = 0.0;
  double worst_sp_ref = 1.0;
  double worst_sp_dev = -1.0;
  for (int s = 0; s < cfg.samples; ++s) {
    const Vector3 bloch = random_bloch_in_shell(rng, 0.7, 1.0);
    const LhvModel model = single_qubit_simulator_model(bloch, cfg.resolution);
    for (const auto& [setting, weight] : grid.nodes()) {
      const Setting one[] = {setting};
      const double err =
          std::abs(e_lr(model, one) - setting.unit_vector().dot(bloch));
      max_setting_error = std::max(max_setting_error, err);
    }
    const double sp = scalar_product_lhv(model, grids);
    const double reference =
        (kFullSolidAngle / 3.0) * bloch.squaredNorm();
    const double dev = std::abs(sp / reference - 1.0);
    if (dev > worst_sp_dev) {
      worst_sp_dev = dev;
      worst_sp = sp;
      worst_sp_ref = reference;
    }
  }
  report.quantities.push_back(abs_compare(
      "simulator-setting-error-max", max_setting_error, 0.0,
      "0 (model reproduces n.bloch)", cfg.tolerances.simulator_abs));
  report.quantities.push_back(rel_compare(
      "simulator-scalar-product-worst", worst_sp, worst_sp_ref,
      "(4*pi/3)*|bloch|^2", cfg.tolerances.simulator_rel));
}

void run_ghz_witness(const ScenarioConfig& cfg, Report& report) {
  const int max_n = std::min(cfg.n_parties, kMaxDenseParties);
  for (int n = 2; n <= max_n; ++n) {
    const CorrelationTensor tensor = correlation_tensor(ghz_state(n));
    const double sos = tensor.sum_of_squares();
    report.quantities.push_back(rel_compare(
        with_n("ghz-sum-of-squares", n), sos, ghz_sum_of_squares_reference(n),
        kGhzFormula, cfg.tolerances.witness_rel));
    report.quantities.push_back(rel_compare(
        with_n("scalar-product-exact", n), scalar_product_exact(tensor),
        sep_upper_bound(n) * ghz_sum_of_squares_reference(n),
        "(4*pi/3)^N * sum T^2", cfg.tolerances.witness_rel));

    const SeparabilityVerdict verdict =
        separability_check(tensor, cfg.tolerances.separability);
    Check check;
    check.name = with_n("separability-verdict", n);
    check.pass = !verdict.satisfied;
    check.detail = std::string(verdict.satisfied ? "satisfied" : "violated") +
                   " (sum of squares = " +
                   format_double(verdict.sum_of_squares) +
                   "), expected violated";
    report.checks.push_back(check);
  }
}

void run_bell_witness(const ScenarioConfig& cfg, Report& report) {
  const JointState state = bell_state();
  const CorrelationTensor tensor = correlation_tensor(state);
  const double tol = cfg.tolerances.witness_rel;
  const int xx[] = {0, 0};
  const int yy[] = {1, 1};
  const int zz[] = {2, 2};
  report.quantities.push_back(
      rel_compare("tensor-entry-xx", tensor.at(xx), 1.0, "+1", tol));
  report.quantities.push_back(
      rel_compare("tensor-entry-yy", tensor.at(yy), -1.0, "-1", tol));
  report.quantities.push_back(
      rel_compare("tensor-entry-zz", tensor.at(zz), 1.0, "+1", tol));
  report.quantities.push_back(rel_compare(
      "sum-of-squares", tensor.sum_of_squares(), 3.0, "3", tol));

  const double exact = scalar_product_exact(tensor);
  report.quantities.push_back(rel_compare(
      "scalar-product-exact", exact, 3.0 * sep_upper_bound(2),
      "3*(4*pi/3)^2", cfg.tolerances.exact_rel));

  const std::vector<SphereGrid> grids = grids_for(2, cfg.grid);
  const double numeric = scalar_product_numeric(
      [&tensor](std::span<const Setting> s) {
        return e_sep_from_tensor(tensor, s);
      },
      grids);
  report.quantities.push_back(rel_compare("scalar-product-numeric", numeric,
                                          exact, "(4*pi/3)^N * sum T^2",
                                          cfg.tolerances.numeric_rel));

  const SeparabilityVerdict verdict =
      separability_check(tensor, cfg.tolerances.separability);
  Check check;
  check.name = "separability-verdict";
  check.pass = !verdict.satisfied;
  check.detail = std::string(verdict.satisfied ? "satisfied" : "violated") +
                 " (sum of squares = " +
                 format_double(verdict.sum_of_squares) +
                 "), expected violated";
  report.checks.push_back(check);
}

// Analytic full-sphere integral of x^a y^b z^c (zero when any exponent
// is odd); used to verify grid exactness inside the property suite.
double double_factorial(int n) {
  double r = 1.0;
  for (int k = n; k > 1; k -= 2) r *= k;
  return r;
}

double monomial_integral(int a, int b, int c) {
  if (a % 2 == 1 || b % 2 == 1 || c % 2 == 1) return 0.0;
  return kFullSolidAngle * double_factorial(a - 1) * double_factorial(b - 1) *
         double_factorial(c - 1) / double_factorial(a + b + c + 1);
}

void run_property_suite(const ScenarioConfig& cfg, Report& report) {
  Rng rng(cfg.seed);

  // Orthogonality of direction cosines on the configured grid.
  report.quantities.push_back(abs_compare(
      "orthogonality-residual",
      orthogonality_residual(build_grid(cfg.grid.n_theta, cfg.grid.n_phi)),
      0.0, "(4*pi/3)*delta_ab", cfg.tolerances.orthogonality_abs));

  // Exactness of a finer grid on all monomials up to degree 7.
  {
    const SphereGrid fine = build_grid(8, 16);
    double worst = 0.0;
    for (int a = 0; a <= 7; ++a) {
      for (int b = 0; a + b <= 7; ++b) {
        for (int c = 0; a + b + c <= 7; ++c) {
          const double numeric = integrate_sphere(
              [a, b, c](const Setting& s) {
                const Vector3 v = s.unit_vector();
                return int_pow(v.x(), a) * int_pow(v.y(), b) *
                       int_pow(v.z(), c);
              },
              fine);
          worst = std::max(worst, std::abs(numeric - monomial_integral(a, b, c)));
        }
      }
    }
    report.quantities.push_back(abs_compare(
        "monomial-exactness-max", worst, 0.0,
        "4*pi*(a-1)!!(b-1)!!(c-1)!!/(a+b+c+1)!!", 1e-13));
  }

  // Dense trace and tensor contraction agree on random product states.
  {
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const int n = 1 + i % 3;
      const ProductState product = random_mixed_product(rng, n);
      const JointState fast(product);
      const JointState dense(product.joint_density());
      const std::vector<Setting> settings = random_settings(rng, n);
      const double direct = e_sep(dense, settings);
      const double contracted =
          e_sep_from_tensor(correlation_tensor(fast), settings);
      worst = std::max(worst, std::abs(direct - contracted));
    }
    report.quantities.push_back(abs_compare(
        "e-sep-equivalence-max", worst, 0.0,
        "0 (trace vs tensor contraction)", 1e-12));
  }

  // Damping one party of a product state scales sum T^2 by (1-p)^2.
  {
    const double p = 0.3;
    const QubitState a = QubitState::from_bloch(Vector3(0.3, -0.4, 0.5));
    const QubitState b = QubitState::from_bloch(Vector3(-0.1, 0.6, 0.2));
    const QubitState damped =
        QubitState::from_bloch((1.0 - p) * b.bloch());
    const double base = correlation_tensor(JointState(ProductState({a, b})))
                            .sum_of_squares();
    const double scaled =
        correlation_tensor(JointState(ProductState({a, damped})))
            .sum_of_squares();
    report.quantities.push_back(rel_compare(
        "damping-ratio", scaled, (1.0 - p) * (1.0 - p) * base,
        "(1-p)^2 * sum T^2", 1e-12));
  }

  // Bloch vectors of random density matrices stay in the unit ball;
  // pure states sit on the surface.
  {
    double max_norm = 0.0;
    for (int i = 0; i < 200; ++i) {
      const QubitState q(random_density_matrix(rng, 2));
      max_norm = std::max(max_norm, q.bloch().squaredNorm());
    }
    Check ball;
    ball.name = "bloch-ball-bound";
    ball.pass = max_norm <= 1.0 + 1e-12;
    ball.detail = "max |bloch|^2 over 200 random states = " +
                  format_double(max_norm);
    report.checks.push_back(ball);

    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      const QubitState q = random_pure_qubit(rng);
      worst = std::max(worst, std::abs(q.bloch().squaredNorm() - 1.0));
    }
    report.quantities.push_back(abs_compare(
        "pure-bloch-norm-deviation-max", worst, 0.0, "|bloch|^2 = 1",
        cfg.tolerances.purity_abs));
  }

  // Correlation-tensor entries of arbitrary two-qubit states are
  // expectation values of +/-1 observables.
  {
    double max_entry = 0.0;
    for (int i = 0; i < 50; ++i) {
      const CorrelationTensor tensor =
          correlation_tensor(JointState(random_density_matrix(rng, 4)));
      for (double t : tensor.values()) {
        max_entry = std::max(max_entry, std::abs(t));
      }
    }
    Check bound;
    bound.name = "tensor-entry-bound";
    bound.pass = max_entry <= 1.0 + 1e-12;
    bound.detail = "max |T| over 50 random two-qubit states = " +
                   format_double(max_entry);
    report.checks.push_back(bound);
  }

  // No random ensemble model exceeds the (4*pi)^N ceiling.
  {
    double max_ratio = 0.0;
    for (int i = 0; i < 40; ++i) {
      const int n = 1 + i % 2;
      const auto grid = std::make_shared<const SphereGrid>(build_grid(2, 4));
      const int n_members = 1 + static_cast<int>(rng.uniform01() * 3.0);
      std::vector<double> weights(static_cast<std::size_t>(n_members));
      double total = 0.0;
      for (double& w : weights) {
        w = 0.1 + rng.uniform01();
        total += w;
      }
      std::vector<LhvModel::Member> members;
      for (int m = 0; m < n_members; ++m) {
        LhvModel::Member member;
        member.weight = weights[static_cast<std::size_t>(m)] / total;
        for (int j = 0; j < n; ++j) {
          std::vector<int> signs(grid->node_count());
          for (int& s : signs) s = rng.uniform01() < 0.5 ? -1 : 1;
          member.responses.push_back(
              ResponseFunction::sign_table(grid, std::move(signs)));
        }
        members.push_back(std::move(member));
      }
      const LhvModel model(n, std::move(members));
      const std::vector<SphereGrid> grids(static_cast<std::size_t>(n), *grid);
      const double value = scalar_product_lhv(model, grids);
      max_ratio = std::max(max_ratio, value / lhv_upper_bound(n));
    }
    Check bound;
    bound.name = "lhv-bound-random-models";
    bound.pass = max_ratio <= 1.0 + cfg.tolerances.lhv_rel;
    bound.detail = "max (E_LR,E_LR)/(4*pi)^N over 40 random models = " +
                   format_double(max_ratio);
    report.checks.push_back(bound);
  }

  // Mixing models mixes correlations linearly.
  {
    const LhvModel pure = saturating_model(1);
    ResponseSpec constant_minus;
    constant_minus.kind = ResponseSpec::Kind::kConstant;
    constant_minus.constant = -1;
    MemberSpec member;
    member.weight = 1.0;
    member.responses = {constant_minus};
    const LhvModel flipped = build_model(1, {member});
    const LhvModel mixed = mix_models({{0.3, pure}, {0.7, flipped}});
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
      const std::vector<Setting> settings = random_settings(rng, 1);
      const double direct = e_lr(mixed, settings);
      const double combined =
          0.3 * e_lr(pure, settings) + 0.7 * e_lr(flipped, settings);
      worst = std::max(worst, std::abs(direct - combined));
    }
    report.quantities.push_back(abs_compare(
        "mixture-convexity-max", worst, 0.0, "0 (linear mixing)", 1e-12));
  }
}

// --- generic config-driven runner ----------------------------------------

JointState state_from_spec(const ScenarioConfig& cfg) {
  const StateSpec& spec = cfg.state;
  switch (spec.kind) {
    case StateSpec::Kind::kPureProduct: {
      if (static_cast<int>(spec.angles.size()) != cfg.n_parties) {
        throw ConfigError("pure-product state declares " +
                          std::to_string(spec.angles.size()) +
                          " parties, scenario has " +
                          std::to_string(cfg.n_parties));
      }
      std::vector<QubitState> parties;
      for (const auto& [theta, phi] : spec.angles) {
        parties.push_back(QubitState::pure(theta, phi));
      }
      return JointState(ProductState(std::move(parties)));
    }
    case StateSpec::Kind::kMixedProduct: {
      if (static_cast<int>(spec.blochs.size()) != cfg.n_parties) {
        throw ConfigError("mixed-product state declares " +
                          std::to_string(spec.blochs.size()) +
                          " parties, scenario has " +
                          std::to_string(cfg.n_parties));
      }
      std::vector<QubitState> parties;
      for (const Vector3& b : spec.blochs) {
        parties.push_back(QubitState::from_bloch(b));
      }
      return JointState(ProductState(std::move(parties)));
    }
    case StateSpec::Kind::kGhz:
      return ghz_state(cfg.n_parties);
    case StateSpec::Kind::kBell:
      if (cfg.n_parties != 2) {
        throw ConfigError("bell state requires n-parties = 2, got " +
                          std::to_string(cfg.n_parties));
      }
      return bell_state();
    case StateSpec::Kind::kExplicit: {
      if (spec.matrix.rows() != (Eigen::Index{1} << cfg.n_parties)) {
        throw ConfigError("explicit state dimension " +
                          std::to_string(spec.matrix.rows()) +
                          " does not match n-parties = " +
                          std::to_string(cfg.n_parties));
      }
      return JointState(spec.matrix);
    }
    case StateSpec::Kind::kNone:
      break;
  }
  throw ConfigError("scenario has no state specification");
}

void run_generic(const ScenarioConfig& cfg, Report& report) {
  if (cfg.state.kind == StateSpec::Kind::kNone && cfg.model.empty()) {
    throw ConfigError("scenario '" + cfg.scenario +
                      "' declares neither a state nor a model");
  }

  const bool product_state = cfg.state.kind == StateSpec::Kind::kPureProduct ||
                             cfg.state.kind == StateSpec::Kind::kMixedProduct;
  if (cfg.state.kind != StateSpec::Kind::kNone && !product_state &&
      cfg.n_parties > kMaxDenseParties) {
    throw ConfigError("dense states stop at " +
                      std::to_string(kMaxDenseParties) + " parties, got " +
                      std::to_string(cfg.n_parties));
  }

  if (cfg.state.kind != StateSpec::Kind::kNone) {
    const JointState state = state_from_spec(cfg);
    const CorrelationTensor tensor = correlation_tensor(state);
    const double sos = tensor.sum_of_squares();
    const double exact = scalar_product_exact(tensor);

    if (state.has_factors()) {
      const double norm_product = bloch_norm_product(state.factors());
      report.quantities.push_back(rel_compare("sum-of-squares", sos,
                                              norm_product,
                                              "prod_j |bloch_j|^2",
                                              cfg.tolerances.witness_rel));
      report.quantities.push_back(rel_compare(
          "scalar-product-exact", exact,
          sep_upper_bound(cfg.n_parties) * norm_product,
          "(4*pi/3)^N * prod_j |bloch_j|^2", cfg.tolerances.exact_rel));
    } else {
      report.quantities.push_back(plain_value("sum-of-squares", sos));
      report.quantities.push_back(plain_value("scalar-product-exact", exact));
    }

    if (cfg.n_parties <= 3) {
      const std::vector<SphereGrid> grids =
          grids_for(cfg.n_parties, cfg.grid);
      const double numeric = scalar_product_numeric(
          [&tensor](std::span<const Setting> s) {
            return e_sep_from_tensor(tensor, s);
          },
          grids);
      report.quantities.push_back(rel_compare(
          "scalar-product-numeric", numeric, exact, "(4*pi/3)^N * sum T^2",
          cfg.tolerances.numeric_rel));
    }

    const SeparabilityVerdict verdict =
        separability_check(tensor, cfg.tolerances.separability);
    Check check;
    check.name = "separability-verdict";
    check.pass = true;  // informational unless the config sets an expectation
    check.detail = std::string(verdict.satisfied ? "satisfied" : "violated") +
                   " (sum of squares = " +
                   format_double(verdict.sum_of_squares) + ")";
    report.checks.push_back(check);
  }

  if (!cfg.model.empty()) {
    const LhvModel model = build_model(cfg.n_parties, cfg.model.members);
    const std::vector<SphereGrid> grids = grids_for(cfg.n_parties, cfg.grid);
    const double value = scalar_product_lhv(model, grids);
    const double bound = lhv_upper_bound(cfg.n_parties);

    bool deterministic = cfg.model.members.size() == 1;
    for (const ResponseSpec& r : cfg.model.members.front().responses) {
      if (r.kind == ResponseSpec::Kind::kThresholdSimulator) {
        deterministic = false;
      }
    }
    if (deterministic) {
      report.quantities.push_back(rel_compare("lhv-scalar-product", value,
                                              bound, "(4*pi)^N",
                                              cfg.tolerances.lhv_rel));
    } else {
      report.quantities.push_back(plain_value("lhv-scalar-product", value));
    }

    Check check;
    check.name = "lhv-bound";
    check.pass = value <= bound * (1.0 + cfg.tolerances.lhv_rel);
    check.detail = "scalar product " + format_double(value) + " vs (4*pi)^N " +
                   format_double(bound);
    report.checks.push_back(check);
  }

  report.quantities.push_back(rel_compare(
      with_n("violation-ratio", cfg.n_parties), violation_ratio(cfg.n_parties),
      int_pow(3.0, cfg.n_parties), "3^N", cfg.tolerances.ratio_rel));
}

}  // namespace

bool Report::all_pass() const {
  for (const Comparison& c : quantities) {
    if (!c.pass) return false;
  }
  for (const Check& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

double violation_ratio(int n_parties) {
  if (n_parties < 1) {
    throw ValidationError("violation_ratio: need at least one party, got " +
                          std::to_string(n_parties));
  }
  return lhv_upper_bound(n_parties) /
         int_pow(kFullSolidAngle / 3.0, n_parties);
}

const std::vector<std::string>& builtin_scenario_names() {
  static const std::vector<std::string> names = {
      "main-result",      "bloch-saturation", "lhv-saturation",
      "lhv-mixing-slack", "single-qubit-simulator", "ghz-witness",
      "bell-witness",     "property-suite"};
  return names;
}

ScenarioConfig builtin_scenario(const std::string& name,
                                const VerifyOptions& options) {
  const auto& names = builtin_scenario_names();
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    throw ConfigError("unknown built-in scenario '" + name + "'");
  }
  ScenarioConfig cfg;
  cfg.scenario = name;
  cfg.grid = options.grid;
  cfg.tolerances = options.tolerances;
  cfg.samples = options.samples;
  cfg.seed = options.seed;
  if (name == "main-result") {
    cfg.n_parties = std::min(kMaxClosedFormParties, std::max(options.max_n, 1));
  } else if (name == "bloch-saturation" || name == "ghz-witness") {
    cfg.n_parties = std::min(kMaxDenseParties, std::max(options.max_n, 1));
  } else if (name == "lhv-saturation" || name == "property-suite") {
    cfg.n_parties = std::min(3, std::max(options.max_n, 1));
  } else if (name == "bell-witness") {
    cfg.n_parties = 2;
  } else {
    cfg.n_parties = 1;
  }
  return cfg;
}

Report run_scenario(const ScenarioConfig& config) {
  if (config.scenario.empty()) {
    throw ConfigError("scenario name must not be empty");
  }
  if (config.n_parties < 1 || config.n_parties > kMaxClosedFormParties) {
    throw ConfigError("n-parties must lie in 1.." +
                      std::to_string(kMaxClosedFormParties) + ", got " +
                      std::to_string(config.n_parties));
  }
  if (config.grid.n_theta < 1 || config.grid.n_phi < 1) {
    throw ConfigError("grid node counts must be positive");
  }
  if (config.samples < 1) {
    throw ConfigError("samples must be positive");
  }
  if (config.resolution < 1) {
    throw ConfigError("resolution must be positive");
  }

  const auto start = std::chrono::steady_clock::now();
  Report report;
  report.scenario = config.scenario;
  report.n_parties = config.n_parties;
  report.grid = config.grid;

  if (config.scenario == "main-result") {
    run_main_result(config, report);
  } else if (config.scenario == "bloch-saturation") {
    run_bloch_saturation(config, report);
  } else if (config.scenario == "lhv-saturation") {
    run_lhv_saturation(config, report);
  } else if (config.scenario == "lhv-mixing-slack") {
    run_lhv_mixing_slack(config, report);
  } else if (config.scenario == "single-qubit-simulator") {
    run_single_qubit_simulator(config, report);
  } else if (config.scenario == "ghz-witness") {
    run_ghz_witness(config, report);
  } else if (config.scenario == "bell-witness") {
    run_bell_witness(config, report);
  } else if (config.scenario == "property-suite") {
    run_property_suite(config, report);
  } else {
    run_generic(config, report);
  }

  const auto end = std::chrono::steady_clock::now();
  report.duration_seconds =
      std::chrono::duration<double>(end - start).count();
  return report;
}

std::vector<Report> verify_all(const VerifyOptions& options) {
  std::vector<Report> reports;
  for (const std::string& name : builtin_scenario_names()) {
    if ((name == "ghz-witness" || name == "bell-witness") &&
        options.max_n < 2) {
      continue;  // these need at least two parties
    }
    reports.push_back(run_scenario(builtin_scenario(name, options)));
  }
  return reports;
}

// --- config parsing / serialization --------------------------------------

namespace {

Vector3 parse_bloch_scalar(const std::string& text) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(',', start);
    if (pos == std::string::npos) {
      parts.push_back(text.substr(start));
      break;
    }
    parts.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
  if (parts.size() != 3) {
    throw ConfigError("bloch vector needs three comma-separated components, "
                      "got '" + text + "'");
  }
  return Vector3(parse_config_real(parts[0], "bloch"),
                 parse_config_real(parts[1], "bloch"),
                 parse_config_real(parts[2], "bloch"));
}

std::string bloch_to_scalar(const Vector3& v) {
  return format_double(v.x()) + "," + format_double(v.y()) + "," +
         format_double(v.z());
}

StateSpec parse_state_block(const ConfigBlock& block, int n_parties) {
  StateSpec spec;
  const std::string kind = block.get_scalar("kind");
  if (kind == "pure-product") {
    spec.kind = StateSpec::Kind::kPureProduct;
    for (const ConfigBlock* party : block.blocks("party")) {
      spec.angles.emplace_back(party->get_real("theta"),
                               party->get_real("phi"));
    }
    if (spec.angles.empty()) {
      throw ConfigError("pure-product state needs party blocks");
    }
  } else if (kind == "mixed-product") {
    spec.kind = StateSpec::Kind::kMixedProduct;
    for (const ConfigBlock* party : block.blocks("party")) {
      spec.blochs.push_back(parse_bloch_scalar(party->get_scalar("bloch")));
    }
    if (spec.blochs.empty()) {
      throw ConfigError("mixed-product state needs party blocks");
    }
  } else if (kind == "ghz") {
    spec.kind = StateSpec::Kind::kGhz;
  } else if (kind == "bell") {
    spec.kind = StateSpec::Kind::kBell;
  } else if (kind == "explicit") {
    spec.kind = StateSpec::Kind::kExplicit;
    const auto dim = block.get_int("dimension");
    if (dim < 2 || dim > (std::int64_t{1} << kMaxDenseParties)) {
      throw ConfigError("explicit state dimension out of range: " +
                        std::to_string(dim));
    }
    const std::vector<std::string> rows = block.scalars("row");
    if (static_cast<std::int64_t>(rows.size()) != dim) {
      throw ConfigError("explicit state needs " + std::to_string(dim) +
                        " row entries, got " + std::to_string(rows.size()));
    }
    spec.matrix = Matrix::Zero(dim, dim);
    for (std::int64_t i = 0; i < dim; ++i) {
      std::istringstream in(rows[static_cast<std::size_t>(i)]);
      std::vector<double> numbers;
      std::string token;
      while (in >> token) {
        numbers.push_back(parse_config_real(token, "state row"));
      }
      if (static_cast<std::int64_t>(numbers.size()) != 2 * dim) {
        throw ConfigError("state row " + std::to_string(i + 1) + " needs " +
                          std::to_string(2 * dim) +
                          " numbers (re im pairs), got " +
                          std::to_string(numbers.size()));
      }
      for (std::int64_t j = 0; j < dim; ++j) {
        spec.matrix(i, j) =
            Complex(numbers[static_cast<std::size_t>(2 * j)],
                    numbers[static_cast<std::size_t>(2 * j + 1)]);
      }
    }
  } else {
    throw ConfigError("unknown state kind '" + kind + "'");
  }
  (void)n_parties;  // cross-checked against the parsed spec in run_scenario
  return spec;
}

ModelSpec parse_model_block(const ConfigBlock& block) {
  ModelSpec spec;
  for (const ConfigBlock* member : block.blocks("member")) {
    MemberSpec m;
    m.weight = member->get_real("weight");
    for (const std::string& response : member->scalars("response")) {
      m.responses.push_back(ResponseSpec::parse(response));
    }
    if (m.responses.empty()) {
      throw ConfigError("ensemble member needs response entries");
    }
    spec.members.push_back(std::move(m));
  }
  if (spec.members.empty()) {
    throw ConfigError("model block needs member blocks");
  }
  return spec;
}

}  // namespace

ScenarioConfig ScenarioConfig::parse(const std::string& text) {
  const ConfigBlock root = parse_config(text);
  ScenarioConfig cfg;
  cfg.scenario = root.get_scalar("scenario");
  cfg.n_parties = static_cast<int>(root.get_int("n-parties"));
  cfg.samples = static_cast<int>(root.get_int_or("samples", cfg.samples));
  cfg.resolution =
      static_cast<int>(root.get_int_or("resolution", cfg.resolution));
  const std::int64_t seed =
      root.get_int_or("seed", static_cast<std::int64_t>(cfg.seed));
  if (seed < 0) throw ConfigError("seed must be non-negative");
  cfg.seed = static_cast<std::uint64_t>(seed);

  if (const ConfigBlock* grid = root.find_block("grid")) {
    cfg.grid.n_theta = static_cast<int>(grid->get_int("n-theta"));
    cfg.grid.n_phi = static_cast<int>(grid->get_int("n-phi"));
  }
  if (const ConfigBlock* tol = root.find_block("tolerances")) {
    Tolerances& t = cfg.tolerances;
    t.exact_rel = tol->get_real_or("exact-rel", t.exact_rel);
    t.numeric_rel = tol->get_real_or("numeric-rel", t.numeric_rel);
    t.lhv_rel = tol->get_real_or("lhv-rel", t.lhv_rel);
    t.separability = tol->get_real_or("separability", t.separability);
    t.orthogonality_abs =
        tol->get_real_or("orthogonality-abs", t.orthogonality_abs);
    t.ratio_rel = tol->get_real_or("ratio-rel", t.ratio_rel);
    t.witness_rel = tol->get_real_or("witness-rel", t.witness_rel);
    t.purity_abs = tol->get_real_or("purity-abs", t.purity_abs);
    t.simulator_abs = tol->get_real_or("simulator-abs", t.simulator_abs);
    t.simulator_rel = tol->get_real_or("simulator-rel", t.simulator_rel);
  }
  if (const ConfigBlock* state = root.find_block("state")) {
    cfg.state = parse_state_block(*state, cfg.n_parties);
  }
  if (const ConfigBlock* model = root.find_block("model")) {
    cfg.model = parse_model_block(*model);
  }
  return cfg;
}

std::string ScenarioConfig::serialize() const {
  ConfigBlock root;
  root.add_scalar("scenario", scenario);
  root.add_int("n-parties", n_parties);
  root.add_int("samples", samples);
  root.add_int("resolution", resolution);
  root.add_int("seed", static_cast<std::int64_t>(seed));

  ConfigBlock& grid_block = root.add_block("grid");
  grid_block.add_int("n-theta", grid.n_theta);
  grid_block.add_int("n-phi", grid.n_phi);

  ConfigBlock& tol = root.add_block("tolerances");
  tol.add_real("exact-rel", tolerances.exact_rel);
  tol.add_real("numeric-rel", tolerances.numeric_rel);
  tol.add_real("lhv-rel", tolerances.lhv_rel);
  tol.add_real("separability", tolerances.separability);
  tol.add_real("orthogonality-abs", tolerances.orthogonality_abs);
  tol.add_real("ratio-rel", tolerances.ratio_rel);
  tol.add_real("witness-rel", tolerances.witness_rel);
  tol.add_real("purity-abs", tolerances.purity_abs);
  tol.add_real("simulator-abs", tolerances.simulator_abs);
  tol.add_real("simulator-rel", tolerances.simulator_rel);

  if (state.kind != StateSpec::Kind::kNone) {
    ConfigBlock& s = root.add_block("state");
    switch (state.kind) {
      case StateSpec::Kind::kPureProduct:
        s.add_scalar("kind", "pure-product");
        for (const auto& [theta, phi] : state.angles) {
          ConfigBlock& party = s.add_block("party");
          party.add_real("theta", theta);
          party.add_real("phi", phi);
        }
        break;
      case StateSpec::Kind::kMixedProduct:
        s.add_scalar("kind", "mixed-product");
        for (const Vector3& b : state.blochs) {
          ConfigBlock& party = s.add_block("party");
          party.add_scalar("bloch", bloch_to_scalar(b));
        }
        break;
      case StateSpec::Kind::kGhz:
        s.add_scalar("kind", "ghz");
        break;
      case StateSpec::Kind::kBell:
        s.add_scalar("kind", "bell");
        break;
      case StateSpec::Kind::kExplicit: {
        s.add_scalar("kind", "explicit");
        s.add_int("dimension", state.matrix.rows());
        for (Eigen::Index i = 0; i < state.matrix.rows(); ++i) {
          std::string row;
          for (Eigen::Index j = 0; j < state.matrix.cols(); ++j) {
            if (j > 0) row += " ";
            row += format_double(state.matrix(i, j).real()) + " " +
                   format_double(state.matrix(i, j).imag());
          }
          s.add_scalar("row", row);
        }
        break;
      }
      case StateSpec::Kind::kNone:
        break;
    }
  }

  if (!model.empty()) {
    ConfigBlock& m = root.add_block("model");
    for (const MemberSpec& member : model.members) {
      ConfigBlock& mb = m.add_block("member");
      mb.add_real("weight", member.weight);
      for (const ResponseSpec& r : member.responses) {
        mb.add_scalar("response", r.to_string());
      }
    }
  }
  return root.serialize();
}

// --- report output --------------------------------------------------------

void print_report_table(const Report& report, std::ostream& out) {
  out << "scenario " << report.scenario << "  (N up to "
      << report.n_parties << ", grid " << report.grid.n_theta << "x"
      << report.grid.n_phi << ", version " << report.version << ")\n";
  if (!report.quantities.empty()) {
    out << "  " << std::left << std::setw(36) << "quantity" << std::setw(24)
        << "value" << std::setw(24) << "reference" << std::setw(12)
        << "rel.err" << std::setw(12) << "abs.err" << "status\n";
    for (const Comparison& c : report.quantities) {
      out << "  " << std::left << std::setw(36) << c.name << std::setw(24)
          << format_double(c.value);
      if (c.has_reference) {
        std::ostringstream rel, abs;
        rel << std::scientific << std::setprecision(2) << c.rel_error;
        abs << std::scientific << std::setprecision(2) << c.abs_error;
        out << std::setw(24) << format_double(c.reference) << std::setw(12)
            << rel.str() << std::setw(12) << abs.str()
            << (c.pass ? "ok" : "FAIL");
      } else {
        out << std::setw(24) << "-" << std::setw(12) << "-" << std::setw(12)
            << "-" << "info";
      }
      out << "\n";
      if (c.has_reference) {
        out << "  " << std::setw(36) << "" << "reference formula: "
            << c.reference_formula << "\n";
      }
    }
  }
  if (!report.checks.empty()) {
    for (const Check& c : report.checks) {
      out << "  " << std::left << std::setw(36) << c.name
          << (c.pass ? "ok    " : "FAIL  ") << c.detail << "\n";
    }
  }
  std::ostringstream duration;
  duration << std::fixed << std::setprecision(3) << report.duration_seconds;
  out << "  => " << (report.all_pass() ? "PASS" : "FAIL") << " ("
      << report.quantities.size() << " quantities, " << report.checks.size()
      << " checks, " << duration.str() << " s)\n";
}

std::string report_records(const std::vector<Report>& reports) {
  std::ostringstream out;
  for (const Report& report : reports) {
    for (const Comparison& c : report.quantities) {
      ordered_json record;
      record["record"] = "quantity";
      record["scenario"] = report.scenario;
      record["name"] = c.name;
      record["value"] = c.value;
      if (c.has_reference) {
        record["reference"] = c.reference;
        record["reference_formula"] = c.reference_formula;
        record["abs_error"] = c.abs_error;
        record["rel_error"] = c.rel_error;
        record["tolerance"] = c.tolerance;
        record["tolerance_kind"] = c.tol_kind;
      }
      record["pass"] = c.pass;
      out << record.dump() << "\n";
    }
    for (const Check& c : report.checks) {
      ordered_json record;
      record["record"] = "check";
      record["scenario"] = report.scenario;
      record["name"] = c.name;
      record["pass"] = c.pass;
      record["detail"] = c.detail;
      out << record.dump() << "\n";
    }
  }
  return out.str();
}

std::string report_summaries(const std::vector<Report>& reports) {
  std::ostringstream out;
  for (const Report& report : reports) {
    ordered_json record;
    record["record"] = "scenario-summary";
    record["scenario"] = report.scenario;
    record["n_parties"] = report.n_parties;
    record["grid"] = {{"n_theta", report.grid.n_theta},
                      {"n_phi", report.grid.n_phi}};
    record["version"] = report.version;
    record["quantities"] = report.quantities.size();
    record["checks"] = report.checks.size();
    record["pass"] = report.all_pass();
    record["duration_seconds"] = report.duration_seconds;
    out << record.dump() << "\n";
  }
  return out.str();
}

std::string report_csv(const std::vector<Report>& reports) {
  std::ostringstream out;
  out << "scenario,name,value,reference,reference_formula,abs_error,"
         "rel_error,tolerance,tolerance_kind,pass\n";
  for (const Report& report : reports) {
    for (const Comparison& c : report.quantities) {
      out << report.scenario << "," << c.name << "," << format_double(c.value)
          << ",";
      if (c.has_reference) {
        out << format_double(c.reference) << ",\"" << c.reference_formula
            << "\"," << format_double(c.abs_error) << ","
            << format_double(c.rel_error) << "," << format_double(c.tolerance)
            << "," << c.tol_kind;
      } else {
        out << ",,,,,";
      }
      out << "," << (c.pass ? "true" : "false") << "\n";
    }
  }
  return out.str();
}

}  // namespace corrsphere
