// corrsphere CLI: tensors, scalar products, LHV models, the 3^N
// violation ratio, scenario runs and the full verification suite.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "corrsphere/quadrature.hpp"
#include "corrsphere/quantum.hpp"
#include "corrsphere/random.hpp"
#include "corrsphere/scenario.hpp"

namespace {

using namespace corrsphere;

struct GlobalOptions {
  GridSpec grid;
  Tolerances tolerances;
  std::uint64_t seed = kDefaultSeed;
  std::string out_dir;
  std::string format = "text";  // text | records
  bool csv = false;
};

std::string default_out_dir() {
  const char* env = std::getenv("CORRSPHERE_OUT_DIR");
  return env && *env ? env : ".";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ConfigError("cannot write output file '" + path.string() + "'");
  }
  out << text;
}

std::string axes_label(int n_parties, std::size_t flat) {
  std::string label(static_cast<std::size_t>(n_parties), 'x');
  for (int j = n_parties; j-- > 0;) {
    label[static_cast<std::size_t>(j)] = "xyz"[flat % 3];
    flat /= 3;
  }
  return label;
}

JointState state_from_cli(const std::string& name, int n,
                          const std::string& config_path) {
  if (!config_path.empty()) {
    const ScenarioConfig cfg = ScenarioConfig::parse(read_file(config_path));
    if (cfg.state.kind == StateSpec::Kind::kNone) {
      throw ConfigError("config '" + config_path + "' declares no state");
    }
    switch (cfg.state.kind) {
      case StateSpec::Kind::kGhz:
        return ghz_state(cfg.n_parties);
      case StateSpec::Kind::kBell:
        return bell_state();
      case StateSpec::Kind::kPureProduct: {
        std::vector<QubitState> parties;
        for (const auto& [theta, phi] : cfg.state.angles) {
          parties.push_back(QubitState::pure(theta, phi));
        }
        return JointState(ProductState(std::move(parties)));
      }
      case StateSpec::Kind::kMixedProduct: {
        std::vector<QubitState> parties;
        for (const Vector3& b : cfg.state.blochs) {
          parties.push_back(QubitState::from_bloch(b));
        }
        return JointState(ProductState(std::move(parties)));
      }
      default:
        return JointState(cfg.state.matrix);
    }
  }
  if (name == "ghz") return ghz_state(n);
  if (name == "bell") {
    if (n != 2) throw ConfigError("bell state requires --n 2");
    return bell_state();
  }
  throw ConfigError("unknown state '" + name + "' (use ghz, bell or --config)");
}

void emit_reports(const std::vector<Report>& reports, const GlobalOptions& go,
                  const std::string& stem) {
  if (go.format == "records") {
    std::cout << report_records(reports);
  } else {
    for (const Report& report : reports) {
      print_report_table(report, std::cout);
      std::cout << "\n";
    }
  }
  const std::filesystem::path dir(go.out_dir);
  write_file(dir / (stem + "-records.jsonl"), report_records(reports));
  write_file(dir / (stem + "-summary.jsonl"), report_summaries(reports));
  if (go.csv) {
    write_file(dir / (stem + "-report.csv"), report_csv(reports));
  }
}

int run_tensor(const GlobalOptions& go, const std::string& state, int n,
               const std::string& config, bool show_all) {
  (void)go;
  const JointState joint = state_from_cli(state, n, config);
  const CorrelationTensor tensor = correlation_tensor(joint);
  std::cout << "state: " << (config.empty() ? state : config) << " (N = "
            << joint.n_parties() << ")\n";
  std::size_t printed = 0;
  for (std::size_t flat = 0; flat < tensor.size(); ++flat) {
    if (!show_all && tensor[flat] == 0.0) continue;
    std::cout << "  T[" << axes_label(joint.n_parties(), flat)
              << "] = " << format_double(tensor[flat]) << "\n";
    ++printed;
  }
  if (printed == 0) std::cout << "  (all entries zero)\n";
  const SeparabilityVerdict verdict = separability_check(tensor);
  std::cout << "sum of squares = " << format_double(verdict.sum_of_squares)
            << "\nseparability: "
            << (verdict.satisfied ? "satisfied" : "violated")
            << " (bound 1 for pure product states)\n";
  return 0;
}

int run_scalar_product(const GlobalOptions& go, const std::string& state,
                       int n, const std::string& config, bool numeric) {
  const JointState joint = state_from_cli(state, n, config);
  const CorrelationTensor tensor = correlation_tensor(joint);
  const double exact = scalar_product_exact(tensor);
  std::cout << "(E, E) exact = " << format_double(exact) << "  [(4*pi/3)^N * "
            << format_double(tensor.sum_of_squares()) << "]\n";
  std::cout << "separable maximum (4*pi/3)^N = "
            << format_double(sep_upper_bound(joint.n_parties())) << "\n";
  if (numeric) {
    if (joint.n_parties() > 3) {
      throw ConfigError("--numeric supports up to 3 parties");
    }
    const std::vector<SphereGrid> grids(
        static_cast<std::size_t>(joint.n_parties()),
        build_grid(go.grid.n_theta, go.grid.n_phi));
    const double value = scalar_product_numeric(
        [&tensor](std::span<const Setting> s) {
          return e_sep_from_tensor(tensor, s);
        },
        grids);
    const double rel = exact != 0.0 ? std::abs(value / exact - 1.0)
                                    : std::abs(value);
    std::cout << "(E, E) numeric (grid " << go.grid.n_theta << "x"
              << go.grid.n_phi << ") = " << format_double(value)
              << "  [rel. deviation " << format_double(rel) << "]\n";
  }
  return 0;
}

int run_lhv(const GlobalOptions& go, const std::string& model_name, int n,
            const std::string& bloch_text, int resolution,
            const std::string& config) {
  LhvModel model = saturating_model(1);
  std::string label;
  if (!config.empty()) {
    const ScenarioConfig cfg = ScenarioConfig::parse(read_file(config));
    if (cfg.model.empty()) {
      throw ConfigError("config '" + config + "' declares no model");
    }
    model = build_model(cfg.n_parties, cfg.model.members);
    label = config;
  } else if (!bloch_text.empty()) {
    std::istringstream in(bloch_text);
    double x = 0.0, y = 0.0, z = 0.0;
    char c1 = 0, c2 = 0;
    if (!(in >> x >> c1 >> y >> c2 >> z) || c1 != ',' || c2 != ',') {
      throw ConfigError("--bloch expects 'x,y,z', got '" + bloch_text + "'");
    }
    model = single_qubit_simulator_model(Vector3(x, y, z), resolution);
    label = "threshold-simulator(" + bloch_text + ";" +
            std::to_string(resolution) + ")";
  } else if (model_name == "saturating") {
    model = saturating_model(n);
    label = "saturating (sign-of-cos-theta per party)";
  } else if (model_name == "mixing-slack") {
    if (n != 1) throw ConfigError("mixing-slack model requires --n 1");
    ResponseSpec constant_plus;
    constant_plus.kind = ResponseSpec::Kind::kConstant;
    std::vector<MemberSpec> members(2);
    members[0].weight = 0.5;
    members[0].responses = {ResponseSpec{}};
    members[1].weight = 0.5;
    members[1].responses = {constant_plus};
    model = build_model(1, members);
    label = "equal mix of sign-of-cos-theta and constant(+1)";
  } else {
    throw ConfigError("unknown model '" + model_name +
                      "' (use saturating, mixing-slack, --bloch or --config)");
  }

  const std::vector<SphereGrid> grids(
      static_cast<std::size_t>(model.n_parties()),
      build_grid(go.grid.n_theta, go.grid.n_phi));
  const double value = scalar_product_lhv(model, grids);
  const double bound = lhv_upper_bound(model.n_parties());
  std::cout << "model: " << label << " (N = " << model.n_parties()
            << ", ensemble size " << model.ensemble().size() << ")\n"
            << "(E_LR, E_LR) = " << format_double(value) << "\n"
            << "maximum (4*pi)^N = " << format_double(bound) << "\n"
            << "fraction of maximum = " << format_double(value / bound)
            << "\n";
  return 0;
}

int run_ratio(const GlobalOptions& go, int max_n) {
  VerifyOptions options;
  options.max_n = max_n;
  options.grid = go.grid;
  options.tolerances = go.tolerances;
  options.seed = go.seed;
  std::vector<Report> reports = {
      run_scenario(builtin_scenario("main-result", options))};
  emit_reports(reports, go, "ratio");
  return reports.front().all_pass() ? 0 : 1;
}

int run_run(const GlobalOptions& go, const std::string& path,
            const CLI::App& app) {
  ScenarioConfig cfg = ScenarioConfig::parse(read_file(path));
  // Explicit command-line flags win over the file's values.
  if (app.count("--n-theta") > 0) cfg.grid.n_theta = go.grid.n_theta;
  if (app.count("--n-phi") > 0) cfg.grid.n_phi = go.grid.n_phi;
  if (app.count("--seed") > 0) cfg.seed = go.seed;
  std::vector<Report> reports = {run_scenario(cfg)};
  emit_reports(reports, go, cfg.scenario);
  return reports.front().all_pass() ? 0 : 1;
}

int run_verify(const GlobalOptions& go, int max_n, int samples) {
  VerifyOptions options;
  options.max_n = max_n;
  options.grid = go.grid;
  options.tolerances = go.tolerances;
  options.seed = go.seed;
  options.samples = samples;
  const std::vector<Report> reports = verify_all(options);
  emit_reports(reports, go, "verify");
  bool all = true;
  for (const Report& r : reports) all = all && r.all_pass();
  std::cout << (all ? "verify: PASS" : "verify: FAIL") << " ("
            << reports.size() << " scenarios)\n";
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "corrsphere: scalar products of N-qubit correlation functions over "
      "the full sphere of measurement settings, for separable quantum "
      "states and local-hidden-variable models"};
  app.require_subcommand(1);

  GlobalOptions go;
  go.out_dir = default_out_dir();
  app.add_option("--n-theta", go.grid.n_theta,
                 "Gauss-Legendre nodes in cos(theta) per sphere")
      ->capture_default_str();
  app.add_option("--n-phi", go.grid.n_phi, "uniform phi nodes per sphere")
      ->capture_default_str();
  app.add_option("--seed", go.seed, "seed for randomized scenarios")
      ->capture_default_str();
  app.add_option("--out-dir", go.out_dir,
                 "directory for report files (env CORRSPHERE_OUT_DIR)")
      ->capture_default_str();
  app.add_option("--format", go.format, "stdout format: text or records")
      ->check(CLI::IsMember({"text", "records"}))
      ->capture_default_str();
  app.add_flag("--csv", go.csv, "also export the quantity table as CSV");
  app.add_option("--tol-exact-rel", go.tolerances.exact_rel,
                 "relative tolerance: closed-form saturation");
  app.add_option("--tol-numeric-rel", go.tolerances.numeric_rel,
                 "relative tolerance: quadrature agreement");
  app.add_option("--tol-lhv-rel", go.tolerances.lhv_rel,
                 "relative tolerance: LHV saturation/bound");
  app.add_option("--tol-ratio-rel", go.tolerances.ratio_rel,
                 "relative tolerance: violation ratio");
  app.add_option("--tol-simulator-rel", go.tolerances.simulator_rel,
                 "relative tolerance: simulator scalar product");
  app.add_option("--tol-simulator-abs", go.tolerances.simulator_abs,
                 "absolute tolerance: simulator per-setting error");

  auto* tensor_cmd =
      app.add_subcommand("tensor", "print the correlation tensor of a state");
  std::string tensor_state = "ghz";
  int tensor_n = 3;
  std::string tensor_config;
  bool tensor_all = false;
  tensor_cmd->add_option("--state", tensor_state, "ghz or bell")
      ->capture_default_str();
  tensor_cmd->add_option("--n", tensor_n, "party count for --state ghz")
      ->capture_default_str();
  tensor_cmd->add_option("--config", tensor_config,
                         "scenario config supplying the state");
  tensor_cmd->add_flag("--all", tensor_all, "print zero entries too");

  auto* sp_cmd = app.add_subcommand(
      "scalar-product", "closed-form (E,E) of a state, optionally vs quadrature");
  std::string sp_state = "ghz";
  int sp_n = 3;
  std::string sp_config;
  bool sp_numeric = false;
  sp_cmd->add_option("--state", sp_state, "ghz or bell")->capture_default_str();
  sp_cmd->add_option("--n", sp_n, "party count for --state ghz")
      ->capture_default_str();
  sp_cmd->add_option("--config", sp_config,
                     "scenario config supplying the state");
  sp_cmd->add_flag("--numeric", sp_numeric,
                   "also integrate E^2 on the grid (up to 3 parties)");

  auto* lhv_cmd = app.add_subcommand(
      "lhv", "scalar product of a local-hidden-variable model");
  std::string lhv_model = "saturating";
  int lhv_n = 1;
  std::string lhv_bloch;
  int lhv_resolution = kDefaultSimulatorResolution;
  std::string lhv_config;
  lhv_cmd->add_option("--model", lhv_model, "saturating or mixing-slack")
      ->capture_default_str();
  lhv_cmd->add_option("--n", lhv_n, "party count")->capture_default_str();
  lhv_cmd->add_option("--bloch", lhv_bloch,
                      "x,y,z: single-qubit threshold simulator");
  lhv_cmd->add_option("--resolution", lhv_resolution,
                      "hidden-variable slices for --bloch")
      ->capture_default_str();
  lhv_cmd->add_option("--config", lhv_config,
                      "scenario config supplying the model");

  auto* ratio_cmd = app.add_subcommand(
      "ratio", "violation ratio (4*pi)^N / (4*pi/3)^N = 3^N table");
  int ratio_max_n = kMaxClosedFormParties;
  ratio_cmd->add_option("--max-n", ratio_max_n, "largest party count")
      ->check(CLI::Range(1, kMaxClosedFormParties))
      ->capture_default_str();

  auto* run_cmd = app.add_subcommand("run", "run a scenario config file");
  std::string run_path;
  run_cmd->add_option("config", run_path, "scenario config file")
      ->required();

  auto* verify_cmd = app.add_subcommand(
      "verify", "run every built-in scenario and the property suite");
  int verify_max_n = kMaxDenseParties;
  int verify_samples = 20;
  verify_cmd->add_option("--max-n", verify_max_n, "cap on party count")
      ->check(CLI::Range(1, kMaxClosedFormParties))
      ->capture_default_str();
  verify_cmd->add_option("--samples", verify_samples,
                         "random samples per randomized scenario")
      ->check(CLI::Range(1, 100000))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (tensor_cmd->parsed()) {
      return run_tensor(go, tensor_state, tensor_n, tensor_config, tensor_all);
    }
    if (sp_cmd->parsed()) {
      return run_scalar_product(go, sp_state, sp_n, sp_config, sp_numeric);
    }
    if (lhv_cmd->parsed()) {
      return run_lhv(go, lhv_model, lhv_n, lhv_bloch, lhv_resolution,
                     lhv_config);
    }
    if (ratio_cmd->parsed()) {
      return run_ratio(go, ratio_max_n);
    }
    if (run_cmd->parsed()) {
      return run_run(go, run_path, app);
    }
    if (verify_cmd->parsed()) {
      return run_verify(go, verify_max_n, verify_samples);
    }
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const ResourceError& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return 3;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  }
  return 2;  // no subcommand matched (require_subcommand should prevent this)
}
