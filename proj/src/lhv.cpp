#include "corrsphere/lhv.hpp"

#include <cmath>
#include <cstddef>
#include <sstream>
#include <utility>

namespace corrsphere {
namespace {

constexpr double kWeightTol = 1e-12;

int sign_of(double x) { return x >= 0.0 ? 1 : -1; }  // sign(0) := +1

// Exact-node lookup: settings fed to a sign table must be the grid's
// own nodes, so bitwise angle comparison is the right test.
std::size_t grid_node_index(const SphereGrid& grid, const Setting& s) {
  const auto& thetas = grid.theta_nodes();
  const auto& phis = grid.phi_nodes();
  for (std::size_t ti = 0; ti < thetas.size(); ++ti) {
    if (thetas[ti].angle != s.theta()) continue;
    for (std::size_t pi = 0; pi < phis.size(); ++pi) {
      if (phis[pi].angle == s.phi()) return ti * phis.size() + pi;
    }
  }
  std::ostringstream msg;
  msg << "sign-table response evaluated off its grid (theta=" << s.theta()
      << " phi=" << s.phi() << ")";
  throw ValidationError(msg.str());
}

}  // namespace

ResponseFunction ResponseFunction::sign_cos_theta() {
  return ResponseFunction(SignCosTheta{});
}

ResponseFunction ResponseFunction::sign_dot(const Vector3& axis) {
  if (axis.norm() == 0.0) {
    throw ValidationError("sign_dot: axis must be nonzero");
  }
  return ResponseFunction(SignDot{axis});
}

ResponseFunction ResponseFunction::constant(int value) {
  if (value != 1 && value != -1) {
    throw ValidationError("constant response must be +1 or -1, got " +
                          std::to_string(value));
  }
  return ResponseFunction(Constant{value});
}

ResponseFunction ResponseFunction::threshold(const Vector3& bloch,
                                             double lambda) {
  if (bloch.squaredNorm() > 1.0 + kWeightTol) {
    throw ValidationError("threshold: bloch vector outside the Bloch ball");
  }
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw ValidationError("threshold: lambda must lie in [0, 1]");
  }
  return ResponseFunction(Threshold{bloch, lambda});
}

ResponseFunction ResponseFunction::sign_table(
    std::shared_ptr<const SphereGrid> grid, std::vector<int> signs) {
  if (!grid) throw ValidationError("sign_table: grid must not be null");
  if (signs.size() != grid->node_count()) {
    throw ValidationError("sign_table: need one sign per grid node");
  }
  for (int s : signs) {
    if (s != 1 && s != -1) {
      throw ValidationError("sign_table: entries must be +1 or -1");
    }
  }
  return ResponseFunction(SignTable{std::move(grid), std::move(signs)});
}

int ResponseFunction::operator()(const Setting& setting) const {
  struct Visitor {
    const Setting& s;
    int operator()(const SignCosTheta&) const {
      return sign_of(std::cos(s.theta()));
    }
    int operator()(const SignDot& r) const {
      return sign_of(r.axis.dot(s.unit_vector()));
    }
    int operator()(const Constant& r) const { return r.value; }
    int operator()(const Threshold& r) const {
      const double p = 0.5 * (1.0 + r.bloch.dot(s.unit_vector()));
      return r.lambda < p ? 1 : -1;
    }
    int operator()(const SignTable& r) const {
      return r.signs[grid_node_index(*r.grid, s)];
    }
  };
  return std::visit(Visitor{setting}, body_);
}

LhvModel::LhvModel(int n_parties, std::vector<Member> ensemble)
    : n_parties_(n_parties), ensemble_(std::move(ensemble)) {
  if (n_parties_ < 1) {
    throw ValidationError("LhvModel: need at least one party, got " +
                          std::to_string(n_parties_));
  }
  if (ensemble_.empty()) {
    throw ValidationError("LhvModel: ensemble must be non-empty");
  }
  double sum = 0.0;
  double comp = 0.0;  // Kahan: large ensembles must not drift past tolerance
  for (const Member& m : ensemble_) {
    if (!(m.weight > 0.0 && m.weight <= 1.0)) {
      throw ValidationError("LhvModel: member weights must lie in (0, 1]");
    }
    if (static_cast<int>(m.responses.size()) != n_parties_) {
      throw ValidationError(
          "LhvModel: each member needs exactly " +
          std::to_string(n_parties_) + " responses, got " +
          std::to_string(m.responses.size()));
    }
    const double term = m.weight - comp;
    const double next = sum + term;
    comp = (next - sum) - term;
    sum = next;
  }
  if (std::abs(sum - 1.0) > kWeightTol) {
    throw ValidationError("LhvModel: weights sum to " + format_double(sum) +
                          ", expected 1");
  }
}

LhvModel mix_models(const std::vector<std::pair<double, LhvModel>>& parts) {
  if (parts.empty()) {
    throw ValidationError("mix_models: need at least one model");
  }
  const int n = parts.front().second.n_parties();
  std::vector<LhvModel::Member> ensemble;
  for (const auto& [weight, model] : parts) {
    if (model.n_parties() != n) {
      throw ValidationError("mix_models: party counts differ");
    }
    if (!(weight > 0.0 && weight <= 1.0)) {
      throw ValidationError("mix_models: weights must lie in (0, 1]");
    }
    for (const LhvModel::Member& m : model.ensemble()) {
      ensemble.push_back({weight * m.weight, m.responses});
    }
  }
  return LhvModel(n, std::move(ensemble));
}

double e_lr(const LhvModel& model, std::span<const Setting> settings) {
  if (static_cast<int>(settings.size()) != model.n_parties()) {
    throw ValidationError("e_lr: expected " +
                          std::to_string(model.n_parties()) +
                          " settings, got " +
                          std::to_string(settings.size()));
  }
  double sum = 0.0;
  for (const LhvModel::Member& m : model.ensemble()) {
    int product = 1;
    for (std::size_t j = 0; j < settings.size(); ++j) {
      product *= m.responses[j](settings[j]);
    }
    sum += m.weight * product;
  }
  return sum;
}

double scalar_product_lhv(const LhvModel& model,
                          std::span<const SphereGrid> grids,
                          std::uint64_t node_budget) {
  if (static_cast<int>(grids.size()) != model.n_parties()) {
    throw ValidationError("scalar_product_lhv: expected " +
                          std::to_string(model.n_parties()) +
                          " grids, got " + std::to_string(grids.size()));
  }
  return scalar_product_numeric(
      [&model](std::span<const Setting> s) { return e_lr(model, s); }, grids,
      node_budget);
}

double lhv_upper_bound(int n_parties) {
  if (n_parties < 1) {
    throw ValidationError("lhv_upper_bound: need at least one party, got " +
                          std::to_string(n_parties));
  }
  return int_pow(kFullSolidAngle, n_parties);
}

LhvModel saturating_model(int n_parties) {
  LhvModel::Member member;
  member.weight = 1.0;
  member.responses.assign(static_cast<std::size_t>(n_parties),
                          ResponseFunction::sign_cos_theta());
  return LhvModel(n_parties, {std::move(member)});
}

LhvModel single_qubit_simulator_model(const Vector3& bloch, int resolution) {
  if (bloch.squaredNorm() > 1.0 + kWeightTol) {
    throw ValidationError(
        "single_qubit_simulator_model: bloch vector outside the Bloch ball");
  }
  if (resolution < 1) {
    throw ValidationError(
        "single_qubit_simulator_model: resolution must be positive");
  }
  std::vector<LhvModel::Member> ensemble;
  ensemble.reserve(static_cast<std::size_t>(resolution));
  const double weight = 1.0 / resolution;
  for (int k = 0; k < resolution; ++k) {
    // Midpoint lambda grid: |e_lr - n.bloch| <= 1/resolution everywhere.
    const double lambda = (k + 0.5) / resolution;
    ensemble.push_back({weight, {ResponseFunction::threshold(bloch, lambda)}});
  }
  return LhvModel(1, std::move(ensemble));
}

// --- Model-specification vocabulary -------------------------------------

namespace {

std::string trimmed(const std::string& text) {
  const auto begin = text.find_first_not_of(" \t");
  if (begin == std::string::npos) return "";
  const auto end = text.find_last_not_of(" \t");
  return text.substr(begin, end - begin + 1);
}

double parse_real(const std::string& text, const std::string& context) {
  const std::string t = trimmed(text);
  std::size_t consumed = 0;
  double value = 0.0;
  try {
    value = std::stod(t, &consumed);
  } catch (const std::exception&) {
    throw ConfigError(context + ": cannot parse number '" + t + "'");
  }
  if (consumed != t.size()) {
    throw ConfigError(context + ": trailing characters in number '" + t + "'");
  }
  return value;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    if (pos == std::string::npos) {
      parts.push_back(text.substr(start));
      return parts;
    }
    parts.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

Vector3 parse_vector3(const std::string& text, const std::string& context) {
  const std::vector<std::string> parts = split(text, ',');
  if (parts.size() != 3) {
    throw ConfigError(context + ": expected three comma-separated components, got '" +
                      text + "'");
  }
  return Vector3(parse_real(parts[0], context), parse_real(parts[1], context),
                 parse_real(parts[2], context));
}

// Splits "name(arguments)" from the vocabulary; name-only forms pass
// through with empty arguments.
std::pair<std::string, std::string> split_call(const std::string& text) {
  const std::size_t open = text.find('(');
  if (open == std::string::npos) return {text, ""};
  if (text.back() != ')') {
    throw ConfigError("response spec '" + text + "': missing closing ')'");
  }
  return {trimmed(text.substr(0, open)),
          text.substr(open + 1, text.size() - open - 2)};
}

}  // namespace

ResponseSpec ResponseSpec::parse(const std::string& text) {
  const std::string t = trimmed(text);
  const auto [name, args] = split_call(t);
  ResponseSpec spec;
  if (name == "sign-of-cos-theta") {
    if (!args.empty()) {
      throw ConfigError("sign-of-cos-theta takes no arguments, got '" + args +
                        "'");
    }
    spec.kind = Kind::kSignCosTheta;
  } else if (name == "sign-of-dot-product-with") {
    spec.kind = Kind::kSignDot;
    spec.vector = parse_vector3(args, "sign-of-dot-product-with");
    if (spec.vector.norm() == 0.0) {
      throw ConfigError("sign-of-dot-product-with: axis must be nonzero");
    }
  } else if (name == "constant") {
    spec.kind = Kind::kConstant;
    const std::string arg = trimmed(args);
    if (arg == "+1" || arg == "1") {
      spec.constant = 1;
    } else if (arg == "-1") {
      spec.constant = -1;
    } else {
      throw ConfigError("constant expects +1 or -1, got '" + arg + "'");
    }
  } else if (name == "threshold-simulator") {
    spec.kind = Kind::kThresholdSimulator;
    const std::vector<std::string> parts = split(args, ';');
    if (parts.size() != 2) {
      throw ConfigError(
          "threshold-simulator expects '(x,y,z;resolution)', got '" + args +
          "'");
    }
    spec.vector = parse_vector3(parts[0], "threshold-simulator");
    const double res = parse_real(parts[1], "threshold-simulator resolution");
    if (res < 1.0 || res != std::floor(res) || res > 1e9) {
      throw ConfigError("threshold-simulator resolution must be a positive "
                        "integer, got '" + trimmed(parts[1]) + "'");
    }
    spec.resolution = static_cast<int>(res);
    if (spec.vector.squaredNorm() > 1.0 + kWeightTol) {
      throw ConfigError(
          "threshold-simulator bloch vector lies outside the Bloch ball");
    }
  } else {
    throw ConfigError("unknown response spec '" + t + "'");
  }
  return spec;
}

std::string ResponseSpec::to_string() const {
  switch (kind) {
    case Kind::kSignCosTheta:
      return "sign-of-cos-theta";
    case Kind::kSignDot:
      return "sign-of-dot-product-with(" + format_double(vector.x()) + "," +
             format_double(vector.y()) + "," + format_double(vector.z()) + ")";
    case Kind::kConstant:
      return constant > 0 ? "constant(+1)" : "constant(-1)";
    case Kind::kThresholdSimulator:
      return "threshold-simulator(" + format_double(vector.x()) + "," +
             format_double(vector.y()) + "," + format_double(vector.z()) +
             ";" + std::to_string(resolution) + ")";
  }
  throw ValidationError("ResponseSpec: unknown kind");
}

LhvModel build_model(int n_parties, const std::vector<MemberSpec>& members) {
  if (members.empty()) {
    throw ConfigError("model needs at least one ensemble member");
  }
  std::vector<LhvModel::Member> ensemble;
  for (const MemberSpec& spec : members) {
    if (static_cast<int>(spec.responses.size()) != n_parties) {
      throw ConfigError("ensemble member declares " +
                        std::to_string(spec.responses.size()) +
                        " responses for " + std::to_string(n_parties) +
                        " parties");
    }
    // threshold-simulator multiplies the member into one slice per
    // hidden-variable value; several simulator parties multiply out.
    std::vector<LhvModel::Member> partial;
    partial.push_back({spec.weight, {}});
    for (const ResponseSpec& r : spec.responses) {
      if (r.kind == ResponseSpec::Kind::kThresholdSimulator) {
        const std::size_t expanded =
            partial.size() * static_cast<std::size_t>(r.resolution);
        if (expanded > kMaxEnsembleSize) {
          throw ResourceError(
              "threshold-simulator expansion exceeds the ensemble cap of " +
              std::to_string(kMaxEnsembleSize) + " members");
        }
        std::vector<LhvModel::Member> next;
        next.reserve(expanded);
        for (const LhvModel::Member& base : partial) {
          for (int k = 0; k < r.resolution; ++k) {
            LhvModel::Member m = base;
            m.weight /= r.resolution;
            m.responses.push_back(ResponseFunction::threshold(
                r.vector, (k + 0.5) / r.resolution));
            next.push_back(std::move(m));
          }
        }
        partial = std::move(next);
      } else {
        ResponseFunction fn = ResponseFunction::constant(1);
        switch (r.kind) {
          case ResponseSpec::Kind::kSignCosTheta:
            fn = ResponseFunction::sign_cos_theta();
            break;
          case ResponseSpec::Kind::kSignDot:
            fn = ResponseFunction::sign_dot(r.vector);
            break;
          default:
            fn = ResponseFunction::constant(r.constant);
            break;
        }
        for (LhvModel::Member& m : partial) m.responses.push_back(fn);
      }
    }
    if (ensemble.size() + partial.size() > kMaxEnsembleSize) {
      throw ResourceError("model ensemble exceeds the cap of " +
                          std::to_string(kMaxEnsembleSize) + " members");
    }
    for (LhvModel::Member& m : partial) ensemble.push_back(std::move(m));
  }
  return LhvModel(n_parties, std::move(ensemble));
}

}  // namespace corrsphere
