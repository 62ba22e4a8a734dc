#include "corrsphere/quadrature.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace corrsphere {
namespace {

// P_n(x) and P_n'(x) by the three-term recurrence.
std::pair<double, double> legendre(int n, double x) {
  double p0 = 1.0;
  double p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  const double deriv = n * (x * p1 - p0) / (x * x - 1.0);
  return {p1, deriv};
}

}  // namespace

GaussLegendre gauss_legendre(int n) {
  if (n < 1) {
    throw ValidationError("gauss_legendre: need at least one node, got " +
                          std::to_string(n));
  }
  GaussLegendre rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  // Roots come in +/- pairs; solve the lower half and mirror.
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Chebyshev-based initial guess, then Newton to 1e-15.
    double x = -std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, d] = legendre(n, x);
      dp = d;
      const double dx = p / d;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = x;
    rule.weights[i] = w;
    rule.nodes[n - 1 - i] = -x;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[half - 1] = 0.0;  // exact midpoint
  return rule;
}

SphereGrid::SphereGrid(std::vector<QuadratureNode> theta_nodes,
                       std::vector<QuadratureNode> phi_nodes)
    : theta_(std::move(theta_nodes)), phi_(std::move(phi_nodes)) {
  if (theta_.empty() || phi_.empty()) {
    throw ValidationError("SphereGrid: node lists must be non-empty");
  }
  flat_.reserve(theta_.size() * phi_.size());
  for (const auto& t : theta_) {
    for (const auto& p : phi_) {
      flat_.emplace_back(Setting(t.angle, p.angle), t.weight * p.weight);
    }
  }
}

double SphereGrid::total_weight() const {
  double sum = 0.0;
  for (const auto& [setting, w] : flat_) sum += w;
  return sum;
}

SphereGrid build_grid(int n_theta, int n_phi) {
  if (n_theta < 1 || n_phi < 1) {
    throw ValidationError("build_grid: node counts must be positive, got " +
                          std::to_string(n_theta) + "x" +
                          std::to_string(n_phi));
  }
  const GaussLegendre gl = gauss_legendre(n_theta);
  std::vector<QuadratureNode> theta(n_theta);
  for (int i = 0; i < n_theta; ++i) {
    // Gauss node u = cos(theta); descending u gives ascending theta.
    const double u = gl.nodes[n_theta - 1 - i];
    theta[i] = {std::acos(u), gl.weights[n_theta - 1 - i]};
  }
  std::vector<QuadratureNode> phi(n_phi);
  const double phi_weight = 2.0 * kPi / n_phi;
  for (int k = 0; k < n_phi; ++k) {
    phi[k] = {2.0 * kPi * k / n_phi, phi_weight};
  }
  return SphereGrid(std::move(theta), std::move(phi));
}

SphereGrid default_grid() {
  return build_grid(kDefaultThetaNodes, kDefaultPhiNodes);
}

double integrate_sphere(const std::function<double(const Setting&)>& f,
                        const SphereGrid& grid) {
  double sum = 0.0;
  double comp = 0.0;  // Kahan correction
  for (const auto& [setting, w] : grid.nodes()) {
    const double value = f(setting);
    if (!std::isfinite(value)) {
      std::ostringstream msg;
      msg << "integrate_sphere: integrand not finite at theta="
          << setting.theta() << " phi=" << setting.phi();
      throw NumericError(msg.str());
    }
    const double term = w * value - comp;
    const double next = sum + term;
    comp = (next - sum) - term;
    sum = next;
  }
  return sum;
}

double orthogonality_residual(const SphereGrid& grid) {
  double worst = 0.0;
  for (int alpha = 0; alpha < 3; ++alpha) {
    for (int beta = 0; beta < 3; ++beta) {
      const double value = integrate_sphere(
          [alpha, beta](const Setting& s) {
            const Vector3 c = s.unit_vector();
            return c[alpha] * c[beta];
          },
          grid);
      const double target = (alpha == beta) ? kFullSolidAngle / 3.0 : 0.0;
      worst = std::max(worst, std::abs(value - target));
    }
  }
  return worst;
}

double scalar_product_numeric(
    const std::function<double(std::span<const Setting>)>& correlation,
    std::span<const SphereGrid> grids, std::uint64_t node_budget) {
  if (grids.empty()) {
    throw ValidationError("scalar_product_numeric: need at least one grid");
  }
  std::uint64_t total = 1;
  for (const SphereGrid& g : grids) {
    const std::uint64_t count = g.node_count();
    if (count == 0 || total > node_budget / count) {
      std::ostringstream msg;
      msg << "scalar_product_numeric: grid product exceeds node budget of "
          << node_budget << " nodes";
      throw ResourceError(msg.str());
    }
    total *= count;
  }

  const std::size_t n = grids.size();
  std::vector<std::size_t> index(n, 0);
  std::vector<Setting> settings;
  settings.reserve(n);
  for (const SphereGrid& g : grids) settings.push_back(g.nodes()[0].first);

  double sum = 0.0;
  double comp = 0.0;  // Kahan correction
  for (std::uint64_t step = 0; step < total; ++step) {
    double weight = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      weight *= grids[j].nodes()[index[j]].second;
    }
    const double e = correlation(settings);
    if (!std::isfinite(e)) {
      throw NumericError(
          "scalar_product_numeric: correlation value not finite");
    }
    const double term = weight * e * e - comp;
    const double next = sum + term;
    comp = (next - sum) - term;
    sum = next;

    // Advance the odometer, last party fastest.
    for (std::size_t j = n; j-- > 0;) {
      if (++index[j] < grids[j].node_count()) {
        settings[j] = grids[j].nodes()[index[j]].first;
        break;
      }
      index[j] = 0;
      settings[j] = grids[j].nodes()[0].first;
    }
  }
  return sum;
}

}  // namespace corrsphere
