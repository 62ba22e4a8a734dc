// quadrature.hpp
// Machine-precision integration over products of setting spheres with
// measure dOmega = sin(theta) dtheta dphi: Gauss-Legendre in cos(theta)
// crossed with a uniform periodic rule in phi.

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "corrsphere/core.hpp"

namespace corrsphere {

struct QuadratureNode {
  double angle = 0.0;
  double weight = 0.0;
};

struct GaussLegendre {
  std::vector<double> nodes;    // ascending in [-1, 1]
  std::vector<double> weights;  // sum to 2
};

// Nodes/weights of the n-point rule, Newton iteration on P_n.
GaussLegendre gauss_legendre(int n);

// One observer's quadrature grid. Theta weights already carry the
// sin(theta) factor (Gauss nodes in cos(theta)); phi nodes are uniform
// with weight 2*pi/n_phi. Total weight is the full solid angle 4*pi.
class SphereGrid {
 public:
  SphereGrid(std::vector<QuadratureNode> theta_nodes,
             std::vector<QuadratureNode> phi_nodes);

  const std::vector<QuadratureNode>& theta_nodes() const { return theta_; }
  const std::vector<QuadratureNode>& phi_nodes() const { return phi_; }

  std::size_t node_count() const { return theta_.size() * phi_.size(); }
  double total_weight() const;

  // Flattened (setting, weight) pairs in fixed lexicographic order
  // (theta major, phi minor).
  const std::vector<std::pair<Setting, double>>& nodes() const { return flat_; }

 private:
  std::vector<QuadratureNode> theta_;
  std::vector<QuadratureNode> phi_;
  std::vector<std::pair<Setting, double>> flat_;
};

inline constexpr int kDefaultThetaNodes = 4;
inline constexpr int kDefaultPhiNodes = 8;

// Exact for integrands polynomial of degree <= 2*n_theta - 1 in
// cos(theta) and trigonometric of degree < n_phi in phi.
SphereGrid build_grid(int n_theta, int n_phi);

SphereGrid default_grid();

// Weighted sum of f over the grid, deterministic order. A non-finite
// value raises NumericError naming the offending node.
double integrate_sphere(const std::function<double(const Setting&)>& f,
                        const SphereGrid& grid);

// Max deviation of the nine grid integrals of c^alpha c^beta from
// (4*pi/3) * delta_{alpha,beta}.
double orthogonality_residual(const SphereGrid& grid);

inline constexpr std::uint64_t kDefaultNodeBudget = 100'000'000;

// Integral of E^2 over the product of N setting spheres via the lazy
// tensor-product grid, lexicographic order. Throws ResourceError when
// the total node count exceeds the budget.
double scalar_product_numeric(
    const std::function<double(std::span<const Setting>)>& correlation,
    std::span<const SphereGrid> grids,
    std::uint64_t node_budget = kDefaultNodeBudget);

}  // namespace corrsphere
