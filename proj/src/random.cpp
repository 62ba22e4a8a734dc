#include "corrsphere/random.hpp"

#include <cmath>

namespace corrsphere {

double Rng::uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform01();
}

double Rng::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u = uniform01();
  while (u == 0.0) u = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u));
  const double angle = 2.0 * kPi * uniform01();
  spare_ = r * std::sin(angle);
  have_spare_ = true;
  return r * std::cos(angle);
}

Setting random_setting(Rng& rng) {
  const double theta = std::acos(rng.uniform(-1.0, 1.0));
  double phi = rng.uniform(0.0, 2.0 * kPi);
  if (phi >= 2.0 * kPi) phi = 0.0;  // guard against rounding at the edge
  return Setting(theta, phi);
}

Vector3 random_unit_vector(Rng& rng) {
  return random_setting(rng).unit_vector();
}

Vector3 random_bloch_in_ball(Rng& rng) {
  // Radius via cbrt for uniform volume density.
  return std::cbrt(rng.uniform01()) * random_unit_vector(rng);
}

Vector3 random_bloch_in_shell(Rng& rng, double min_norm, double max_norm) {
  if (!(min_norm >= 0.0 && min_norm <= max_norm && max_norm <= 1.0)) {
    throw ValidationError("random_bloch_in_shell: need 0 <= min <= max <= 1");
  }
  return rng.uniform(min_norm, max_norm) * random_unit_vector(rng);
}

QubitState random_pure_qubit(Rng& rng) {
  const Setting s = random_setting(rng);
  return QubitState::pure(s.theta(), s.phi());
}

QubitState random_mixed_qubit(Rng& rng) {
  return QubitState::from_bloch(random_bloch_in_ball(rng));
}

ProductState random_pure_product(Rng& rng, int n_parties) {
  std::vector<QubitState> parties;
  parties.reserve(static_cast<std::size_t>(n_parties));
  for (int j = 0; j < n_parties; ++j) parties.push_back(random_pure_qubit(rng));
  return ProductState(std::move(parties));
}

ProductState random_mixed_product(Rng& rng, int n_parties) {
  std::vector<QubitState> parties;
  parties.reserve(static_cast<std::size_t>(n_parties));
  for (int j = 0; j < n_parties; ++j) {
    parties.push_back(random_mixed_qubit(rng));
  }
  return ProductState(std::move(parties));
}

Matrix random_density_matrix(Rng& rng, int dim) {
  if (dim < 1) {
    throw ValidationError("random_density_matrix: dimension must be positive");
  }
  Matrix g(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      g(i, j) = Complex(rng.gaussian(), rng.gaussian());
    }
  }
  Matrix rho = g * g.adjoint();
  rho /= rho.trace();
  // Symmetrize away the last bits of adjoint asymmetry from the
  // normalization division.
  return 0.5 * (rho + Matrix(rho.adjoint()));
}

std::vector<Setting> random_settings(Rng& rng, int n_parties) {
  std::vector<Setting> settings;
  settings.reserve(static_cast<std::size_t>(n_parties));
  for (int j = 0; j < n_parties; ++j) settings.push_back(random_setting(rng));
  return settings;
}

}  // namespace corrsphere
