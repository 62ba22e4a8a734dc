// random.hpp
// Seeded sampling of settings, Bloch vectors, qubit states and density
// matrices for randomized checks. All draws go through uniform01() on a
// fixed-width engine so a given seed reproduces bit-identical streams.

#pragma once

#include <cstdint>
#include <random>

#include "corrsphere/core.hpp"

namespace corrsphere {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform double in [0, 1) with 53 random bits; avoids
  // std::uniform_real_distribution, whose output is not pinned down.
  double uniform01();

  double uniform(double lo, double hi);

  // Standard normal via Box-Muller.
  double gaussian();

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Uniform over the sphere of directions (area measure).
Setting random_setting(Rng& rng);
Vector3 random_unit_vector(Rng& rng);

// Uniform over the solid Bloch ball.
Vector3 random_bloch_in_ball(Rng& rng);

// Uniform direction with norm uniform in [min_norm, max_norm].
Vector3 random_bloch_in_shell(Rng& rng, double min_norm, double max_norm);

QubitState random_pure_qubit(Rng& rng);
QubitState random_mixed_qubit(Rng& rng);

ProductState random_pure_product(Rng& rng, int n_parties);
ProductState random_mixed_product(Rng& rng, int n_parties);

// Ginibre construction: G G^dagger normalized to unit trace; full rank
// with probability one, valid for any dimension >= 1.
Matrix random_density_matrix(Rng& rng, int dim);

std::vector<Setting> random_settings(Rng& rng, int n_parties);

}  // namespace corrsphere
