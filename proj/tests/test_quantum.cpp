#include <doctest.h>

#include <cmath>
#include <vector>

#include "corrsphere/quadrature.hpp"
#include "corrsphere/quantum.hpp"
#include "corrsphere/random.hpp"
#include "oracles.hpp"

using namespace corrsphere;

namespace {

// GHZ density matrix built independently: dyad of (1,0,...,0,1)/sqrt(2).
oracles::Mat oracle_ghz(int n) {
  const int dim = 1 << n;
  std::vector<oracles::Complex> amp(static_cast<std::size_t>(dim), 0.0);
  amp.front() = 1.0 / std::sqrt(2.0);
  amp.back() = amp.front();
  return oracles::dyad(amp);
}

std::vector<Setting> repeat_setting(const Setting& s, int n) {
  return std::vector<Setting>(static_cast<std::size_t>(n), s);
}

}  // namespace

TEST_SUITE("quantum") {

TEST_CASE("JointState validates explicit density matrices") {
  CHECK_THROWS_AS(JointState(Matrix::Identity(3, 3) / 3.0), ValidationError);
  CHECK_THROWS_AS(JointState(Matrix::Identity(4, 4)), ValidationError);

  const JointState mixed(Matrix::Identity(4, 4) / 4.0);
  CHECK(mixed.n_parties() == 2);
  CHECK(mixed.kind() == StateKind::kGeneral);
  CHECK_FALSE(mixed.has_factors());
  CHECK_THROWS_AS(mixed.factors(), ValidationError);
}

TEST_CASE("JointState deduces the product kind from factor purity") {
  std::vector<QubitState> pure = {QubitState::pure(0.3, 1.0),
                                  QubitState::pure(2.0, 4.0)};
  const JointState pp{ProductState(pure)};
  CHECK(pp.kind() == StateKind::kProductOfPure);
  CHECK(pp.has_factors());
  CHECK(pp.factors().n_parties() == 2);

  std::vector<QubitState> mixed = {QubitState::pure(0.3, 1.0),
                                   QubitState::from_bloch(Vector3(0, 0, 0.5))};
  const JointState pm{ProductState(mixed)};
  CHECK(pm.kind() == StateKind::kProductOfMixed);

  // The dense matrix kept alongside the factors is their tensor product.
  const Matrix direct = ProductState(mixed).joint_density();
  CHECK((pm.rho() - direct).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("ghz_state pins the two corner amplitudes") {
  const JointState ghz = ghz_state(3);
  CHECK(ghz.n_parties() == 3);
  CHECK(ghz.kind() == StateKind::kGeneral);
  CHECK(std::abs(ghz.rho()(0, 0) - 0.5) <= 1e-15);
  CHECK(std::abs(ghz.rho()(7, 7) - 0.5) <= 1e-15);
  CHECK(std::abs(ghz.rho()(0, 7) - 0.5) <= 1e-15);
  CHECK(std::abs(ghz.rho()(3, 3)) <= 1e-15);
  CHECK_THROWS_AS(ghz_state(0), ValidationError);

  const JointState bell = bell_state();
  CHECK(bell.n_parties() == 2);
  CHECK(std::abs(bell.rho()(0, 3) - 0.5) <= 1e-15);
}

TEST_CASE("e_sep on basic states and settings") {
  std::vector<QubitState> up = {QubitState::pure(0.0, 0.0)};
  const JointState single{ProductState(up)};
  const Setting north(0.0, 0.0);
  const Setting equator(kPi / 2, 0.0);

  std::vector<Setting> s1 = {north};
  CHECK(std::abs(e_sep(single, s1) - 1.0) <= 1e-15);

  std::vector<QubitState> two = {QubitState::pure(0.0, 0.0),
                                 QubitState::pure(0.0, 0.0)};
  const JointState pair{ProductState(two)};
  std::vector<Setting> s2 = {north, equator};
  CHECK(std::abs(e_sep(pair, s2)) <= 1e-12);
  std::vector<Setting> s3 = {north, north};
  CHECK(std::abs(e_sep(pair, s3) - 1.0) <= 1e-15);

  std::vector<QubitState> noise = {QubitState::from_bloch(Vector3::Zero()),
                                   QubitState::from_bloch(Vector3::Zero())};
  const JointState white{ProductState(noise)};
  CHECK(e_sep(white, s2) == 0.0);

  CHECK_THROWS_AS(e_sep(single, s2), ValidationError);
}

TEST_CASE("e_sep on entangled states matches the oracle trace") {
  const JointState bell = bell_state();
  const Setting x_axis(kPi / 2, 0.0);
  const Setting y_axis(kPi / 2, kPi / 2);

  std::vector<Setting> xx = {x_axis, x_axis};
  CHECK(std::abs(e_sep(bell, xx) - 1.0) <= 1e-12);
  std::vector<Setting> xy = {x_axis, y_axis};
  CHECK(std::abs(e_sep(bell, xy)) <= 1e-12);

  const JointState ghz = ghz_state(3);
  const std::vector<Setting> xxx = repeat_setting(x_axis, 3);
  const double lib = e_sep(ghz, xxx);
  const double ref =
      oracles::pauli_expectation(oracle_ghz(3), std::vector<int>{0, 0, 0});
  CHECK(std::abs(lib - ref) <= 1e-13);
  CHECK(std::abs(lib - 1.0) <= 1e-12);
}

TEST_CASE("e_sep stays real and bounded on random states") {
  Rng rng(101);
  for (int n = 1; n <= 4; ++n) {
    for (int rep = 0; rep < 10; ++rep) {
      const ProductState product = random_mixed_product(rng, n);
      const JointState fast{product};
      const JointState dense{product.joint_density()};
      const std::vector<Setting> settings = random_settings(rng, n);
      const double a = e_sep(fast, settings);
      const double b = e_sep(dense, settings);
      CHECK(std::abs(a) <= 1.0 + 1e-12);
      CHECK(std::abs(a - b) <= 1e-12);  // fast path == dense trace
    }
  }
}

TEST_CASE("correlation_tensor of elementary states") {
  std::vector<QubitState> up = {QubitState::pure(0.0, 0.0)};
  const CorrelationTensor t1 = correlation_tensor(JointState{ProductState(up)});
  CHECK(t1.values()[0] == 0.0);
  CHECK(t1.values()[1] == 0.0);
  CHECK(t1.values()[2] == 1.0);

  std::vector<QubitState> two = {QubitState::pure(0.0, 0.0),
                                 QubitState::pure(0.0, 0.0)};
  const CorrelationTensor t2 =
      correlation_tensor(JointState{ProductState(two)});
  for (std::size_t flat = 0; flat < t2.size(); ++flat) {
    CHECK(t2[flat] == ((flat == 8) ? 1.0 : 0.0));  // only T_zz survives
  }
}

TEST_CASE("correlation_tensor of the Bell state") {
  const CorrelationTensor t = correlation_tensor(bell_state());

  const int xx[] = {0, 0};
  const int yy[] = {1, 1};
  const int zz[] = {2, 2};
  CHECK(std::abs(t.at(xx) - 1.0) <= 1e-14);
  CHECK(std::abs(t.at(yy) + 1.0) <= 1e-14);
  CHECK(std::abs(t.at(zz) - 1.0) <= 1e-14);

  // Every entry against the independent dense-trace oracle.
  const oracles::Mat rho = oracle_ghz(2);
  std::size_t flat = 0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j, ++flat) {
      const double ref = oracles::pauli_expectation(rho, {i, j});
      CHECK(std::abs(t[flat] - ref) <= 1e-14);
    }
  }
  CHECK(std::abs(t.sum_of_squares() - 3.0) <= 1e-13);
}

TEST_CASE("correlation_tensor product path equals the dense path") {
  Rng rng(77);
  for (int n = 1; n <= 3; ++n) {
    const ProductState product = random_mixed_product(rng, n);
    const CorrelationTensor fast = correlation_tensor(JointState{product});
    const CorrelationTensor dense =
        correlation_tensor(JointState{product.joint_density()});
    double worst = 0.0;
    for (std::size_t k = 0; k < fast.size(); ++k) {
      worst = std::max(worst, std::abs(fast[k] - dense[k]));
    }
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("tensor entries are Pauli expectations, bounded by one") {
  Rng rng(202);
  for (int rep = 0; rep < 25; ++rep) {
    const JointState state{random_density_matrix(rng, 4)};
    const CorrelationTensor t = correlation_tensor(state);
    for (std::size_t k = 0; k < t.size(); ++k) {
      CHECK(std::abs(t[k]) <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("e_sep_from_tensor reproduces e_sep") {
  Rng rng(303);
  double worst = 0.0;
  for (int n = 1; n <= 3; ++n) {
    for (int rep = 0; rep < 20; ++rep) {
      const ProductState product = random_mixed_product(rng, n);
      const JointState state{product};
      const CorrelationTensor t = correlation_tensor(state);
      const std::vector<Setting> settings = random_settings(rng, n);
      worst = std::max(worst, std::abs(e_sep(state, settings) -
                                       e_sep_from_tensor(t, settings)));
    }
  }
  CHECK(worst <= 1e-12);

  // Entangled input as well: the contraction knows nothing about states.
  const CorrelationTensor bell = correlation_tensor(bell_state());
  const JointState state = bell_state();
  Rng rng2(304);
  for (int rep = 0; rep < 20; ++rep) {
    const std::vector<Setting> settings = random_settings(rng2, 2);
    CHECK(std::abs(e_sep(state, settings) -
                   e_sep_from_tensor(bell, settings)) <= 1e-12);
  }

  const CorrelationTensor z(1, {0.0, 0.0, 1.0});
  std::vector<Setting> pole = {Setting(0.0, 0.0)};
  CHECK(std::abs(e_sep_from_tensor(z, pole) - 1.0) <= 1e-15);
  std::vector<Setting> orthogonal = {Setting(kPi / 2, 0.0)};
  CHECK(std::abs(e_sep_from_tensor(z, orthogonal)) <= 1e-12);
  std::vector<Setting> two = {Setting(0.0, 0.0), Setting(0.0, 0.0)};
  CHECK_THROWS_AS(e_sep_from_tensor(z, two), ValidationError);
}

TEST_CASE("scalar_product_exact closed form") {
  const CorrelationTensor z(1, {0.0, 0.0, 1.0});
  CHECK(std::abs(scalar_product_exact(z) - kFullSolidAngle / 3.0) <= 1e-15);

  CHECK(scalar_product_exact(CorrelationTensor::zeros(3)) == 0.0);

  const CorrelationTensor bell = correlation_tensor(bell_state());
  CHECK(std::abs(scalar_product_exact(bell) - 52.63789013914324) <= 1e-12);
  CHECK(std::abs(scalar_product_exact(bell) -
                 3.0 * int_pow(kFullSolidAngle / 3.0, 2)) <= 1e-13);
}

TEST_CASE("scalar_product_exact agrees with the quadrature") {
  const CorrelationTensor bell = correlation_tensor(bell_state());
  std::vector<SphereGrid> grids = {default_grid(), default_grid()};
  const double numeric = scalar_product_numeric(
      [&bell](std::span<const Setting> s) {
        return e_sep_from_tensor(bell, s);
      },
      grids);
  const double exact = scalar_product_exact(bell);
  CHECK(std::abs(numeric - exact) <= 1e-9 * exact);
}

TEST_CASE("pure product states saturate the separable bound") {
  Rng rng(404);
  for (int n = 1; n <= 4; ++n) {
    const double bound = sep_upper_bound(n);
    for (int rep = 0; rep < 5; ++rep) {
      const ProductState product = random_pure_product(rng, n);
      const double value =
          scalar_product_exact(correlation_tensor(JointState{product}));
      CHECK(std::abs(value - bound) <= 1e-10 * bound);
    }
  }
  CHECK(sep_upper_bound(1) == kFullSolidAngle / 3.0);
  CHECK_THROWS_AS(sep_upper_bound(0), ValidationError);
}

TEST_CASE("damping one party scales the scalar product by (1-p)^2") {
  Rng rng(505);
  const ProductState product = random_pure_product(rng, 3);
  const double base =
      scalar_product_exact(correlation_tensor(JointState{product}));
  for (double p : {0.25, 0.7}) {
    std::vector<QubitState> parties = product.parties();
    parties[1] = QubitState::from_bloch((1.0 - p) * parties[1].bloch());
    const double damped = scalar_product_exact(
        correlation_tensor(JointState{ProductState(parties)}));
    const double expected = (1.0 - p) * (1.0 - p) * base;
    CHECK(std::abs(damped - expected) <= 1e-12 * base);
  }
}

TEST_CASE("GHZ sum of squares follows 2^(N-1) plus the even-N extra") {
  // For even N the all-y/x strings contribute an extra unit; odd N has
  // no such term. Values confirmed against the dense-trace oracle below.
  const double expected[] = {3.0, 4.0, 9.0, 16.0, 33.0};  // N = 2..6
  for (int n = 2; n <= 6; ++n) {
    const CorrelationTensor t = correlation_tensor(ghz_state(n));
    const double lib = t.sum_of_squares();
    CHECK(std::abs(lib - expected[n - 2]) <= 1e-12);

    const double oracle =
        oracles::sum_of_squared_expectations(oracle_ghz(n), n);
    CHECK(std::abs(lib - oracle) <= 1e-12);

    const double formula = std::ldexp(1.0, n - 1) + ((n % 2 == 0) ? 1.0 : 0.0);
    CHECK(lib == doctest::Approx(formula).epsilon(1e-12));
  }
}

TEST_CASE("bloch_norm_product multiplies squared Bloch norms") {
  Rng rng(606);
  for (int n = 1; n <= 4; ++n) {
    const ProductState pure = random_pure_product(rng, n);
    CHECK(std::abs(bloch_norm_product(pure) - 1.0) <= 1e-12);
  }

  std::vector<QubitState> parties = {QubitState::pure(1.0, 2.0),
                                     QubitState::from_bloch(Vector3(0, 0, 0.5))};
  CHECK(std::abs(bloch_norm_product(ProductState(parties)) - 0.25) <= 1e-14);

  parties.push_back(QubitState::from_bloch(Vector3::Zero()));
  CHECK(bloch_norm_product(ProductState(parties)) == 0.0);
}

TEST_CASE("separability_check accepts products and flags entanglement") {
  Rng rng(707);
  const ProductState product = random_pure_product(rng, 2);
  const SeparabilityVerdict ok =
      separability_check(correlation_tensor(JointState{product}));
  CHECK(ok.satisfied);
  CHECK(std::abs(ok.sum_of_squares - 1.0) <= 1e-9);

  const SeparabilityVerdict bell =
      separability_check(correlation_tensor(bell_state()));
  CHECK_FALSE(bell.satisfied);
  CHECK(std::abs(bell.sum_of_squares - 3.0) <= 1e-12);

  const SeparabilityVerdict ghz =
      separability_check(correlation_tensor(ghz_state(3)));
  CHECK_FALSE(ghz.satisfied);
  CHECK(std::abs(ghz.sum_of_squares - 4.0) <= 1e-12);

  // Tolerance operates on sum T^2 - 1.
  CorrelationTensor near(1, {1.0, 0.0, 0.0});
  near[1] = std::sqrt(0.5e-9);
  CHECK(separability_check(near).satisfied);
  near[1] = std::sqrt(2.0e-9);
  CHECK_FALSE(separability_check(near).satisfied);
  CHECK(separability_check(near, 1e-6).satisfied);
}

}  // TEST_SUITE("quantum")
