// core.hpp
// Foundational value types: complex matrices, qubit states, measurement
// settings, and the correlation tensor shared by all other modules.

#pragma once

#include <complex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace corrsphere {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector3 = Eigen::Vector3d;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kFullSolidAngle = 4.0 * kPi;

// Default tolerance for Hermiticity / trace / positivity validation.
inline constexpr double kValidationTol = 1e-10;

inline constexpr const char* kVersion = "0.1.0";

// Bad arguments or states that fail physical validation.
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Non-finite values produced during numeric evaluation.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Computation would exceed a configured budget.
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed configuration or model-spec input.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// x^n by repeated multiplication; reproducible across libm versions.
double int_pow(double x, int n);

// 17-significant-digit decimal string; round-trips the double exactly.
std::string format_double(double value);

// Pauli operators sigma_x, sigma_y, sigma_z (axis 0, 1, 2).
const Matrix& pauli(int axis);

// n . sigma for an arbitrary real direction n.
Matrix pauli_dot(const Vector3& n);

Matrix kron(const Matrix& a, const Matrix& b);

// |psi><psi| from an (unnormalized) state vector.
Matrix pure_state_projector(const Eigen::VectorXcd& psi);

struct MatrixVerdict {
  bool hermitian = false;
  bool unit_trace = false;
  bool positive_semidefinite = false;
  double hermiticity_error = 0.0;  // max |m - m^dagger| entrywise
  double trace_error = 0.0;        // |tr(m) - 1|
  double min_eigenvalue = 0.0;     // of the Hermitian part

  bool valid() const { return hermitian && unit_trace && positive_semidefinite; }
  std::vector<std::string> violations() const;
};

// Checks Hermiticity, unit trace and positive semidefiniteness
// (smallest eigenvalue >= -tol). Failures are encoded in the verdict.
MatrixVerdict validate_density_matrix(const Matrix& m, double tol = kValidationTol);

// One observer's measurement direction, theta in [0, pi], phi in [0, 2*pi).
class Setting {
 public:
  Setting(double theta, double phi);

  double theta() const { return theta_; }
  double phi() const { return phi_; }

  // (sin t cos p, sin t sin p, cos t); the direction-cosine vector.
  Vector3 unit_vector() const;

 private:
  double theta_;
  double phi_;
};

inline Vector3 setting_to_unit_vector(const Setting& s) { return s.unit_vector(); }

// A single qubit held as a validated 2x2 density matrix with its
// Bloch vector (tr[rho sigma_i]) cached at construction.
class QubitState {
 public:
  explicit QubitState(Matrix rho, double tol = kValidationTol);

  // rho = (I + b . sigma) / 2, requires |b| <= 1 + tol.
  static QubitState from_bloch(const Vector3& b, double tol = kValidationTol);

  // Pure state with Bloch vector along (theta, phi):
  // cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>.
  static QubitState pure(double theta, double phi);

  const Matrix& rho() const { return rho_; }
  const Vector3& bloch() const { return bloch_; }
  bool is_pure(double tol = kValidationTol) const;

 private:
  Matrix rho_;
  Vector3 bloch_;
};

inline Vector3 bloch_vector(const QubitState& q) { return q.bloch(); }

// Ordered list of N single-qubit states; the joint state is their
// tensor product.
class ProductState {
 public:
  explicit ProductState(std::vector<QubitState> parties);

  int n_parties() const { return static_cast<int>(parties_.size()); }
  const std::vector<QubitState>& parties() const { return parties_; }
  const QubitState& party(int j) const { return parties_.at(static_cast<std::size_t>(j)); }

  Matrix joint_density() const;

 private:
  std::vector<QubitState> parties_;
};

// The 3^N array T_{i1..iN} of joint Pauli expectation values, stored
// flat in lexicographic multi-index order (axis x, y, z per party).
class CorrelationTensor {
 public:
  CorrelationTensor(int n_parties, std::vector<double> values);
  static CorrelationTensor zeros(int n_parties);

  int n_parties() const { return n_parties_; }
  std::size_t size() const { return values_.size(); }

  double operator[](std::size_t flat) const { return values_[flat]; }
  double& operator[](std::size_t flat) { return values_[flat]; }
  const std::vector<double>& values() const { return values_; }

  std::size_t flat_index(std::span<const int> multi_index) const;
  double at(std::span<const int> multi_index) const;

  // Compensated (Kahan) sum of squared entries, fixed iteration order.
  double sum_of_squares() const;

 private:
  int n_parties_;
  std::vector<double> values_;
};

std::size_t pow3(int n);

}  // namespace corrsphere
