#include "corrsphere/core.hpp"

#include <cmath>
#include <cstdio>
#include <utility>

namespace corrsphere {

double int_pow(double x, int n) {
  if (n < 0) throw std::domain_error("int_pow: negative exponent");
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

std::size_t pow3(int n) {
  if (n < 0) throw std::domain_error("pow3: negative exponent");
  std::size_t r = 1;
  for (int i = 0; i < n; ++i) r *= 3;
  return r;
}

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

const Matrix& pauli(int axis) {
  static const Matrix sx = (Matrix(2, 2) << 0, 1, 1, 0).finished();
  static const Matrix sy =
      (Matrix(2, 2) << 0, Complex(0, -1), Complex(0, 1), 0).finished();
  static const Matrix sz = (Matrix(2, 2) << 1, 0, 0, -1).finished();
  switch (axis) {
    case 0: return sx;
    case 1: return sy;
    case 2: return sz;
    default: throw std::domain_error("pauli: axis must be 0, 1 or 2");
  }
}

Matrix pauli_dot(const Vector3& n) {
  return n.x() * pauli(0) + n.y() * pauli(1) + n.z() * pauli(2);
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix pure_state_projector(const Eigen::VectorXcd& psi) {
  const double norm = psi.norm();
  if (norm <= 0.0)
    throw ValidationError("pure_state_projector: zero state vector");
  Eigen::VectorXcd unit = psi / norm;
  return unit * unit.adjoint();
}

std::vector<std::string> MatrixVerdict::violations() const {
  std::vector<std::string> out;
  if (!hermitian) out.push_back("not Hermitian");
  if (!unit_trace) out.push_back("trace is not 1");
  if (!positive_semidefinite) out.push_back("not positive semidefinite");
  return out;
}

MatrixVerdict validate_density_matrix(const Matrix& m, double tol) {
  if (m.rows() != m.cols() || m.rows() < 1)
    throw ValidationError("validate_density_matrix: matrix must be square, dim >= 1");

  MatrixVerdict v;
  v.hermiticity_error = (m - m.adjoint()).cwiseAbs().maxCoeff();
  v.hermitian = v.hermiticity_error <= tol;
  v.trace_error = std::abs(m.trace() - Complex(1.0, 0.0));
  v.unit_trace = v.trace_error <= tol;

  // Eigenvalues of the Hermitian part; for a Hermitian input this is exact.
  Matrix herm = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(herm, Eigen::EigenvaluesOnly);
  v.min_eigenvalue = solver.eigenvalues().minCoeff();
  v.positive_semidefinite = v.min_eigenvalue >= -tol;
  return v;
}

Setting::Setting(double theta, double phi) : theta_(theta), phi_(phi) {
  if (!(theta >= 0.0 && theta <= kPi))
    throw ValidationError("Setting: theta must lie in [0, pi]");
  if (!(phi >= 0.0 && phi < 2.0 * kPi))
    throw ValidationError("Setting: phi must lie in [0, 2*pi)");
}

Vector3 Setting::unit_vector() const {
  const double st = std::sin(theta_);
  return Vector3(st * std::cos(phi_), st * std::sin(phi_), std::cos(theta_));
}

namespace {

Vector3 bloch_of(const Matrix& rho) {
  Vector3 b;
  for (int i = 0; i < 3; ++i) {
    const Complex t = (rho * pauli(i)).trace();
    b[i] = t.real();
  }
  return b;
}

}  // namespace

QubitState::QubitState(Matrix rho, double tol) : rho_(std::move(rho)) {
  if (rho_.rows() != 2 || rho_.cols() != 2)
    throw ValidationError("QubitState: density matrix must be 2x2");
  const MatrixVerdict v = validate_density_matrix(rho_, tol);
  if (!v.valid()) {
    std::string msg = "QubitState: invalid density matrix:";
    for (const auto& s : v.violations()) msg += " " + s + ";";
    throw ValidationError(msg);
  }
  bloch_ = bloch_of(rho_);
}

QubitState QubitState::from_bloch(const Vector3& b, double tol) {
  if (b.squaredNorm() > 1.0 + tol)
    throw ValidationError("QubitState::from_bloch: |bloch| exceeds 1");
  Matrix rho = 0.5 * (Matrix::Identity(2, 2) + b.x() * pauli(0) +
                      b.y() * pauli(1) + b.z() * pauli(2));
  return QubitState(std::move(rho), tol);
}

QubitState QubitState::pure(double theta, double phi) {
  Eigen::VectorXcd psi(2);
  psi << Complex(std::cos(theta / 2.0), 0.0),
      std::polar(std::sin(theta / 2.0), phi);
  return QubitState(pure_state_projector(psi));
}

bool QubitState::is_pure(double tol) const {
  return std::abs(bloch_.squaredNorm() - 1.0) <= tol;
}

ProductState::ProductState(std::vector<QubitState> parties)
    : parties_(std::move(parties)) {
  if (parties_.empty())
    throw ValidationError("ProductState: at least one party required");
}

Matrix ProductState::joint_density() const {
  Matrix joint = parties_.front().rho();
  for (std::size_t j = 1; j < parties_.size(); ++j)
    joint = kron(joint, parties_[j].rho());
  return joint;
}

CorrelationTensor::CorrelationTensor(int n_parties, std::vector<double> values)
    : n_parties_(n_parties), values_(std::move(values)) {
  if (n_parties_ < 1)
    throw ValidationError("CorrelationTensor: n_parties must be >= 1");
  if (values_.size() != pow3(n_parties_))
    throw ValidationError("CorrelationTensor: expected 3^N values");
}

CorrelationTensor CorrelationTensor::zeros(int n_parties) {
  if (n_parties < 1)
    throw ValidationError("CorrelationTensor: n_parties must be >= 1");
  return CorrelationTensor(n_parties, std::vector<double>(pow3(n_parties), 0.0));
}

std::size_t CorrelationTensor::flat_index(std::span<const int> multi_index) const {
  if (multi_index.size() != static_cast<std::size_t>(n_parties_))
    throw std::domain_error("CorrelationTensor: multi-index arity mismatch");
  std::size_t flat = 0;
  for (int i : multi_index) {
    if (i < 0 || i > 2)
      throw std::domain_error("CorrelationTensor: index component out of range");
    flat = flat * 3 + static_cast<std::size_t>(i);
  }
  return flat;
}

double CorrelationTensor::at(std::span<const int> multi_index) const {
  return values_[flat_index(multi_index)];
}

double CorrelationTensor::sum_of_squares() const {
  double sum = 0.0;
  double comp = 0.0;
  for (double t : values_) {
    const double term = t * t - comp;
    const double next = sum + term;
    comp = (next - sum) - term;
    sum = next;
  }
  return sum;
}

}  // namespace corrsphere
