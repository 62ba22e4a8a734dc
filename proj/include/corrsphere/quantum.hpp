// quantum.hpp
// Quantum-side correlation machinery: joint states, the correlation
// function E(n_1, ..., n_N) = tr[rho (n_1.sigma) x ... x (n_N.sigma)],
// the 3^N correlation tensor, and the closed-form scalar product
// (E, E) = (4*pi/3)^N * sum T^2 together with the separability bound.

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "corrsphere/core.hpp"

namespace corrsphere {

enum class StateKind { kProductOfPure, kProductOfMixed, kGeneral };

// N-qubit state. Product states keep their factors so tensor and
// correlation evaluations can use the Bloch-vector fast path; the
// factorization is still checked against the dense density matrix.
class JointState {
 public:
  // General state from an explicit 2^N x 2^N density matrix.
  explicit JointState(Matrix rho, double tol = kValidationTol);

  // Product state; kind is deduced from the factors' purity.
  explicit JointState(ProductState product, double tol = kValidationTol);

  int n_parties() const { return n_parties_; }
  const Matrix& rho() const { return rho_; }
  StateKind kind() const { return kind_; }

  bool has_factors() const { return factors_.has_value(); }
  const ProductState& factors() const;

 private:
  int n_parties_;
  Matrix rho_;
  StateKind kind_;
  std::optional<ProductState> factors_;
};

// (|0...0> + |1...1>)/sqrt(2) on n_parties qubits.
JointState ghz_state(int n_parties);

// Two-qubit (|00> + |11>)/sqrt(2).
JointState bell_state();

// E = tr[rho (n_1.sigma) x ... x (n_N.sigma)]; real, in [-1, 1].
double e_sep(const JointState& state, std::span<const Setting> settings);

// All 3^N Pauli expectation values T_{i1...iN}. Product states use the
// outer product of Bloch vectors; general states a dense trace per
// Pauli string.
CorrelationTensor correlation_tensor(const JointState& state);

// Contraction sum_{i1...iN} T_{i1...iN} c_1^{i1} ... c_N^{iN} with
// c_j the direction cosines of settings[j]. Equals e_sep when T comes
// from the same state.
double e_sep_from_tensor(const CorrelationTensor& tensor,
                         std::span<const Setting> settings);

// (E, E) over the full product of spheres: (4*pi/3)^N * sum T^2.
double scalar_product_exact(const CorrelationTensor& tensor);

// Bound saturated by pure product states: (4*pi/3)^n_parties.
double sep_upper_bound(int n_parties);

// Product over parties of |bloch_j|^2; <= 1, = 1 iff every factor pure.
double bloch_norm_product(const ProductState& state);

inline constexpr double kSeparabilityTol = 1e-9;

struct SeparabilityVerdict {
  bool satisfied = true;
  double sum_of_squares = 0.0;
};

// satisfied iff sum T^2 <= 1 + tol; a violation certifies the tensor
// cannot come from a pure product state.
SeparabilityVerdict separability_check(const CorrelationTensor& tensor,
                                       double tol = kSeparabilityTol);

}  // namespace corrsphere
