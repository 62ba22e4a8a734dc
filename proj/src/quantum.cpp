#include "corrsphere/quantum.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace corrsphere {
namespace {

int parties_from_dimension(Eigen::Index dim) {
  int n = 0;
  Eigen::Index d = 1;
  while (d < dim) {
    d <<= 1;
    ++n;
  }
  if (d != dim || n < 1) {
    throw ValidationError("JointState: dimension " + std::to_string(dim) +
                          " is not 2^N for N >= 1");
  }
  return n;
}

// tr(a * b) without forming the product.
Complex trace_product(const Matrix& a, const Matrix& b) {
  return a.cwiseProduct(b.transpose()).sum();
}

// tr[rho * sigma_string] for the Pauli string given by per-party axes.
// Each string has exactly one nonzero per column, so the trace is a
// single walk over the 2^N columns.
double pauli_string_expectation(const Matrix& rho,
                                std::span<const int> axes) {
  const int n = static_cast<int>(axes.size());
  const Eigen::Index dim = Eigen::Index{1} << n;
  Complex sum = 0.0;
  for (Eigen::Index col = 0; col < dim; ++col) {
    Eigen::Index row = 0;
    Complex val = 1.0;
    for (int j = 0; j < n; ++j) {
      const int bit = static_cast<int>((col >> (n - 1 - j)) & 1);
      int row_bit = bit;
      switch (axes[j]) {
        case 0:  // sigma_x flips the bit
          row_bit = 1 - bit;
          break;
        case 1:  // sigma_y flips the bit with phase +/- i
          row_bit = 1 - bit;
          val *= (bit == 0) ? Complex(0.0, 1.0) : Complex(0.0, -1.0);
          break;
        default:  // sigma_z keeps the bit with sign
          if (bit == 1) val = -val;
          break;
      }
      row = (row << 1) | row_bit;
    }
    sum += rho(col, row) * val;
  }
  return sum.real();
}

}  // namespace

JointState::JointState(Matrix rho, double tol)
    : n_parties_(parties_from_dimension(rho.rows())),
      rho_(std::move(rho)),
      kind_(StateKind::kGeneral) {
  const MatrixVerdict verdict = validate_density_matrix(rho_, tol);
  if (!verdict.valid()) {
    std::string msg = "JointState: not a valid density matrix";
    for (const auto& v : verdict.violations()) msg += "; " + v;
    throw ValidationError(msg);
  }
}

JointState::JointState(ProductState product, double tol)
    : n_parties_(product.n_parties()),
      rho_(product.joint_density()),
      kind_(StateKind::kProductOfMixed),
      factors_(std::move(product)) {
  bool all_pure = true;
  for (const QubitState& q : factors_->parties()) {
    if (!q.is_pure(tol)) {
      all_pure = false;
      break;
    }
  }
  if (all_pure) kind_ = StateKind::kProductOfPure;
}

const ProductState& JointState::factors() const {
  if (!factors_) {
    throw ValidationError("JointState: no product factors available");
  }
  return *factors_;
}

JointState ghz_state(int n_parties) {
  if (n_parties < 1) {
    throw ValidationError("ghz_state: need at least one party, got " +
                          std::to_string(n_parties));
  }
  const Eigen::Index dim = Eigen::Index{1} << n_parties;
  Eigen::VectorXcd amp = Eigen::VectorXcd::Zero(dim);
  amp(0) = 1.0 / std::sqrt(2.0);
  amp(dim - 1) = amp(0);
  return JointState(pure_state_projector(amp));
}

JointState bell_state() { return ghz_state(2); }

double e_sep(const JointState& state, std::span<const Setting> settings) {
  if (static_cast<int>(settings.size()) != state.n_parties()) {
    throw ValidationError("e_sep: expected " +
                          std::to_string(state.n_parties()) +
                          " settings, got " +
                          std::to_string(settings.size()));
  }
  if (state.has_factors()) {
    double product = 1.0;
    for (int j = 0; j < state.n_parties(); ++j) {
      product *= settings[j].unit_vector().dot(state.factors().party(j).bloch());
    }
    return product;
  }
  Matrix op = pauli_dot(settings[0].unit_vector());
  for (std::size_t j = 1; j < settings.size(); ++j) {
    op = kron(op, pauli_dot(settings[j].unit_vector()));
  }
  return trace_product(state.rho(), op).real();
}

CorrelationTensor correlation_tensor(const JointState& state) {
  const int n = state.n_parties();
  std::vector<double> values(pow3(n), 0.0);
  std::vector<int> axes(n, 0);
  for (std::size_t flat = 0; flat < values.size(); ++flat) {
    if (state.has_factors()) {
      double product = 1.0;
      for (int j = 0; j < n; ++j) {
        product *= state.factors().party(j).bloch()[axes[j]];
      }
      values[flat] = product;
    } else {
      values[flat] = pauli_string_expectation(state.rho(), axes);
    }
    // Advance the multi-index, last party fastest (flat-index order).
    for (int j = n; j-- > 0;) {
      if (++axes[j] < 3) break;
      axes[j] = 0;
    }
  }
  return CorrelationTensor(n, std::move(values));
}

double e_sep_from_tensor(const CorrelationTensor& tensor,
                         std::span<const Setting> settings) {
  if (static_cast<int>(settings.size()) != tensor.n_parties()) {
    throw ValidationError("e_sep_from_tensor: expected " +
                          std::to_string(tensor.n_parties()) +
                          " settings, got " +
                          std::to_string(settings.size()));
  }
  // Contract one party at a time, innermost (fastest-varying) first.
  std::vector<double> work(tensor.values().begin(), tensor.values().end());
  std::size_t size = work.size();
  for (int j = tensor.n_parties(); j-- > 0;) {
    const Vector3 c = settings[j].unit_vector();
    size /= 3;
    for (std::size_t k = 0; k < size; ++k) {
      work[k] =
          work[3 * k] * c[0] + work[3 * k + 1] * c[1] + work[3 * k + 2] * c[2];
    }
  }
  return work[0];
}

double scalar_product_exact(const CorrelationTensor& tensor) {
  return int_pow(kFullSolidAngle / 3.0, tensor.n_parties()) *
         tensor.sum_of_squares();
}

double sep_upper_bound(int n_parties) {
  if (n_parties < 1) {
    throw ValidationError("sep_upper_bound: need at least one party, got " +
                          std::to_string(n_parties));
  }
  return int_pow(kFullSolidAngle / 3.0, n_parties);
}

double bloch_norm_product(const ProductState& state) {
  double product = 1.0;
  for (const QubitState& q : state.parties()) {
    product *= q.bloch().squaredNorm();
  }
  return product;
}

SeparabilityVerdict separability_check(const CorrelationTensor& tensor,
                                       double tol) {
  SeparabilityVerdict verdict;
  verdict.sum_of_squares = tensor.sum_of_squares();
  verdict.satisfied = verdict.sum_of_squares <= 1.0 + tol;
  return verdict;
}

}  // namespace corrsphere
