#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace mubest {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Absolute tolerance for unit-scale comparisons throughout the library.
inline constexpr double kUnitTol = 1e-10;

/// Unit-norm state vector. Construction fails if |norm - 1| > 1e-10.
class PureState {
 public:
  explicit PureState(ComplexVector amplitudes);

  /// Rescales v to unit norm; throws DomainError on the zero vector.
  static PureState normalized(ComplexVector v);
  static PureState basis(int dim, int index);

  int dim() const { return static_cast<int>(amplitudes_.size()); }
  const ComplexVector& amplitudes() const { return amplitudes_; }
  Complex operator[](int i) const { return amplitudes_(i); }

  /// <this|other>
  Complex inner(const PureState& other) const { return amplitudes_.dot(other.amplitudes_); }
  ComplexMatrix projector() const { return amplitudes_ * amplitudes_.adjoint(); }

 private:
  ComplexVector amplitudes_;
};

/// (C^d)^{⊗t}.
struct TensorSpace {
  int local_dim = 0;
  int copies = 0;

  std::size_t dimension() const;
};

/// Zero-based permutation of tensor slots: factor m is moved to slot sigma[m].
using Permutation = std::vector<int>;

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector kron(const ComplexVector& a, const ComplexVector& b);
ComplexVector tensor_power(const ComplexVector& v, int copies);

/// 0/1 unitary W with W(v_1 ⊗ ... ⊗ v_t) = v_{σ⁻¹(1)} ⊗ ... ⊗ v_{σ⁻¹(t)}.
ComplexMatrix permutation_operator(std::span<const int> sigma, const TensorSpace& space);

struct SymmetricProjector {
  ComplexMatrix matrix;
  long dimension = 0;  // trace, equals binomial(d + t - 1, t)
};

/// Average of all t! permutation operators.
SymmetricProjector symmetric_projector(const TensorSpace& space);

/// Process-wide memoized symmetric_projector; safe to call from several threads.
const SymmetricProjector& cached_symmetric_projector(const TensorSpace& space);

/// Orthonormal basis (columns) of the symmetric subspace, one column per multiset
/// of local indices, obtained by applying the symmetrizer to sorted basis tensors.
ComplexMatrix symmetric_subspace_basis(const TensorSpace& space);

/// Traces out the leading t - keep_last factors of a square operator on (C^d)^{⊗t}.
ComplexMatrix partial_trace_leading(const ComplexMatrix& m, int local_dim, int keep_last);

/// tr_{1..N}[op (leading ⊗ 1_{d^k})] without materialising the product.
/// `op` acts on d^{N+k}, `leading` on d^N.
ComplexMatrix partial_trace_of_product(const ComplexMatrix& op, const ComplexMatrix& leading,
                                       int local_dim);

struct HermitianEigen {
  RealVector values;     // ascending
  ComplexMatrix vectors;  // orthonormal columns
};

/// Throws ContractViolation if m is not Hermitian within 1e-10 (relative to its scale).
HermitianEigen hermitian_eig(const ComplexMatrix& m);

bool is_hermitian(const ComplexMatrix& m, double tol = kUnitTol);
double max_abs(const ComplexMatrix& m);
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
long binomial(int n, int k);
long factorial(int n);

}  // namespace mubest
