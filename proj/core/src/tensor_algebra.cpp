#include "mubest/tensor_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <string>
#include <utility>

#include "mubest/errors.hpp"

namespace mubest {

namespace {

std::size_t checked_power(int base, int exponent) {
  std::size_t result = 1;
  for (int i = 0; i < exponent; ++i) result *= static_cast<std::size_t>(base);
  return result;
}

// Returns t such that local_dim^t == size, or -1.
int tensor_exponent(long size, int local_dim) {
  if (local_dim < 1 || size < 1) return -1;
  if (local_dim == 1) return size == 1 ? 1 : -1;
  int t = 0;
  long p = 1;
  while (p < size) {
    p *= local_dim;
    ++t;
  }
  return p == size ? t : -1;
}

// Digits of a flat index, most significant (first tensor factor) first.
void to_digits(std::size_t index, int local_dim, std::vector<int>& digits) {
  for (int m = static_cast<int>(digits.size()) - 1; m >= 0; --m) {
    digits[m] = static_cast<int>(index % local_dim);
    index /= local_dim;
  }
}

std::size_t from_digits(const std::vector<int>& digits, int local_dim) {
  std::size_t index = 0;
  for (int digit : digits) index = index * local_dim + digit;
  return index;
}

void validate_permutation(std::span<const int> sigma) {
  std::vector<int> sorted(sigma.begin(), sigma.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] != static_cast<int>(i)) {
      throw DomainError("permutation_operator: not a permutation of 0..t-1");
    }
  }
}

// image[in] = out for the slot permutation sigma.
std::vector<std::size_t> permutation_index_map(std::span<const int> sigma, const TensorSpace& space) {
  const std::size_t n = space.dimension();
  std::vector<std::size_t> image(n);
  std::vector<int> in_digits(space.copies), out_digits(space.copies);
  for (std::size_t in = 0; in < n; ++in) {
    to_digits(in, space.local_dim, in_digits);
    for (int m = 0; m < space.copies; ++m) out_digits[sigma[m]] = in_digits[m];
    image[in] = from_digits(out_digits, space.local_dim);
  }
  return image;
}

}  // namespace

PureState::PureState(ComplexVector amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() == 0) throw DomainError("PureState: empty amplitude vector");
  const double norm = amplitudes_.norm();
  if (std::abs(norm - 1.0) > kUnitTol) {
    throw ValidationError("PureState: norm " + std::to_string(norm) + " differs from 1");
  }
}

PureState PureState::normalized(ComplexVector v) {
  const double norm = v.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) throw DomainError("PureState: cannot normalise zero vector");
  v /= norm;
  return PureState(std::move(v));
}

PureState PureState::basis(int dim, int index) {
  if (dim < 1 || index < 0 || index >= dim) throw DomainError("PureState::basis: index out of range");
  ComplexVector v = ComplexVector::Zero(dim);
  v(index) = 1.0;
  return PureState(std::move(v));
}

std::size_t TensorSpace::dimension() const { return checked_power(local_dim, copies); }

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexVector kron(const ComplexVector& a, const ComplexVector& b) {
  ComplexVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

ComplexVector tensor_power(const ComplexVector& v, int copies) {
  if (copies < 1) throw DomainError("tensor_power: copies must be >= 1");
  ComplexVector out = v;
  for (int c = 1; c < copies; ++c) out = kron(out, v);
  return out;
}

ComplexMatrix permutation_operator(std::span<const int> sigma, const TensorSpace& space) {
  if (static_cast<int>(sigma.size()) != space.copies) {
    throw SizeError("permutation_operator: permutation length differs from number of copies");
  }
  validate_permutation(sigma);
  const auto image = permutation_index_map(sigma, space);
  const auto n = static_cast<Eigen::Index>(space.dimension());
  ComplexMatrix w = ComplexMatrix::Zero(n, n);
  for (Eigen::Index in = 0; in < n; ++in) w(static_cast<Eigen::Index>(image[in]), in) = 1.0;
  return w;
}

SymmetricProjector symmetric_projector(const TensorSpace& space) {
  if (space.copies < 1 || space.local_dim < 1) throw DomainError("symmetric_projector: t and d must be >= 1");
  const auto n = static_cast<Eigen::Index>(space.dimension());
  const double weight = 1.0 / static_cast<double>(factorial(space.copies));

  ComplexMatrix p = ComplexMatrix::Zero(n, n);
  Permutation sigma(space.copies);
  std::iota(sigma.begin(), sigma.end(), 0);
  do {
    const auto image = permutation_index_map(sigma, space);
    for (Eigen::Index in = 0; in < n; ++in) p(static_cast<Eigen::Index>(image[in]), in) += weight;
  } while (std::next_permutation(sigma.begin(), sigma.end()));

  const long dim = std::lround(p.trace().real());
  return {std::move(p), dim};
}

const SymmetricProjector& cached_symmetric_projector(const TensorSpace& space) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<SymmetricProjector>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{space.local_dim, space.copies}];
  if (!slot) slot = std::make_unique<SymmetricProjector>(symmetric_projector(space));
  return *slot;
}

ComplexMatrix symmetric_subspace_basis(const TensorSpace& space) {
  const auto& projector = cached_symmetric_projector(space).matrix;
  const long count = binomial(space.local_dim + space.copies - 1, space.copies);
  ComplexMatrix basis(projector.rows(), count);

  // Enumerate non-decreasing digit strings; each is a distinct multiset.
  std::vector<int> digits(space.copies, 0);
  Eigen::Index column = 0;
  while (true) {
    const auto index = static_cast<Eigen::Index>(from_digits(digits, space.local_dim));
    basis.col(column) = projector.col(index).normalized();
    ++column;
    int pos = space.copies - 1;
    while (pos >= 0 && digits[pos] == space.local_dim - 1) --pos;
    if (pos < 0) break;
    const int next = digits[pos] + 1;
    for (int m = pos; m < space.copies; ++m) digits[m] = next;
  }
  return basis;
}

ComplexMatrix partial_trace_leading(const ComplexMatrix& m, int local_dim, int keep_last) {
  if (m.rows() != m.cols()) throw SizeError("partial_trace_leading: matrix is not square");
  const int t = tensor_exponent(static_cast<long>(m.rows()), local_dim);
  if (t < 0) throw SizeError("partial_trace_leading: size is not a power of the local dimension");
  if (keep_last < 1 || keep_last >= t) throw SizeError("partial_trace_leading: need 1 <= keep_last < t");

  const auto kept = static_cast<Eigen::Index>(checked_power(local_dim, keep_last));
  const auto traced = static_cast<Eigen::Index>(checked_power(local_dim, t - keep_last));
  ComplexMatrix out = ComplexMatrix::Zero(kept, kept);
  for (Eigen::Index i = 0; i < traced; ++i) out += m.block(i * kept, i * kept, kept, kept);
  return out;
}

ComplexMatrix partial_trace_of_product(const ComplexMatrix& op, const ComplexMatrix& leading,
                                       int local_dim) {
  if (op.rows() != op.cols() || leading.rows() != leading.cols()) {
    throw SizeError("partial_trace_of_product: operators must be square");
  }
  const Eigen::Index lead = leading.rows();
  if (lead == 0 || op.rows() % lead != 0) throw SizeError("partial_trace_of_product: incompatible sizes");
  const Eigen::Index kept = op.rows() / lead;
  if (tensor_exponent(static_cast<long>(kept), local_dim) < 0 ||
      tensor_exponent(static_cast<long>(lead), local_dim) < 0) {
    throw SizeError("partial_trace_of_product: sizes are not powers of the local dimension");
  }

  // [tr_lead (op (L ⊗ 1))]_{ab} = Σ_{i,j} op[(i,a),(j,b)] L[j,i]
  ComplexMatrix out = ComplexMatrix::Zero(kept, kept);
  for (Eigen::Index i = 0; i < lead; ++i) {
    for (Eigen::Index j = 0; j < lead; ++j) {
      const Complex c = leading(j, i);
      if (c == Complex(0.0, 0.0)) continue;
      out.noalias() += c * op.block(i * kept, j * kept, kept, kept);
    }
  }
  return out;
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return max_abs_diff(m, m.adjoint()) <= tol;
}

HermitianEigen hermitian_eig(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw SizeError("hermitian_eig: matrix is not square");
  const double scale = std::max(1.0, max_abs(m));
  if (!is_hermitian(m, kUnitTol * scale)) throw ContractViolation("hermitian_eig: matrix is not Hermitian");
  const ComplexMatrix symmetrised = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(symmetrised);
  if (solver.info() != Eigen::Success) throw ContractViolation("hermitian_eig: solver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double max_abs(const ComplexMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw SizeError("max_abs_diff: shape mismatch");
  return max_abs(a - b);
}

long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long result = 1;
  for (int i = 1; i <= k; ++i) result = result * (n - k + i) / i;
  return result;
}

long factorial(int n) {
  long result = 1;
  for (int i = 2; i <= n; ++i) result *= i;
  return result;
}

}  // namespace mubest
