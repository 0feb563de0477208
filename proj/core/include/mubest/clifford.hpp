#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mubest/tensor_algebra.hpp"

namespace mubest {

/// Entries of a phase-canonical matrix rounded onto a 1e-6 grid, (re, im) interleaved.
using CanonicalKey = std::vector<std::int64_t>;

inline constexpr double kCanonicalGrid = 1e-6;

/// Unitary modulo global phase: the first entry (row-major) with modulus above
/// 1e-8 is made real positive.
class CanonicalUnitary {
 public:
  const ComplexMatrix& matrix() const { return matrix_; }
  const CanonicalKey& key() const { return key_; }
  int dim() const { return static_cast<int>(matrix_.rows()); }

 private:
  friend CanonicalUnitary canonicalize_phase(const ComplexMatrix& u);
  CanonicalUnitary(ComplexMatrix m, CanonicalKey k) : matrix_(std::move(m)), key_(std::move(k)) {}

  ComplexMatrix matrix_;
  CanonicalKey key_;
};

/// Throws ContractViolation unless u is unitary within 1e-9.
CanonicalUnitary canonicalize_phase(const ComplexMatrix& u);

bool is_unitary(const ComplexMatrix& u, double tol = 1e-9);

/// Gates as printed for one and two qubits. Qubit 1 is the leading tensor
/// factor, so |11> is basis index 3 and CNOT12 maps it to |10> (index 2).
struct StandardGates {
  ComplexMatrix I, X, Y, Z, P, H;              // 2x2
  ComplexMatrix CNOT12, CNOT21;                // 4x4
  ComplexMatrix H1, H2, P1, P2, X1, X2, Z1, Z2;  // G⊗I and I⊗G
};

const StandardGates& standard_gates();

/// Finite group of unitaries modulo phase, stored as a key-sorted array.
class UnitaryGroup {
 public:
  UnitaryGroup(std::vector<CanonicalUnitary> elements, std::vector<std::string> generator_labels);

  std::size_t order() const { return elements_.size(); }
  int dim() const { return elements_.empty() ? 0 : elements_.front().dim(); }
  const std::vector<CanonicalUnitary>& elements() const { return elements_; }
  const std::vector<std::string>& generator_labels() const { return labels_; }

  bool contains(const CanonicalKey& key) const;
  /// Canonicalises u first.
  bool contains(const ComplexMatrix& u) const;
  /// Every element of this group belongs to `other`.
  bool is_subset_of(const UnitaryGroup& other) const;

 private:
  std::vector<CanonicalUnitary> elements_;
  std::vector<std::string> labels_;
};

/// Breadth-first closure of the identity under left multiplication by the
/// generators. Throws GroupOverflowError once more than max_size elements appear.
UnitaryGroup generate_group(std::span<const ComplexMatrix> generators, std::size_t max_size,
                            std::vector<std::string> labels = {});

/// {I, X, Y, Z}^{⊗n} for n in {1, 2}.
UnitaryGroup pauli_group_projective(int qubits);

/// <H, P>, order 24.
UnitaryGroup single_qubit_clifford_group();

/// Generated by H1, H2, P1, P2, CNOT12, CNOT21; order 11520.
UnitaryGroup clifford_group();

/// Generated by H2·CNOT12·P1·H2 and H1·P2·CNOT12·H2 (matrix products as
/// written, rightmost factor acting first); order 960.
UnitaryGroup restricted_clifford_group();

inline constexpr std::size_t kPauliOrder = 16;
inline constexpr std::size_t kCliffordOrder = 11520;
inline constexpr std::size_t kRestrictedCliffordOrder = 960;

/// Elements U with |<psi|U|psi>| >= 1 - 1e-8.
UnitaryGroup stabilizer_of_state(const UnitaryGroup& group, const PureState& psi);

}  // namespace mubest
