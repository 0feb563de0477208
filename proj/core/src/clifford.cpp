#include "mubest/clifford.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_set>
#include <utility>

#include "mubest/errors.hpp"

namespace mubest {

namespace {

constexpr double kPhaseAnchorThreshold = 1e-8;

struct KeyHash {
  std::size_t operator()(const CanonicalKey& key) const noexcept {
    std::size_t h = 0xcbf29ce484222325ull;
    for (std::int64_t v : key) {
      h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

CanonicalKey make_key(const ComplexMatrix& m) {
  CanonicalKey key;
  key.reserve(static_cast<std::size_t>(2 * m.size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      key.push_back(std::llround(m(i, j).real() / kCanonicalGrid));
      key.push_back(std::llround(m(i, j).imag() / kCanonicalGrid));
    }
  }
  return key;
}

bool key_less(const CanonicalUnitary& a, const CanonicalUnitary& b) { return a.key() < b.key(); }

ComplexMatrix mat2(Complex a, Complex b, Complex c, Complex d) {
  ComplexMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

StandardGates build_standard_gates() {
  const Complex i(0.0, 1.0);
  const double s = 1.0 / std::sqrt(2.0);
  StandardGates g;
  g.I = ComplexMatrix::Identity(2, 2);
  g.X = mat2(0, 1, 1, 0);
  g.Y = mat2(0, -i, i, 0);
  g.Z = mat2(1, 0, 0, -1);
  g.P = mat2(1, 0, 0, i);
  g.H = mat2(s, s, s, -s);

  g.CNOT12 = ComplexMatrix::Zero(4, 4);
  g.CNOT12(0, 0) = g.CNOT12(1, 1) = 1.0;
  g.CNOT12(2, 3) = g.CNOT12(3, 2) = 1.0;
  g.CNOT21 = ComplexMatrix::Zero(4, 4);
  g.CNOT21(0, 0) = g.CNOT21(2, 2) = 1.0;
  g.CNOT21(1, 3) = g.CNOT21(3, 1) = 1.0;

  g.H1 = kron(g.H, g.I);
  g.H2 = kron(g.I, g.H);
  g.P1 = kron(g.P, g.I);
  g.P2 = kron(g.I, g.P);
  g.X1 = kron(g.X, g.I);
  g.X2 = kron(g.I, g.X);
  g.Z1 = kron(g.Z, g.I);
  g.Z2 = kron(g.I, g.Z);
  return g;
}

}  // namespace

bool is_unitary(const ComplexMatrix& u, double tol) {
  if (u.rows() != u.cols() || u.rows() == 0) return false;
  return max_abs_diff(u.adjoint() * u, ComplexMatrix::Identity(u.rows(), u.cols())) <= tol;
}

CanonicalUnitary canonicalize_phase(const ComplexMatrix& u) {
  if (!is_unitary(u)) throw ContractViolation("canonicalize_phase: matrix is not unitary within 1e-9");
  ComplexMatrix m = u;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double modulus = std::abs(m(i, j));
      if (modulus > kPhaseAnchorThreshold) {
        m *= std::conj(m(i, j)) / modulus;
        m(i, j) = modulus;  // exactly real
        CanonicalKey key = make_key(m);
        return CanonicalUnitary(std::move(m), std::move(key));
      }
    }
  }
  throw ContractViolation("canonicalize_phase: zero matrix");
}

const StandardGates& standard_gates() {
  static const StandardGates gates = build_standard_gates();
  return gates;
}

UnitaryGroup::UnitaryGroup(std::vector<CanonicalUnitary> elements, std::vector<std::string> generator_labels)
    : elements_(std::move(elements)), labels_(std::move(generator_labels)) {
  std::sort(elements_.begin(), elements_.end(), key_less);
  auto last = std::unique(elements_.begin(), elements_.end(),
                          [](const CanonicalUnitary& a, const CanonicalUnitary& b) { return a.key() == b.key(); });
  elements_.erase(last, elements_.end());
  for (const auto& e : elements_) {
    if (e.dim() != dim()) throw SizeError("UnitaryGroup: elements of different dimension");
  }
}

bool UnitaryGroup::contains(const CanonicalKey& key) const {
  auto it = std::lower_bound(elements_.begin(), elements_.end(), key,
                             [](const CanonicalUnitary& e, const CanonicalKey& k) { return e.key() < k; });
  return it != elements_.end() && it->key() == key;
}

bool UnitaryGroup::contains(const ComplexMatrix& u) const {
  if (u.rows() != dim()) return false;
  return contains(canonicalize_phase(u).key());
}

bool UnitaryGroup::is_subset_of(const UnitaryGroup& other) const {
  return std::all_of(elements_.begin(), elements_.end(),
                     [&other](const CanonicalUnitary& e) { return other.contains(e.key()); });
}

UnitaryGroup generate_group(std::span<const ComplexMatrix> generators, std::size_t max_size,
                            std::vector<std::string> labels) {
  if (generators.empty()) throw DomainError("generate_group: no generators");
  if (max_size < 1) throw DomainError("generate_group: max_size must be >= 1");
  const Eigen::Index n = generators.front().rows();
  for (const auto& g : generators) {
    if (g.rows() != n || g.cols() != n) throw SizeError("generate_group: generators differ in size");
    if (!is_unitary(g)) throw ContractViolation("generate_group: generator is not unitary");
  }

  std::vector<CanonicalUnitary> elements;
  std::unordered_set<CanonicalKey, KeyHash> seen;
  elements.push_back(canonicalize_phase(ComplexMatrix::Identity(n, n)));
  seen.insert(elements.back().key());

  std::vector<std::size_t> frontier{0};
  while (!frontier.empty()) {
    std::vector<std::size_t> next;
    for (std::size_t idx : frontier) {
      for (const auto& g : generators) {
        CanonicalUnitary product = canonicalize_phase(g * elements[idx].matrix());
        if (seen.contains(product.key())) continue;
        if (elements.size() >= max_size) {
          throw GroupOverflowError("generate_group: closure exceeds max_size = " + std::to_string(max_size));
        }
        seen.insert(product.key());
        next.push_back(elements.size());
        elements.push_back(std::move(product));
      }
    }
    frontier = std::move(next);
  }
  return UnitaryGroup(std::move(elements), std::move(labels));
}

UnitaryGroup pauli_group_projective(int qubits) {
  if (qubits != 1 && qubits != 2) throw DomainError("pauli_group_projective: n must be 1 or 2");
  const auto& g = standard_gates();
  const std::vector<std::pair<std::string, ComplexMatrix>> single = {{"I", g.I}, {"X", g.X}, {"Y", g.Y}, {"Z", g.Z}};
  std::vector<CanonicalUnitary> elements;
  if (qubits == 1) {
    for (const auto& [name, m] : single) elements.push_back(canonicalize_phase(m));
    return UnitaryGroup(std::move(elements), {"X", "Z"});
  }
  for (const auto& a : single) {
    for (const auto& b : single) elements.push_back(canonicalize_phase(kron(a.second, b.second)));
  }
  return UnitaryGroup(std::move(elements), {"X1", "Z1", "X2", "Z2"});
}

UnitaryGroup single_qubit_clifford_group() {
  const auto& g = standard_gates();
  const std::vector<ComplexMatrix> gens = {g.H, g.P};
  return generate_group(gens, 24, {"H", "P"});
}

UnitaryGroup clifford_group() {
  const auto& g = standard_gates();
  const std::vector<ComplexMatrix> gens = {g.H1, g.H2, g.P1, g.P2, g.CNOT12, g.CNOT21};
  return generate_group(gens, kCliffordOrder, {"H1", "H2", "P1", "P2", "CNOT12", "CNOT21"});
}

UnitaryGroup restricted_clifford_group() {
  const auto& g = standard_gates();
  const std::vector<ComplexMatrix> gens = {g.H2 * g.CNOT12 * g.P1 * g.H2, g.H1 * g.P2 * g.CNOT12 * g.H2};
  return generate_group(gens, kRestrictedCliffordOrder, {"H2*CNOT12*P1*H2", "H1*P2*CNOT12*H2"});
}

UnitaryGroup stabilizer_of_state(const UnitaryGroup& group, const PureState& psi) {
  if (psi.dim() != group.dim()) throw SizeError("stabilizer_of_state: state dimension differs from group");
  std::vector<CanonicalUnitary> kept;
  for (const auto& e : group.elements()) {
    const Complex overlap = psi.amplitudes().dot(e.matrix() * psi.amplitudes());
    if (std::abs(overlap) >= 1.0 - 1e-8) kept.push_back(e);
  }
  return UnitaryGroup(std::move(kept), {"stabilizer"});
}

}  // namespace mubest
