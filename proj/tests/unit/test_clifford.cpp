#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "mubest/clifford.hpp"
#include "mubest/designs.hpp"
#include "mubest/errors.hpp"
#include "oracles.hpp"

using namespace mubest;

namespace {

const UnitaryGroup& clifford() {
  static const UnitaryGroup g = clifford_group();
  return g;
}

const UnitaryGroup& restricted() {
  static const UnitaryGroup g = restricted_clifford_group();
  return g;
}

void expect_closed(const UnitaryGroup& g, std::uint32_t seed) {
  std::mt19937 gen(seed);
  std::uniform_int_distribution<std::size_t> pick(0, g.order() - 1);
  for (int n = 0; n < 100; ++n) {
    const ComplexMatrix& u = g.elements()[pick(gen)].matrix();
    const ComplexMatrix& v = g.elements()[pick(gen)].matrix();
    EXPECT_TRUE(g.contains(ComplexMatrix(u * v)));
    EXPECT_TRUE(g.contains(ComplexMatrix(u.adjoint())));
    EXPECT_EQ(canonicalize_phase(u.inverse()).key(), canonicalize_phase(u.adjoint()).key());
  }
}

}  // namespace

TEST(StandardGates, HadamardIsInvolution) {
  const auto& g = standard_gates();
  EXPECT_LT(max_abs_diff(g.H * g.H, g.I), 1e-12);
}

TEST(StandardGates, PhaseGateHasOrderFour) {
  const auto& g = standard_gates();
  const ComplexMatrix p2 = g.P * g.P;
  EXPECT_LT(max_abs_diff(p2 * p2, g.I), 1e-12);
  EXPECT_GT(max_abs_diff(p2, g.I), 1.0);
}

TEST(StandardGates, CnotMapsElevenToTen) {
  const auto& g = standard_gates();
  EXPECT_EQ(g.CNOT12(2, 3), Complex(1.0, 0.0));
  EXPECT_EQ(g.CNOT12.col(3).cwiseAbs().sum(), 1.0);
  EXPECT_EQ(g.CNOT21(1, 3), Complex(1.0, 0.0));
}

TEST(StandardGates, EmbeddingsAreTensorProducts) {
  const auto& g = standard_gates();
  EXPECT_EQ(max_abs_diff(g.H1, oracle::kron(g.H, g.I)), 0.0);
  EXPECT_EQ(max_abs_diff(g.H2, oracle::kron(g.I, g.H)), 0.0);
  EXPECT_EQ(max_abs_diff(g.P1, oracle::kron(g.P, g.I)), 0.0);
  EXPECT_EQ(max_abs_diff(g.P2, oracle::kron(g.I, g.P)), 0.0);
}

TEST(CanonicalizePhase, RemovesGlobalPhase) {
  const ComplexMatrix u = std::exp(Complex(0.0, std::numbers::pi / 7)) * ComplexMatrix::Identity(4, 4);
  EXPECT_LT(max_abs_diff(canonicalize_phase(u).matrix(), ComplexMatrix::Identity(4, 4)), 1e-15);
}

TEST(CanonicalizePhase, SignInvariant) {
  for (std::size_t i = 0; i < clifford().order(); i += 997) {
    const ComplexMatrix& u = clifford().elements()[i].matrix();
    EXPECT_EQ(canonicalize_phase(u).key(), canonicalize_phase(-u).key());
  }
}

TEST(CanonicalizePhase, KeyIgnoresPhase) {
  const auto& g = standard_gates();
  EXPECT_EQ(canonicalize_phase(g.H1).key(), canonicalize_phase(Complex(0.0, 1.0) * g.H1).key());
}

TEST(CanonicalizePhase, FirstLargeEntryIsRealPositive) {
  for (std::size_t i = 0; i < restricted().order(); i += 37) {
    const ComplexMatrix& m = restricted().elements()[i].matrix();
    const ComplexMatrix row_major = m.transpose();
    const Complex* first = std::find_if(row_major.data(), row_major.data() + row_major.size(),
                                        [](Complex c) { return std::abs(c) > 1e-8; });
    ASSERT_NE(first, row_major.data() + row_major.size());
    EXPECT_GT(first->real(), 0.0);
    EXPECT_LE(std::abs(first->imag()), 1e-9);
  }
}

TEST(CanonicalizePhase, RejectsNonUnitary) {
  EXPECT_THROW(canonicalize_phase(2.0 * ComplexMatrix::Identity(2, 2)), ContractViolation);
}

TEST(GenerateGroup, CliffordOrder) { EXPECT_EQ(clifford().order(), 11520u); }

TEST(GenerateGroup, RestrictedOrder) { EXPECT_EQ(restricted().order(), 960u); }

TEST(GenerateGroup, SingleQubitClifford) {
  const auto& g = standard_gates();
  const ComplexMatrix gens[] = {g.H, g.P};
  EXPECT_EQ(generate_group(gens, 100).order(), 24u);
  EXPECT_EQ(single_qubit_clifford_group().order(), 24u);
}

TEST(GenerateGroup, OverflowIsReported) {
  const auto& g = standard_gates();
  const ComplexMatrix gens[] = {g.H, g.P};
  EXPECT_THROW(generate_group(gens, 10), GroupOverflowError);
}

TEST(GenerateGroup, IrrationalRotationOverflows) {
  // a rotation by an irrational angle never closes
  ComplexMatrix r(2, 2);
  const double a = 1.0;
  r << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
  const ComplexMatrix gens[] = {r};
  EXPECT_THROW(generate_group(gens, 500), GroupOverflowError);
}

TEST(GenerateGroup, ContainsIdentityAndIsClosed) {
  EXPECT_TRUE(clifford().contains(ComplexMatrix(ComplexMatrix::Identity(4, 4))));
  EXPECT_TRUE(restricted().contains(ComplexMatrix(ComplexMatrix::Identity(4, 4))));
  expect_closed(clifford(), 1);
  expect_closed(restricted(), 2);
  expect_closed(pauli_group_projective(2), 3);
}

TEST(GenerateGroup, RestrictedIsSubgroupOfClifford) {
  EXPECT_TRUE(restricted().is_subset_of(clifford()));
  EXPECT_FALSE(clifford().is_subset_of(restricted()));
}

TEST(GenerateGroup, PauliGroupIsNormalInBothGroups) {
  const UnitaryGroup pauli = pauli_group_projective(2);
  EXPECT_TRUE(pauli.is_subset_of(restricted()));
  for (std::size_t i = 0; i < clifford().order(); i += 113) {
    const ComplexMatrix& c = clifford().elements()[i].matrix();
    for (const auto& p : pauli.elements()) {
      EXPECT_TRUE(pauli.contains(ComplexMatrix(c * p.matrix() * c.adjoint())));
    }
  }
}

TEST(PauliGroup, Orders) {
  EXPECT_EQ(pauli_group_projective(1).order(), 4u);
  EXPECT_EQ(pauli_group_projective(2).order(), 16u);
  EXPECT_THROW(pauli_group_projective(3), DomainError);
}

TEST(PauliGroup, ElementsSquareToIdentityUpToPhase) {
  const auto identity_key = canonicalize_phase(ComplexMatrix::Identity(4, 4)).key();
  const UnitaryGroup pauli = pauli_group_projective(2);
  for (const auto& p : pauli.elements()) {
    EXPECT_EQ(canonicalize_phase(p.matrix() * p.matrix()).key(), identity_key);
  }
}

TEST(Stabilizer, FiducialInClifford) {
  EXPECT_EQ(stabilizer_of_state(clifford(), fiducial_state()).order(), 3u);
}

TEST(Stabilizer, FiducialInRestrictedIsTrivial) {
  EXPECT_EQ(stabilizer_of_state(restricted(), fiducial_state()).order(), 1u);
}

TEST(Stabilizer, ZeroZeroInPauliGroup) {
  EXPECT_EQ(stabilizer_of_state(pauli_group_projective(2), PureState::basis(4, 0)).order(), 4u);
}

TEST(Stabilizer, NamedElementsUseMatrixProductOrder) {
  // As products with the rightmost factor acting first, HPZ and HPHPX fix the
  // (1,1,1)/√3 qubit state; applying the factors left to right does not.
  const auto& g = standard_gates();
  const double s = 1.0 / std::sqrt(3.0);
  const PureState q = bloch_to_state({s, s, s});
  auto fixes = [&](const ComplexMatrix& u) { return std::abs(q.inner(PureState(u * q.amplitudes()))) > 1 - 1e-12; };
  EXPECT_TRUE(fixes(g.H * g.P * g.Z));
  EXPECT_TRUE(fixes(g.H * g.P * g.H * g.P * g.X));
  EXPECT_FALSE(fixes(g.Z * g.P * g.H));
  EXPECT_FALSE(fixes(g.X * g.P * g.H * g.P * g.H));

  const UnitaryGroup stab = stabilizer_of_state(clifford(), fiducial_state());
  EXPECT_TRUE(stab.contains(ComplexMatrix(oracle::kron(g.H * g.P * g.Z, g.I))));
  EXPECT_TRUE(stab.contains(ComplexMatrix(oracle::kron(g.H * g.P * g.H * g.P * g.X, g.I))));
}
