#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "mubest/designs.hpp"
#include "mubest/errors.hpp"
#include "mubest/estimation.hpp"
#include "oracles.hpp"

using namespace mubest;

namespace {

constexpr double kPi = std::numbers::pi;

const StateDesign& design960() {
  static const StateDesign d = clifford_design();
  return d;
}

ComplexMatrix projector(const ComplexVector& v) { return v * v.adjoint(); }

std::vector<ProjectiveMeasurement> triple_measurements(double x, double y, double z) {
  return mub_triple(x, y, z).measurements();
}

double sum_of_norms(const EstimationReport& r) {
  double s = 0.0;
  for (const auto& o : r.per_outcome) s += o.q_norm;
  return s;
}

ComplexMatrix product_effect(std::span<const ProjectiveMeasurement> ms, const OutcomeLabel& label) {
  ComplexMatrix e = ms[0].effect(label[0]);
  for (std::size_t c = 1; c < ms.size(); ++c) e = oracle::kron(e, ms[c].effect(label[c]));
  return e;
}

}  // namespace

TEST(QOperator, SingleCopyRankOne) {
  const ComplexVector a = oracle::random_unit_vector(4, 1);
  const QOperator q = q_operator(projector(a), 1, 4);
  EXPECT_LT(max_abs_diff(q.matrix, ComplexMatrix::Identity(4, 4) + projector(a)), 1e-12);
  EXPECT_NEAR(q.norm, 2.0, 1e-12);
}

TEST(QOperator, SingleCopyIdentity) {
  const QOperator q = q_operator(ComplexMatrix::Identity(4, 4), 1, 4);
  EXPECT_LT(max_abs_diff(q.matrix, 5.0 * ComplexMatrix::Identity(4, 4)), 1e-12);
  EXPECT_NEAR(q.norm, 5.0, 1e-12);
}

TEST(QOperator, TwoCopiesUnbiasedPair) {
  const ComplexVector a = oracle::basis_vector(4, 0);
  const ComplexVector b = ComplexVector::Constant(4, 0.5);
  const QOperator q = q_operator(oracle::kron(projector(a), projector(b)), 2, 4);
  EXPECT_NEAR(q.norm, 3.5, 1e-12);
  const ComplexMatrix m = projector(a) + projector(b);
  EXPECT_LT(max_abs_diff(q.matrix, 1.25 * ComplexMatrix::Identity(4, 4) + m * m), 1e-12);
}

TEST(QOperator, MatchesExplicitConstruction) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const ComplexVector a = oracle::random_unit_vector(4, 10 + s);
    const ComplexVector b = oracle::random_unit_vector(4, 40 + s);
    const ComplexVector c = oracle::random_unit_vector(4, 70 + s);
    EXPECT_LT(max_abs_diff(q_operator(projector(a), 1, 4).matrix, oracle::q_operator(projector(a), 1, 4)), 1e-12);
    const ComplexMatrix e2 = oracle::kron(projector(a), projector(b));
    const QOperator q2 = q_operator(e2, 2, 4);
    EXPECT_LT(max_abs_diff(q2.matrix, oracle::q_operator(e2, 2, 4)), 1e-12);
    EXPECT_NEAR(q2.norm, oracle::largest_eigenvalue(q2.matrix), 1e-10);
    if (s < 3) {
      const ComplexMatrix e3 = oracle::kron(e2, projector(c));
      EXPECT_LT(max_abs_diff(q_operator(e3, 3, 4).matrix, oracle::q_operator(e3, 3, 4)), 1e-11);
    }
  }
}

TEST(QOperator, HermitianPsdWithNormOnTop) {
  const auto ms = triple_measurements(kPi / 2, 0.3, 1.7);
  for (int j = 0; j < 4; ++j) {
    const QOperator q = q_operator(product_effect(ms, {j, (j + 1) % 4, 3 - j}), 3, 4);
    EXPECT_TRUE(is_hermitian(q.matrix));
    const HermitianEigen eig = hermitian_eig(q.matrix);
    EXPECT_GE(eig.values.minCoeff(), -1e-9);
    EXPECT_NEAR(q.norm, eig.values.maxCoeff(), 1e-10);
  }
}

TEST(QOperator, Errors) {
  EXPECT_THROW(q_operator(ComplexMatrix::Identity(8, 8), 2, 4), SizeError);
  EXPECT_THROW(q_operator(ComplexMatrix::Identity(4, 4), 4, 4), DomainError);
}

TEST(QOperator, OutcomeSumIsScaledIdentity) {
  for (int n = 1; n <= 3; ++n) {
    const auto all = triple_measurements(kPi / 2, 0.8, 2.2);
    const std::span<const ProjectiveMeasurement> ms(all.data(), static_cast<std::size_t>(n));
    ComplexMatrix sum = ComplexMatrix::Zero(4, 4);
    OutcomeLabel label(static_cast<std::size_t>(n), 0);
    for (int idx = 0; idx < (1 << (2 * n)); ++idx) {
      for (int c = 0; c < n; ++c) label[static_cast<std::size_t>(c)] = (idx >> (2 * (n - 1 - c))) & 3;
      sum += q_operator(product_effect(ms, label), n, 4).matrix;
    }
    const double expected = static_cast<double>(factorial(n + 1) * binomial(n + 4, n + 1)) / 4.0;
    EXPECT_LT(max_abs_diff(sum, expected * ComplexMatrix::Identity(4, 4)), 1e-8) << n;
  }
}

TEST(QOperatorEmpirical, ExactDesignReproducesIdeal) {
  const auto ms = triple_measurements(kPi / 2, kPi / 2, kPi / 4);
  for (int j = 0; j < 4; ++j) {
    const ComplexMatrix e = product_effect(ms, {j, 3 - j, (2 * j) % 4});
    EXPECT_LT(max_abs_diff(q_operator_empirical(e, 3, design960()).matrix, q_operator(e, 3, 4).matrix), 1e-8);
  }
  EXPECT_LT(max_abs_diff(empirical_symmetric_projector(design960(), 3), symmetric_projector({4, 3}).matrix), 1e-10);
}

TEST(QOperatorEmpirical, SingleStateDesign) {
  const StateDesign single(4, 1, {PureState::basis(4, 0)}, Provenance::kCustom);
  const ComplexVector e0 = oracle::basis_vector(4, 0);
  const ComplexMatrix p = empirical_symmetric_projector(single, 4);
  ComplexMatrix expected = ComplexMatrix::Zero(256, 256);
  expected(0, 0) = 35.0;
  EXPECT_LT(max_abs_diff(p, expected), 1e-12);
  const auto ms = triple_measurements(kPi / 2, 1.0, 2.0);
  const QOperator q = q_operator_empirical(product_effect(ms, {0, 1, 2}), 3, single);
  const RealVector ev = hermitian_eig(q.matrix).values;
  EXPECT_EQ((ev.array().abs() > 1e-9 * q.norm).count(), 1);
  EXPECT_LT(max_abs_diff(q.matrix, q.norm * projector(e0)), 1e-10);
  EXPECT_THROW(q_operator_empirical(ComplexMatrix::Identity(4, 4), 1, StateDesign(2, 1, {PureState::basis(2, 0)},
                                                                                    Provenance::kCustom)),
               SizeError);
}

TEST(OptimalEstimator, RankOneTop) {
  const QOperator q = q_operator(projector(oracle::basis_vector(4, 0)), 1, 4);
  const Estimator est = optimal_estimator(q);
  EXPECT_EQ(est.support_dim, 1);
  EXPECT_NEAR(est.gap, 1.0, 1e-12);
  EXPECT_LT(max_abs_diff(est.density, projector(oracle::basis_vector(4, 0))), 1e-12);
}

TEST(OptimalEstimator, FullyDegenerate) {
  const QOperator q{3.0 * ComplexMatrix::Identity(4, 4), {0}, 3.0};
  const Estimator est = optimal_estimator(q);
  EXPECT_EQ(est.support_dim, 4);
  EXPECT_EQ(est.gap, 0.0);
  EXPECT_LT(max_abs_diff(est.density, 0.25 * ComplexMatrix::Identity(4, 4)), 1e-12);
}

TEST(OptimalEstimator, TwoDimensionalTopEigenspace) {
  ComplexMatrix u = oracle::random_matrix(4, 4, 5).householderQr().householderQ();
  const RealVector spectrum = (RealVector(4) << 3.0, 3.0, 1.0, 0.5).finished();
  const ComplexMatrix m = u * spectrum.cast<Complex>().asDiagonal() * u.adjoint();
  const QOperator q{m, {0}, 3.0};
  const Estimator est = optimal_estimator(q);
  EXPECT_EQ(est.support_dim, 2);
  EXPECT_NEAR(est.gap, 2.0, 1e-10);
  EXPECT_NEAR(est.density.trace().real(), 1.0, 1e-12);
  EXPECT_NEAR((m * est.density).trace().real(), 3.0, 1e-10);
  for (std::uint64_t s = 0; s < 10; ++s) {
    const ComplexVector c = oracle::random_unit_vector(2, s);
    const ComplexVector v = u.col(0) * c(0) + u.col(1) * c(1);
    EXPECT_NEAR((m * projector(v)).trace().real(), 3.0, 1e-8);
  }
}

TEST(OptimalEstimator, ZeroOperatorIsRejected) {
  EXPECT_THROW(optimal_estimator(QOperator{ComplexMatrix::Zero(4, 4), {0}, 0.0}), DomainError);
}

TEST(EstimationFidelity, SingleBasis) {
  const auto ms = triple_measurements(kPi / 2, 0, 0);
  const EstimationReport r = estimation_fidelity(std::span(ms.data(), 1));
  EXPECT_NEAR(r.fidelity, 0.4, 1e-12);
  EXPECT_EQ(r.copies, 1);
  EXPECT_EQ(r.per_outcome.size(), 4u);
}

TEST(EstimationFidelity, TwoCopies) {
  const auto ms = triple_measurements(kPi / 2, 0, 0);
  EXPECT_NEAR(estimation_fidelity(std::span(ms.data(), 2)).fidelity, 7.0 / 15.0, 1e-12);
  const MubTriple t = mub_triple(kPi / 2, 0.4, 1.1);
  for (BasisPair p : {BasisPair::kAB, BasisPair::kAC, BasisPair::kBC}) {
    EXPECT_NEAR(estimation_fidelity(pair_measurements(t, p)).fidelity, 7.0 / 15.0, 1e-12);
  }
}

TEST(EstimationFidelity, ThreeCopiesClosedForm) {
  const double expected = (46 + 5 * std::sqrt(3.0)) / 105;
  const MubTriple t = mub_triple(kPi / 2, kPi / 2, kPi / 2);
  EXPECT_NEAR(triple_fidelity(t), expected, 1e-12);
  const EstimationReport r = estimation_fidelity(t.measurements());
  ASSERT_EQ(r.per_outcome.size(), 64u);
  EXPECT_NEAR(r.fidelity, sum_of_norms(r) / (24.0 * 35.0), 1e-12);
  EXPECT_TRUE(std::is_sorted(r.per_outcome.begin(), r.per_outcome.end(),
                             [](const auto& a, const auto& b) { return a.label < b.label; }));
  EXPECT_TRUE(r.warnings.empty());
}

TEST(EstimationFidelity, EstimatorsAreValidStates) {
  const EstimationReport r = estimation_fidelity(triple_measurements(kPi / 2, 0.0, 0.0));
  for (const auto& o : r.per_outcome) {
    EXPECT_NEAR(o.estimator.density.trace().real(), 1.0, 1e-10);
    EXPECT_GE(hermitian_eig(o.estimator.density).values.minCoeff(), -1e-9);
    EXPECT_NEAR(o.contribution, o.q_norm, 1e-10);
  }
}

TEST(EstimationFidelity, EstimatorChoiceInvariance) {
  const auto ms = triple_measurements(kPi / 2, 0.0, 0.0);
  const EstimationReport r = estimation_fidelity(ms);
  double alt = 0.0;
  std::uint64_t seed = 0;
  for (const auto& o : r.per_outcome) {
    const ComplexMatrix q = q_operator(product_effect(ms, o.label), 3, 4).matrix;
    const HermitianEigen eig = hermitian_eig(q);
    // random state in the top eigenspace
    ComplexVector v = ComplexVector::Zero(4);
    const ComplexVector c = oracle::random_unit_vector(o.estimator.support_dim, ++seed);
    for (int k = 0; k < o.estimator.support_dim; ++k) v += c(k) * eig.vectors.col(3 - k);
    alt += (q * projector(v)).trace().real();
  }
  EXPECT_NEAR(alt / (24.0 * 35.0), r.fidelity, 1e-10);
}

TEST(EstimationFidelity, OutcomeRelabelingIsExact) {
  auto ms = triple_measurements(kPi / 2, 0.9, 0.2);
  const double base = estimation_fidelity(ms).fidelity;
  for (auto& m : ms) {
    std::vector<ComplexMatrix> effects = m.effects();
    std::reverse(effects.begin(), effects.end());
    std::swap(effects[0], effects[2]);
    m = ProjectiveMeasurement(effects);
  }
  EXPECT_EQ(estimation_fidelity(ms).fidelity, base);
}

TEST(EstimationFidelity, UnitaryInvariance) {
  Rng rng(3);
  const MubTriple t = mub_triple(kPi / 2, kPi / 2, 3 * kPi / 8);
  const double base = triple_fidelity(t);
  for (int n = 0; n < 5; ++n) {
    EXPECT_NEAR(triple_fidelity(transform_triple(t, haar_random_unitary(4, rng))), base, 1e-10);
  }
}

TEST(EstimationFidelity, EmpiricalCliffordEqualsIdeal) {
  const FidelityModel model = FidelityModel::empirical(design960());
  for (double z : {0.0, kPi / 3, kPi / 2}) {
    const MubTriple t = mub_triple(kPi / 2, kPi / 2, z);
    EXPECT_NEAR(triple_fidelity(t, model), triple_fidelity(t), 1e-8);
  }
  const EstimationReport r = estimation_fidelity(mub_triple(kPi / 2, 0, 0).measurements(), model);
  EXPECT_EQ(r.design_mode, DesignMode::kEmpirical);
  EXPECT_TRUE(r.warnings.empty());
}

TEST(EstimationFidelity, IdealEstimatorSourceOnRandomDesign) {
  std::vector<PureState> states;
  const ComplexMatrix cols = haar_random_states(4, 60, 12);
  for (Eigen::Index j = 0; j < cols.cols(); ++j) states.push_back(PureState(cols.col(j)));
  const StateDesign d(4, 4, states, Provenance::kCustom);
  const auto ms = triple_measurements(kPi / 2, kPi / 2, kPi / 2);
  const EstimationReport own = estimation_fidelity(ms, FidelityModel::empirical(d, EstimatorSource::kEmpirical));
  const EstimationReport std_est = estimation_fidelity(ms, FidelityModel::empirical(d, EstimatorSource::kIdeal));
  EXPECT_LE(std_est.fidelity, own.fidelity + 1e-12);
  for (std::size_t i = 0; i < own.per_outcome.size(); ++i) {
    EXPECT_LE(std_est.per_outcome[i].contribution, std_est.per_outcome[i].q_norm + 1e-9);
  }
}

TEST(EstimationFidelity, WarnsWhenDesignTooWeak) {
  std::vector<PureState> states;
  const ComplexMatrix cols = haar_random_states(4, 8, 21);
  for (Eigen::Index j = 0; j < cols.cols(); ++j) states.push_back(PureState(cols.col(j)));
  const StateDesign weak(4, 2, states, Provenance::kCustom);
  const EstimationReport r = estimation_fidelity(triple_measurements(0, 0, 0), FidelityModel::empirical(weak));
  EXPECT_FALSE(r.warnings.empty());
}

TEST(EstimationFidelity, RejectsTooManyCopies) {
  auto ms = triple_measurements(0, 0, 0);
  ms.push_back(ms.front());
  EXPECT_THROW(estimation_fidelity(ms), DomainError);
}

TEST(FidelityScan, MatchesTabulatedIdealRows) {
  const std::vector<double> ys{kPi / 2, 0.0};
  std::vector<double> zs;
  for (int k = 0; k <= 8; ++k) zs.push_back(k * kPi / 8);
  const auto points = fidelity_scan(kPi / 2, ys, zs);
  ASSERT_EQ(points.size(), 18u);
  const double top[] = {0.5103, 0.5146, 0.5179, 0.5199, 0.5206, 0.5199, 0.5179, 0.5146, 0.5103};
  const double bottom[] = {0.5000, 0.5044, 0.5076, 0.5096, 0.5103, 0.5096, 0.5076, 0.5044, 0.5000};
  for (int k = 0; k < 9; ++k) {
    EXPECT_NEAR(points[static_cast<std::size_t>(k)].fidelity, top[k], 5e-5) << k;
    EXPECT_NEAR(points[static_cast<std::size_t>(9 + k)].fidelity, bottom[k], 5e-5) << k;
    EXPECT_NEAR(points[static_cast<std::size_t>(k)].fidelity, points[static_cast<std::size_t>(8 - k)].fidelity, 1e-10);
    EXPECT_NEAR(points[static_cast<std::size_t>(9 + k)].fidelity, points[static_cast<std::size_t>(17 - k)].fidelity,
                1e-10);
  }
  EXPECT_NEAR(points[4].fidelity, (46 + 5 * std::sqrt(3.0)) / 105, 1e-12);
  EXPECT_NEAR(points[9].fidelity, 0.5, 1e-12);
}

TEST(FidelityScan, CsvOutput) {
  const std::vector<double> ys{0.0};
  const std::vector<double> zs{0.0, kPi};
  const auto points = fidelity_scan(kPi / 2, ys, zs);
  std::ostringstream out;
  const std::vector<std::string> header{"mode=ideal"};
  write_scan_csv(out, points, header);
  const std::string text = out.str();
  EXPECT_EQ(text.rfind("# mode=ideal\nx,y,z,F\n", 0), 0u) << text;
  EXPECT_NE(text.find("0.5\n"), std::string::npos) << text;
  EXPECT_NE(text.find("3.14159265359"), std::string::npos) << text;
}

TEST(BasisPairs, Parsing) {
  EXPECT_EQ(basis_pair_from_string("ab"), BasisPair::kAB);
  EXPECT_EQ(basis_pair_from_string("bc"), BasisPair::kBC);
  EXPECT_EQ(to_string(BasisPair::kAC), "ac");
  EXPECT_THROW(basis_pair_from_string("cd"), DomainError);
}
