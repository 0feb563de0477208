#include "mubest/mub.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "mubest/clifford.hpp"
#include "mubest/errors.hpp"

namespace mubest {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double reduce_angle(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  return r;
}

}  // namespace

OrthonormalBasis::OrthonormalBasis(ComplexMatrix columns) : columns_(std::move(columns)) {
  if (columns_.rows() == 0 || columns_.rows() != columns_.cols()) {
    throw SizeError("OrthonormalBasis: need a square, non-empty matrix of column vectors");
  }
  const ComplexMatrix gram = columns_.adjoint() * columns_;
  if (max_abs_diff(gram, ComplexMatrix::Identity(columns_.rows(), columns_.cols())) > kUnitTol) {
    throw ValidationError("OrthonormalBasis: columns are not orthonormal within 1e-10");
  }
}

OrthonormalBasis OrthonormalBasis::computational(int dim) {
  return OrthonormalBasis(ComplexMatrix::Identity(dim, dim));
}

ProjectiveMeasurement::ProjectiveMeasurement(std::vector<ComplexMatrix> effects) : effects_(std::move(effects)) {
  if (effects_.empty()) throw ValidationError("ProjectiveMeasurement: no effects");
  const Eigen::Index d = effects_.front().rows();
  ComplexMatrix total = ComplexMatrix::Zero(d, d);
  for (std::size_t j = 0; j < effects_.size(); ++j) {
    const auto& e = effects_[j];
    if (e.rows() != d || e.cols() != d) throw SizeError("ProjectiveMeasurement: effects differ in size");
    if (!is_hermitian(e) || max_abs_diff(e * e, e) > kUnitTol) {
      throw ValidationError("ProjectiveMeasurement: effect " + std::to_string(j) + " is not an orthogonal projector");
    }
    total += e;
  }
  if (max_abs_diff(total, ComplexMatrix::Identity(d, d)) > kUnitTol) {
    throw ValidationError("ProjectiveMeasurement: effects do not sum to the identity");
  }
}

RealVector ProjectiveMeasurement::probabilities(const PureState& psi) const {
  if (psi.dim() != dim()) throw SizeError("ProjectiveMeasurement::probabilities: dimension mismatch");
  RealVector p(outcomes());
  for (int j = 0; j < outcomes(); ++j) p(j) = psi.amplitudes().dot(effect(j) * psi.amplitudes()).real();
  return p;
}

ProjectiveMeasurement measurement_of(const OrthonormalBasis& basis) {
  std::vector<ComplexMatrix> effects;
  effects.reserve(static_cast<std::size_t>(basis.dim()));
  for (int j = 0; j < basis.dim(); ++j) {
    const ComplexVector v = basis.vector(j);
    effects.push_back(v * v.adjoint());
  }
  return ProjectiveMeasurement(std::move(effects));
}

std::vector<ProjectiveMeasurement> MubTriple::measurements() const {
  return {measurement_of(basis_a), measurement_of(basis_b), measurement_of(basis_c)};
}

ComplexMatrix hadamard_b(double x) {
  const Complex i(0.0, 1.0);
  const Complex w = i * std::exp(i * x);
  ComplexMatrix h(4, 4);
  h << 1, 1, 1, 1,
       1, w, -1, -w,
       1, -1, 1, -1,
       1, -w, -1, w;
  return 0.5 * h;
}

ComplexMatrix hadamard_c(double y, double z) {
  const Complex i(0.0, 1.0);
  const Complex ey = std::exp(i * y);
  const Complex ez = std::exp(i * z);
  ComplexMatrix h(4, 4);
  h << 1, 1, 1, 1,
       -ey, ez, ey, -ez,
       1, -1, 1, -1,
       ey, ez, -ey, -ez;
  return 0.5 * h;
}

double unbiasedness_deviation(const OrthonormalBasis& first, const OrthonormalBasis& second) {
  if (first.dim() != second.dim()) throw SizeError("unbiasedness_deviation: dimension mismatch");
  const double target = 1.0 / first.dim();
  const ComplexMatrix overlaps = first.matrix().adjoint() * second.matrix();
  return (overlaps.cwiseAbs2().array() - target).abs().maxCoeff();
}

double unbiasedness_report(const MubTriple& t) {
  return std::max({unbiasedness_deviation(t.basis_a, t.basis_b), unbiasedness_deviation(t.basis_b, t.basis_c),
                   unbiasedness_deviation(t.basis_a, t.basis_c)});
}

MubTriple mub_triple(double x, double y, double z) {
  x = reduce_angle(x);
  y = reduce_angle(y);
  z = reduce_angle(z);
  MubTriple t{x, y, z, OrthonormalBasis::computational(4), OrthonormalBasis(hadamard_b(x)),
              OrthonormalBasis(hadamard_c(y, z))};
  if (unbiasedness_report(t) > kUnitTol) throw ValidationError("mub_triple: bases are not mutually unbiased");
  return t;
}

MubTriple transform_triple(const MubTriple& triple, const ComplexMatrix& u) {
  if (u.rows() != triple.basis_a.dim() || u.cols() != triple.basis_a.dim()) {
    throw SizeError("transform_triple: unitary has the wrong size");
  }
  if (!is_unitary(u)) throw ContractViolation("transform_triple: matrix is not unitary within 1e-9");
  MubTriple out{triple.x, triple.y, triple.z, OrthonormalBasis(u * triple.basis_a.matrix()),
                OrthonormalBasis(u * triple.basis_b.matrix()), OrthonormalBasis(u * triple.basis_c.matrix())};
  if (unbiasedness_report(out) > kUnitTol) throw ValidationError("transform_triple: unbiasedness lost");
  return out;
}

ComplexMatrix controlled_phase(double phi) {
  ComplexMatrix u = ComplexMatrix::Identity(4, 4);
  u(3, 3) = std::exp(Complex(0.0, phi));
  return u;
}

ComplexMatrix haar_random_unitary(int dim, Rng& rng) {
  if (dim < 1) throw DomainError("haar_random_unitary: dim must be >= 1");
  const double scale = 1.0 / std::sqrt(2.0);
  ComplexMatrix z(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      const double re = rng.normal();
      const double im = rng.normal();
      z(i, j) = scale * Complex(re, im);
    }
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix& r = qr.matrixQR();
  for (int j = 0; j < dim; ++j) {
    const Complex d = r(j, j);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(j) *= d / mag;
  }
  return q;
}

}  // namespace mubest
