#pragma once

#include <vector>

#include "mubest/random.hpp"
#include "mubest/tensor_algebra.hpp"

namespace mubest {

/// Columns form an orthonormal basis (<v_i|v_j> = δ_ij within 1e-10).
class OrthonormalBasis {
 public:
  explicit OrthonormalBasis(ComplexMatrix columns);
  static OrthonormalBasis computational(int dim);

  int dim() const { return static_cast<int>(columns_.rows()); }
  const ComplexMatrix& matrix() const { return columns_; }
  ComplexVector vector(int j) const { return columns_.col(j); }
  PureState state(int j) const { return PureState(columns_.col(j)); }

 private:
  ComplexMatrix columns_;
};

/// Rank-1 projective measurement {|v_j><v_j|}.
class ProjectiveMeasurement {
 public:
  /// Validates E² = E, E† = E for each effect and Σ E = I, all within 1e-10.
  explicit ProjectiveMeasurement(std::vector<ComplexMatrix> effects);

  int dim() const { return effects_.empty() ? 0 : static_cast<int>(effects_.front().rows()); }
  int outcomes() const { return static_cast<int>(effects_.size()); }
  const std::vector<ComplexMatrix>& effects() const { return effects_; }
  const ComplexMatrix& effect(int j) const { return effects_[static_cast<std::size_t>(j)]; }

  /// Born probabilities <ψ|E_j|ψ>.
  RealVector probabilities(const PureState& psi) const;

 private:
  std::vector<ComplexMatrix> effects_;
};

ProjectiveMeasurement measurement_of(const OrthonormalBasis& basis);

/// Parameters and bases of the triple (computational, H_B(x), H_C(y, z)) in dimension 4.
struct MubTriple {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  OrthonormalBasis basis_a;
  OrthonormalBasis basis_b;
  OrthonormalBasis basis_c;

  std::vector<ProjectiveMeasurement> measurements() const;
};

/// H_B(x) = ½ [[1,1,1,1],[1, i e^{ix}, -1, -i e^{ix}],[1,-1,1,-1],[1, -i e^{ix}, -1, i e^{ix}]]
ComplexMatrix hadamard_b(double x);
/// H_C(y,z) = ½ [[1,1,1,1],[-e^{iy}, e^{iz}, e^{iy}, -e^{iz}],[1,-1,1,-1],[e^{iy}, e^{iz}, -e^{iy}, -e^{iz}]]
ComplexMatrix hadamard_c(double y, double z);

/// Angles are reduced into [0, 2π). Basis vectors are the columns of the
/// Hadamard matrices with their printed phases; throws ValidationError if the
/// result is not mutually unbiased within 1e-10.
MubTriple mub_triple(double x, double y, double z);

/// max over the 48 cross pairs of ||<u|v>|² - 1/d|.
double unbiasedness_report(const MubTriple& triple);
double unbiasedness_deviation(const OrthonormalBasis& first, const OrthonormalBasis& second);

/// Applies u to every basis vector; u must be unitary within 1e-9.
MubTriple transform_triple(const MubTriple& triple, const ComplexMatrix& u);

/// diag(1, 1, 1, e^{iφ})
ComplexMatrix controlled_phase(double phi);

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the phases of
/// R's diagonal moved into Q.
ComplexMatrix haar_random_unitary(int dim, Rng& rng);

}  // namespace mubest
