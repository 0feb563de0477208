#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "mubest/clifford.hpp"
#include "mubest/tensor_algebra.hpp"

namespace mubest {

struct BlochVector {
  double r1 = 0.0;
  double r2 = 0.0;
  double r3 = 0.0;

  double norm() const;
  /// r1^4 + r2^4 + r3^4; equals 5/7 for fiducials whose Clifford orbit is a 4-design.
  double fourth_power_sum() const;
};

/// Sign choice in cos(2θ) = (α - 1 ± (2/√7)√(5 - 2α)) / (α + 1).
enum class Branch { kPlus, kMinus };

/// Spherical angles of a second-qubit fiducial Bloch vector, parametrised by
/// α ∈ [1/2, 1] through cos(4φ) = 4α - 3.
struct FiducialAngles {
  double alpha = 1.0;
  double theta = 0.0;
  double phi = 0.0;
  Branch branch = Branch::kPlus;

  /// (sinθ cosφ, sinθ sinφ, cosθ)
  BlochVector bloch() const;
};

/// Throws DomainError if α is outside [1/2, 1] or the chosen branch has no real θ.
FiducialAngles fiducial_angles(double alpha, Branch branch = Branch::kPlus);

/// Qubit state with <σ_k> = r_k, |0> amplitude real non-negative.
PureState bloch_to_state(const BlochVector& r);

/// Bloch vector of the reduced state of `qubit` (0 = leading factor) of a
/// two-qubit pure state, or of a single-qubit state when qubit == 0 and dim 2.
BlochVector reduced_bloch(const PureState& psi, int qubit);

/// (-√(1/2 - √(3/7)/2), 0, √(1/2 + √(3/7)/2)).
BlochVector fiducial_second_qubit_bloch();

/// |ψ(1/√3, 1/√3, 1/√3)> ⊗ |ψ(fiducial_second_qubit_bloch())>.
PureState fiducial_state();

enum class Provenance { kCliffordOrbit, kNumerical, kFile, kCustom };

std::string to_string(Provenance p);
Provenance provenance_from_string(const std::string& s);

using Metadata = std::map<std::string, std::string>;

/// Finite set of distinct (modulo phase) pure states of a common dimension.
class StateDesign {
 public:
  /// Validates dimensions, unit norms, and pairwise distinctness
  /// (|<ψ_i|ψ_j>| < 1 - 1e-8); throws ValidationError naming the offending index.
  StateDesign(int dim, int strength, std::vector<PureState> states, Provenance provenance,
              Metadata metadata = {});

  int dim() const { return dim_; }
  int strength() const { return strength_; }
  std::size_t size() const { return states_.size(); }
  const std::vector<PureState>& states() const { return states_; }
  Provenance provenance() const { return provenance_; }
  const Metadata& metadata() const { return metadata_; }

  /// d x K matrix whose columns are the states.
  ComplexMatrix columns() const;

  StateDesign with_metadata(const std::string& key, const std::string& value) const;

 private:
  int dim_;
  int strength_;
  std::vector<PureState> states_;
  Provenance provenance_;
  Metadata metadata_;
};

/// {U|ψ> : U ∈ group}, first representative of each phase class kept, in the
/// group's key order.
StateDesign orbit(const UnitaryGroup& group, const PureState& psi, int claimed_strength = 1,
                  Provenance provenance = Provenance::kCliffordOrbit);

/// The 960-state restricted-Clifford orbit of fiducial_state().
StateDesign clifford_design();

/// Φ_t = (1/K²) Σ_{j,k} |<ψ_j|ψ_k>|^{2t}.
double frame_potential(const StateDesign& design, int t);
double frame_potential(const ComplexMatrix& columns, int t);

/// Wirtinger gradient ∂Φ_t/∂<ψ_j| as a d x K matrix:
/// (2t/K²) Σ_k |<ψ_j|ψ_k>|^{2(t-1)} <ψ_k|ψ_j> |ψ_k>.
ComplexMatrix frame_potential_gradient(const ComplexMatrix& columns, int t);

/// Largest t' <= max_t for which Φ_{t'} = 1/D_{t'} within tol (0 if none).
int certified_strength(const StateDesign& design, int max_t, double tol = 1e-10);

struct MomentOperator {
  ComplexMatrix matrix;               // Σ_j (|ψ_j><ψ_j|)^{⊗t}
  RealVector symmetric_eigenvalues;   // spectrum restricted to the symmetric subspace
  double symmetric_ratio = 0.0;       // smallest / largest of the above
};

/// Requires d^t <= 1024.
MomentOperator moment_operator(const StateDesign& design, int t);

struct OptimizeOptions {
  int states = 200;        // K
  int dim = 4;             // d
  int strength = 4;        // t
  std::uint64_t seed = 1;
  long max_iters = 100000;
  double step = 1.0;       // initial step of the backtracking line search
  double target = 0.0287;  // stop once Φ_t <= target
  /// Called after every accepted step with (iteration, Φ_t).
  std::function<void(long, double)> observer;
};

/// Projected gradient descent on Φ_t over the product of unit spheres, from
/// Haar-random seeded initial states. Each step moves every state against its
/// tangential gradient and renormalises; the step is halved until Φ_t
/// decreases, and grown by 1.5x after an accepted step. Stops at the target,
/// after max_iters, or when no decrease is found above a step of 1e-18.
/// Metadata records seed, iterations, initial and final Φ_t.
/// Throws InfeasibleError when K < D_t.
StateDesign optimize_design(const OptimizeOptions& options);

/// K Haar-random states (normalised complex Gaussian vectors), columns of a d x K matrix.
ComplexMatrix haar_random_states(int dim, int count, std::uint64_t seed);

}  // namespace mubest
