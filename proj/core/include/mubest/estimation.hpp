#pragma once

#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "mubest/designs.hpp"
#include "mubest/mub.hpp"
#include "mubest/tensor_algebra.hpp"

namespace mubest {

using OutcomeLabel = std::vector<int>;

/// Q(A) = (N+1)! tr_{1..N}[P_{N+1} (A ⊗ 1)], or the same with P replaced by a
/// design's moment operator.
struct QOperator {
  ComplexMatrix matrix;
  OutcomeLabel outcome_label;
  double norm = 0.0;  // largest eigenvalue
};

struct Estimator {
  ComplexMatrix density;
  int support_dim = 0;
  double gap = 0.0;  // distance from the top eigenvalue to the next distinct one (0 if none)
};

enum class DesignMode { kIdeal, kEmpirical };

/// Which Q supplies the estimator in empirical mode: the design's own Q′
/// (optimal for the design) or the ideal Q (the standard estimator).
enum class EstimatorSource { kIdeal, kEmpirical };

std::string to_string(DesignMode mode);
std::string to_string(EstimatorSource source);

struct OutcomeResult {
  OutcomeLabel label;
  double q_norm = 0.0;        // ‖Q‖ of the operator the fidelity is evaluated against
  double contribution = 0.0;  // tr(Q ρ̂), equal to q_norm unless estimator_source = ideal
  Estimator estimator;
};

struct EstimationReport {
  double fidelity = 0.0;
  std::vector<OutcomeResult> per_outcome;  // outcome tuples in lexicographic order
  int copies = 0;
  DesignMode design_mode = DesignMode::kIdeal;
  std::vector<std::string> warnings;
};

/// Ideal Q operator. `effect` acts on (C^d)^{⊗N}, N in {1, 2, 3}.
QOperator q_operator(const ComplexMatrix& effect, int copies, int dim);

/// (D_t / K) Σ_j (|ψ_j><ψ_j|)^{⊗t}.
ComplexMatrix empirical_symmetric_projector(const StateDesign& design, int t);

/// Q′: as q_operator with P_{N+1} replaced by the design's empirical projector.
QOperator q_operator_empirical(const ComplexMatrix& effect, int copies, const StateDesign& design);

inline constexpr double kDefaultDegeneracyTol = 1e-9;

/// Uniform mixture over the eigenvectors whose eigenvalues lie within
/// degeneracy_tol * ‖Q‖ of the largest. Throws DomainError for Q = 0.
Estimator optimal_estimator(const QOperator& q, double degeneracy_tol = kDefaultDegeneracyTol);

/// Chooses between ideal and design-based Q operators. Empirical projectors for
/// t = 2..4 are built once per model and shared between copies of it.
class FidelityModel {
 public:
  static FidelityModel ideal();
  static FidelityModel empirical(const StateDesign& design, EstimatorSource source = EstimatorSource::kEmpirical);

  DesignMode mode() const { return mode_; }
  EstimatorSource source() const { return source_; }
  const StateDesign* design() const { return design_.get(); }

  /// Q for the model's design mode.
  QOperator q(const ComplexMatrix& effect, int copies, int dim) const;

  /// Estimator and tr(Q ρ̂) for one outcome effect.
  OutcomeResult evaluate(const ComplexMatrix& effect, int copies, int dim,
                         double degeneracy_tol = kDefaultDegeneracyTol) const;

 private:
  struct Cache;
  DesignMode mode_ = DesignMode::kIdeal;
  EstimatorSource source_ = EstimatorSource::kEmpirical;
  std::shared_ptr<const StateDesign> design_;
  std::shared_ptr<const Cache> cache_;
};

/// N-copy estimation fidelity of a product of projective measurements, one per
/// copy: Σ over all outcome tuples of tr(Q ρ̂) / ((N+1)! D_{N+1}). Contributions
/// are summed in ascending order so that relabelling outcomes cannot change the
/// result.
EstimationReport estimation_fidelity(std::span<const ProjectiveMeasurement> measurements,
                                     const FidelityModel& model = FidelityModel::ideal(),
                                     double degeneracy_tol = kDefaultDegeneracyTol);

/// Three-copy fidelity of a MUB triple.
double triple_fidelity(const MubTriple& triple, const FidelityModel& model = FidelityModel::ideal());

/// Which two bases of a triple form a two-copy measurement.
enum class BasisPair { kAB, kAC, kBC };
BasisPair basis_pair_from_string(const std::string& s);
std::string to_string(BasisPair pair);
std::vector<ProjectiveMeasurement> pair_measurements(const MubTriple& triple, BasisPair pair);

struct ScanPoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double fidelity = 0.0;
};

/// F for every (y, z) in y_values x z_values at fixed x; y outer, z inner.
std::vector<ScanPoint> fidelity_scan(double x, std::span<const double> y_values, std::span<const double> z_values,
                                     const FidelityModel& model = FidelityModel::ideal());

/// Columns x,y,z,F with 12 significant digits; each header line is written as "# line".
void write_scan_csv(std::ostream& out, std::span<const ScanPoint> points,
                    std::span<const std::string> header_lines = {});

}  // namespace mubest
