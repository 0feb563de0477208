#include "mubest/designs.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <utility>

#include "mubest/errors.hpp"
#include "mubest/random.hpp"

namespace mubest {

namespace {

constexpr double kDistinctTol = 1e-8;
constexpr Eigen::Index kGramBlock = 256;

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

double int_power(double x, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

struct OverlapMax {
  double value = 0.0;
  Eigen::Index i = -1;
  Eigen::Index j = -1;
};

// Largest |<ψ_i|ψ_j>| over i < j, computed in row blocks of the Gram matrix.
OverlapMax max_offdiagonal_overlap(const ComplexMatrix& s) {
  OverlapMax best;
  const Eigen::Index k = s.cols();
  for (Eigen::Index start = 0; start < k; start += kGramBlock) {
    const Eigen::Index rows = std::min(kGramBlock, k - start);
    const ComplexMatrix gram = s.middleCols(start, rows).adjoint() * s;
    for (Eigen::Index r = 0; r < rows; ++r) {
      const Eigen::Index i = start + r;
      for (Eigen::Index j = i + 1; j < k; ++j) {
        const double a = std::abs(gram(r, j));
        if (a > best.value) best = {a, i, j};
      }
    }
  }
  return best;
}

void normalise_columns(ComplexMatrix& s) {
  for (Eigen::Index j = 0; j < s.cols(); ++j) s.col(j).normalize();
}

}  // namespace

double BlochVector::norm() const { return std::sqrt(r1 * r1 + r2 * r2 + r3 * r3); }

double BlochVector::fourth_power_sum() const { return int_power(r1, 4) + int_power(r2, 4) + int_power(r3, 4); }

BlochVector FiducialAngles::bloch() const {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

FiducialAngles fiducial_angles(double alpha, Branch branch) {
  if (!(alpha >= 0.5 && alpha <= 1.0)) throw DomainError("fiducial_angles: alpha must lie in [1/2, 1]");
  const double sign = branch == Branch::kPlus ? 1.0 : -1.0;
  const double cos2theta = (alpha - 1.0 + sign * (2.0 / std::sqrt(7.0)) * std::sqrt(5.0 - 2.0 * alpha)) / (alpha + 1.0);
  if (std::abs(cos2theta) > 1.0 + 1e-12) {
    throw DomainError("fiducial_angles: no real theta on this branch for alpha = " + format_double(alpha));
  }
  FiducialAngles a;
  a.alpha = alpha;
  a.branch = branch;
  a.phi = 0.25 * std::acos(std::clamp(4.0 * alpha - 3.0, -1.0, 1.0));
  a.theta = 0.5 * std::acos(std::clamp(cos2theta, -1.0, 1.0));
  return a;
}

PureState bloch_to_state(const BlochVector& r) {
  if (std::abs(r.norm() - 1.0) > kUnitTol) throw DomainError("bloch_to_state: Bloch vector must have unit norm");
  const double a = std::sqrt(std::max(0.0, (1.0 + r.r3) / 2.0));
  ComplexVector v(2);
  v(0) = a;
  v(1) = a > 1e-12 ? Complex(r.r1, r.r2) / (2.0 * a) : Complex(1.0, 0.0);
  return PureState::normalized(std::move(v));
}

BlochVector reduced_bloch(const PureState& psi, int qubit) {
  Eigen::Matrix2cd rho;
  if (psi.dim() == 2 && qubit == 0) {
    rho = psi.amplitudes() * psi.amplitudes().adjoint();
  } else if (psi.dim() == 4 && (qubit == 0 || qubit == 1)) {
    Eigen::Matrix2cd m;
    m << psi[0], psi[1], psi[2], psi[3];  // m(a, b) = amplitude of |a b>
    rho = qubit == 0 ? Eigen::Matrix2cd(m * m.adjoint()) : Eigen::Matrix2cd(m.transpose() * m.conjugate());
  } else {
    throw SizeError("reduced_bloch: expected a one- or two-qubit state");
  }
  return {2.0 * rho(0, 1).real(), -2.0 * rho(0, 1).imag(), (rho(0, 0) - rho(1, 1)).real()};
}

BlochVector fiducial_second_qubit_bloch() {
  const double c = std::sqrt(3.0 / 7.0);
  return {-std::sqrt(0.5 - 0.5 * c), 0.0, std::sqrt(0.5 + 0.5 * c)};
}

PureState fiducial_state() {
  const double s = 1.0 / std::sqrt(3.0);
  const PureState first = bloch_to_state({s, s, s});
  const PureState second = bloch_to_state(fiducial_second_qubit_bloch());
  return PureState::normalized(kron(first.amplitudes(), second.amplitudes()));
}

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::kCliffordOrbit: return "clifford_orbit";
    case Provenance::kNumerical: return "numerical";
    case Provenance::kFile: return "file";
    case Provenance::kCustom: return "custom";
  }
  return "custom";
}

Provenance provenance_from_string(const std::string& s) {
  if (s == "clifford_orbit") return Provenance::kCliffordOrbit;
  if (s == "numerical") return Provenance::kNumerical;
  if (s == "file") return Provenance::kFile;
  if (s == "custom") return Provenance::kCustom;
  throw ParseError("unknown provenance '" + s + "'");
}

StateDesign::StateDesign(int dim, int strength, std::vector<PureState> states, Provenance provenance,
                         Metadata metadata)
    : dim_(dim), strength_(strength), states_(std::move(states)), provenance_(provenance),
      metadata_(std::move(metadata)) {
  if (dim_ < 1) throw ValidationError("StateDesign: dimension must be positive");
  if (strength_ < 0) throw ValidationError("StateDesign: strength must be non-negative");
  for (std::size_t i = 0; i < states_.size(); ++i) {
    if (states_[i].dim() != dim_) {
      throw ValidationError("StateDesign: state " + std::to_string(i) + " has dimension " +
                            std::to_string(states_[i].dim()) + ", expected " + std::to_string(dim_));
    }
  }
  if (states_.size() > 1) {
    const OverlapMax worst = max_offdiagonal_overlap(columns());
    if (worst.value >= 1.0 - kDistinctTol) {
      throw ValidationError("StateDesign: states " + std::to_string(worst.i) + " and " + std::to_string(worst.j) +
                            " coincide up to a global phase");
    }
  }
}

ComplexMatrix StateDesign::columns() const {
  ComplexMatrix s(dim_, static_cast<Eigen::Index>(states_.size()));
  for (std::size_t j = 0; j < states_.size(); ++j) s.col(static_cast<Eigen::Index>(j)) = states_[j].amplitudes();
  return s;
}

StateDesign StateDesign::with_metadata(const std::string& key, const std::string& value) const {
  StateDesign copy = *this;
  copy.metadata_[key] = value;
  return copy;
}

StateDesign orbit(const UnitaryGroup& group, const PureState& psi, int claimed_strength, Provenance provenance) {
  if (psi.dim() != group.dim()) throw SizeError("orbit: state dimension differs from group");
  const Eigen::Index d = psi.dim();
  ComplexMatrix found(d, static_cast<Eigen::Index>(group.order()));
  Eigen::Index count = 0;
  std::vector<PureState> states;
  for (const auto& element : group.elements()) {
    const ComplexVector v = element.matrix() * psi.amplitudes();
    if (count > 0) {
      const double best = (found.leftCols(count).adjoint() * v).cwiseAbs().maxCoeff();
      if (best >= 1.0 - kDistinctTol) continue;
    }
    found.col(count++) = v;
    states.push_back(PureState::normalized(v));
  }
  Metadata meta{{"group_order", std::to_string(group.order())}};
  return StateDesign(static_cast<int>(d), claimed_strength, std::move(states), provenance, std::move(meta));
}

StateDesign clifford_design() {
  return orbit(restricted_clifford_group(), fiducial_state(), 4, Provenance::kCliffordOrbit)
      .with_metadata("group", "restricted_clifford");
}

double frame_potential(const ComplexMatrix& s, int t) {
  if (t < 1) throw DomainError("frame_potential: t must be >= 1");
  const Eigen::Index k = s.cols();
  if (k == 0) throw DomainError("frame_potential: empty design");
  double total = 0.0;
  for (Eigen::Index start = 0; start < k; start += kGramBlock) {
    const Eigen::Index rows = std::min(kGramBlock, k - start);
    const ComplexMatrix gram = s.middleCols(start, rows).adjoint() * s;
    for (Eigen::Index r = 0; r < rows; ++r) {
      double row_sum = 0.0;
      for (Eigen::Index j = 0; j < k; ++j) row_sum += int_power(std::norm(gram(r, j)), t);
      total += row_sum;
    }
  }
  const auto kk = static_cast<double>(k);
  return total / (kk * kk);
}

double frame_potential(const StateDesign& design, int t) {
  if (design.size() == 0) throw DomainError("frame_potential: empty design");
  return frame_potential(design.columns(), t);
}

ComplexMatrix frame_potential_gradient(const ComplexMatrix& s, int t) {
  if (t < 1) throw DomainError("frame_potential_gradient: t must be >= 1");
  const Eigen::Index k = s.cols();
  if (k == 0) throw DomainError("frame_potential_gradient: empty design");
  const ComplexMatrix gram = s.adjoint() * s;  // gram(j, k) = <ψ_j|ψ_k>
  ComplexMatrix weights(k, k);                 // weights(j, k) = |g|^{2(t-1)} <ψ_k|ψ_j>
  for (Eigen::Index j = 0; j < k; ++j) {
    for (Eigen::Index c = 0; c < k; ++c) {
      const Complex g = gram(j, c);
      weights(j, c) = int_power(std::norm(g), t - 1) * std::conj(g);
    }
  }
  const auto kk = static_cast<double>(k);
  return (2.0 * t / (kk * kk)) * (s * weights.transpose());
}

int certified_strength(const StateDesign& design, int max_t, double tol) {
  int strength = 0;
  for (int t = 1; t <= max_t; ++t) {
    const double bound = 1.0 / static_cast<double>(binomial(design.dim() + t - 1, t));
    if (std::abs(frame_potential(design, t) - bound) > tol) break;
    strength = t;
  }
  return strength;
}

MomentOperator moment_operator(const StateDesign& design, int t) {
  if (t < 1) throw DomainError("moment_operator: t must be >= 1");
  const TensorSpace space{design.dim(), t};
  if (space.dimension() > 1024) throw SizeError("moment_operator: d^t exceeds 1024");
  if (design.size() == 0) throw DomainError("moment_operator: empty design");

  const auto n = static_cast<Eigen::Index>(space.dimension());
  ComplexMatrix powers(n, static_cast<Eigen::Index>(design.size()));
  for (std::size_t j = 0; j < design.size(); ++j) {
    powers.col(static_cast<Eigen::Index>(j)) = tensor_power(design.states()[j].amplitudes(), t);
  }

  MomentOperator out;
  out.matrix = powers * powers.adjoint();
  const ComplexMatrix basis = symmetric_subspace_basis(space);
  const ComplexMatrix reduced = basis.adjoint() * powers;
  const HermitianEigen eig = hermitian_eig(reduced * reduced.adjoint());
  out.symmetric_eigenvalues = eig.values;
  const double largest = eig.values(eig.values.size() - 1);
  out.symmetric_ratio = largest > 0.0 ? eig.values(0) / largest : 0.0;
  return out;
}

ComplexMatrix haar_random_states(int dim, int count, std::uint64_t seed) {
  if (dim < 1 || count < 0) throw DomainError("haar_random_states: invalid shape");
  Rng rng(seed, {static_cast<std::uint64_t>(StreamTag::kDesignInit)});
  ComplexMatrix s(dim, count);
  for (int j = 0; j < count; ++j) {
    for (int i = 0; i < dim; ++i) {
      const double re = rng.normal();
      const double im = rng.normal();
      s(i, j) = Complex(re, im);
    }
  }
  normalise_columns(s);
  return s;
}

StateDesign optimize_design(const OptimizeOptions& options) {
  const int k = options.states;
  const int d = options.dim;
  const int t = options.strength;
  if (d < 1 || t < 1 || k < 1) throw DomainError("optimize_design: K, d, t must be positive");
  if (options.max_iters < 1) throw DomainError("optimize_design: max_iters must be >= 1");
  if (!(options.step > 0.0)) throw DomainError("optimize_design: step must be positive");
  const long bound_dim = binomial(d + t - 1, t);
  if (k < bound_dim) {
    throw InfeasibleError("optimize_design: K = " + std::to_string(k) + " is below D_t = " +
                          std::to_string(bound_dim) + "; the frame-potential bound cannot be reached");
  }

  ComplexMatrix s = haar_random_states(d, k, options.seed);
  double phi = frame_potential(s, t);
  const double initial_phi = phi;
  double step = options.step;
  long iterations = 0;

  while (iterations < options.max_iters && phi > options.target) {
    ComplexMatrix grad = frame_potential_gradient(s, t);
    for (int j = 0; j < k; ++j) {
      const double radial = s.col(j).dot(grad.col(j)).real();
      grad.col(j) -= radial * s.col(j);
    }

    bool accepted = false;
    while (step >= 1e-18) {
      ComplexMatrix trial = s - step * grad;
      normalise_columns(trial);
      const double trial_phi = frame_potential(trial, t);
      if (trial_phi < phi) {
        s = std::move(trial);
        phi = trial_phi;
        step *= 1.5;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    ++iterations;
    if (options.observer) options.observer(iterations, phi);
  }

  std::vector<PureState> states;
  states.reserve(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) states.push_back(PureState::normalized(s.col(j)));
  Metadata meta{{"seed", std::to_string(options.seed)},
                {"iterations", std::to_string(iterations)},
                {"initial_phi", format_double(initial_phi)},
                {"final_phi", format_double(phi)},
                {"target", format_double(options.target)},
                {"reached_target", phi <= options.target ? "true" : "false"}};
  return StateDesign(d, t, std::move(states), Provenance::kNumerical, std::move(meta));
}

}  // namespace mubest
