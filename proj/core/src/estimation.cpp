#include "mubest/estimation.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <ostream>

#include "mubest/errors.hpp"

namespace mubest {

namespace {

void check_copies(int copies) {
  if (copies < 1 || copies > 3) throw DomainError("number of copies must be 1, 2 or 3");
}

long ipow(int base, int exp) {
  long r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

void check_effect(const ComplexMatrix& effect, int copies, int dim) {
  check_copies(copies);
  if (dim < 1) throw DomainError("dimension must be >= 1");
  const long n = ipow(dim, copies);
  if (effect.rows() != n || effect.cols() != n) {
    throw SizeError("effect must act on d^N = " + std::to_string(n) + " dimensions");
  }
}

QOperator finish_q(ComplexMatrix m, double scale) {
  m *= scale;
  ComplexMatrix h = 0.5 * (m + m.adjoint());
  const HermitianEigen eig = hermitian_eig(h);
  QOperator q;
  q.norm = eig.values(eig.values.size() - 1);
  q.matrix = std::move(h);
  return q;
}

double trace_product_real(const ComplexMatrix& a, const ComplexMatrix& b) {
  // tr(AB) for Hermitian A, B
  return (a.transpose().cwiseProduct(b)).sum().real();
}

}  // namespace

std::string to_string(DesignMode mode) { return mode == DesignMode::kIdeal ? "ideal" : "empirical"; }
std::string to_string(EstimatorSource source) { return source == EstimatorSource::kIdeal ? "ideal" : "empirical"; }

QOperator q_operator(const ComplexMatrix& effect, int copies, int dim) {
  check_effect(effect, copies, dim);
  const SymmetricProjector& p = cached_symmetric_projector({dim, copies + 1});
  return finish_q(partial_trace_of_product(p.matrix, effect, dim), static_cast<double>(factorial(copies + 1)));
}

ComplexMatrix empirical_symmetric_projector(const StateDesign& design, int t) {
  if (t < 1) throw DomainError("empirical_symmetric_projector: t must be >= 1");
  const long n = ipow(design.dim(), t);
  if (n > 1024) throw SizeError("empirical_symmetric_projector: d^t exceeds 1024");
  const auto k = static_cast<Eigen::Index>(design.size());
  ComplexMatrix powers(n, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    powers.col(j) = tensor_power(design.states()[static_cast<std::size_t>(j)].amplitudes(), t);
  }
  const double scale = static_cast<double>(binomial(design.dim() + t - 1, t)) / static_cast<double>(k);
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  out.selfadjointView<Eigen::Lower>().rankUpdate(powers, scale);
  return out.selfadjointView<Eigen::Lower>();
}

QOperator q_operator_empirical(const ComplexMatrix& effect, int copies, const StateDesign& design) {
  check_effect(effect, copies, design.dim());
  const ComplexMatrix p = empirical_symmetric_projector(design, copies + 1);
  return finish_q(partial_trace_of_product(p, effect, design.dim()), static_cast<double>(factorial(copies + 1)));
}

Estimator optimal_estimator(const QOperator& q, double degeneracy_tol) {
  if (q.matrix.size() == 0 || max_abs(q.matrix) == 0.0) {
    throw DomainError("optimal_estimator: Q is the zero operator");
  }
  const HermitianEigen eig = hermitian_eig(q.matrix);
  const Eigen::Index n = eig.values.size();
  const double top = eig.values(n - 1);
  if (top <= 0.0) throw DomainError("optimal_estimator: Q has no positive eigenvalue");
  const double cut = degeneracy_tol * top;
  Eigen::Index first = n - 1;
  while (first > 0 && top - eig.values(first - 1) <= cut) --first;
  const Eigen::Index rank = n - first;
  const auto support = eig.vectors.rightCols(rank);
  Estimator e;
  e.density = (support * support.adjoint()) / static_cast<double>(rank);
  e.support_dim = static_cast<int>(rank);
  e.gap = first > 0 ? top - eig.values(first - 1) : 0.0;
  return e;
}

struct FidelityModel::Cache {
  std::array<ComplexMatrix, 5> projectors;  // indexed by t, filled for t = 2..4
};

FidelityModel FidelityModel::ideal() { return FidelityModel{}; }

FidelityModel FidelityModel::empirical(const StateDesign& design, EstimatorSource source) {
  FidelityModel m;
  m.mode_ = DesignMode::kEmpirical;
  m.source_ = source;
  m.design_ = std::make_shared<const StateDesign>(design);
  auto cache = std::make_shared<Cache>();
  for (int t = 2; t <= 4; ++t) {
    if (ipow(design.dim(), t) <= 1024) cache->projectors[static_cast<std::size_t>(t)] = empirical_symmetric_projector(design, t);
  }
  m.cache_ = std::move(cache);
  return m;
}

QOperator FidelityModel::q(const ComplexMatrix& effect, int copies, int dim) const {
  if (mode_ == DesignMode::kIdeal) return q_operator(effect, copies, dim);
  if (dim != design_->dim()) throw SizeError("FidelityModel: design dimension differs from the effect's");
  check_effect(effect, copies, dim);
  const ComplexMatrix& p = cache_->projectors[static_cast<std::size_t>(copies + 1)];
  if (p.size() == 0) return q_operator_empirical(effect, copies, *design_);
  return finish_q(partial_trace_of_product(p, effect, dim), static_cast<double>(factorial(copies + 1)));
}

OutcomeResult FidelityModel::evaluate(const ComplexMatrix& effect, int copies, int dim, double degeneracy_tol) const {
  OutcomeResult r;
  const QOperator q_model = q(effect, copies, dim);
  r.q_norm = q_model.norm;
  if (mode_ == DesignMode::kEmpirical && source_ == EstimatorSource::kIdeal) {
    r.estimator = optimal_estimator(q_operator(effect, copies, dim), degeneracy_tol);
    r.contribution = trace_product_real(q_model.matrix, r.estimator.density);
  } else {
    r.estimator = optimal_estimator(q_model, degeneracy_tol);
    r.contribution = q_model.norm;
  }
  return r;
}

EstimationReport estimation_fidelity(std::span<const ProjectiveMeasurement> measurements, const FidelityModel& model,
                                     double degeneracy_tol) {
  const int copies = static_cast<int>(measurements.size());
  check_copies(copies);
  const int dim = measurements.front().dim();
  for (const auto& m : measurements) {
    if (m.dim() != dim) throw SizeError("estimation_fidelity: measurements differ in dimension");
    ComplexMatrix total = ComplexMatrix::Zero(dim, dim);
    for (const auto& e : m.effects()) total += e;
    if (max_abs_diff(total, ComplexMatrix::Identity(dim, dim)) > kUnitTol) {
      throw ValidationError("estimation_fidelity: measurement effects do not sum to the identity");
    }
  }

  EstimationReport report;
  report.copies = copies;
  report.design_mode = model.mode();
  if (model.mode() == DesignMode::kEmpirical && model.design()->strength() < copies + 1) {
    report.warnings.push_back("design strength " + std::to_string(model.design()->strength()) +
                              " is below N+1 = " + std::to_string(copies + 1));
  }

  std::vector<int> label(static_cast<std::size_t>(copies), 0);
  while (true) {
    ComplexMatrix effect = measurements[0].effect(label[0]);
    for (int c = 1; c < copies; ++c) effect = kron(effect, measurements[static_cast<std::size_t>(c)].effect(label[static_cast<std::size_t>(c)]));
    OutcomeResult r = model.evaluate(effect, copies, dim, degeneracy_tol);
    r.label = label;
    report.per_outcome.push_back(std::move(r));

    int c = copies - 1;
    while (c >= 0 && ++label[static_cast<std::size_t>(c)] == measurements[static_cast<std::size_t>(c)].outcomes()) {
      label[static_cast<std::size_t>(c)] = 0;
      --c;
    }
    if (c < 0) break;
  }

  std::vector<double> parts;
  parts.reserve(report.per_outcome.size());
  for (const auto& r : report.per_outcome) parts.push_back(r.contribution);
  std::sort(parts.begin(), parts.end());
  double sum = 0.0;
  for (double v : parts) sum += v;
  const double norm = static_cast<double>(factorial(copies + 1)) * static_cast<double>(binomial(dim + copies, copies + 1));
  report.fidelity = sum / norm;
  return report;
}

double triple_fidelity(const MubTriple& triple, const FidelityModel& model) {
  const auto ms = triple.measurements();
  return estimation_fidelity(ms, model).fidelity;
}

BasisPair basis_pair_from_string(const std::string& s) {
  if (s == "ab") return BasisPair::kAB;
  if (s == "ac") return BasisPair::kAC;
  if (s == "bc") return BasisPair::kBC;
  throw DomainError("unknown basis pair '" + s + "' (expected ab, ac or bc)");
}

std::string to_string(BasisPair pair) {
  switch (pair) {
    case BasisPair::kAB: return "ab";
    case BasisPair::kAC: return "ac";
    case BasisPair::kBC: return "bc";
  }
  return "ab";
}

std::vector<ProjectiveMeasurement> pair_measurements(const MubTriple& triple, BasisPair pair) {
  switch (pair) {
    case BasisPair::kAB: return {measurement_of(triple.basis_a), measurement_of(triple.basis_b)};
    case BasisPair::kAC: return {measurement_of(triple.basis_a), measurement_of(triple.basis_c)};
    case BasisPair::kBC: return {measurement_of(triple.basis_b), measurement_of(triple.basis_c)};
  }
  throw DomainError("unknown basis pair");
}

std::vector<ScanPoint> fidelity_scan(double x, std::span<const double> y_values, std::span<const double> z_values,
                                     const FidelityModel& model) {
  std::vector<ScanPoint> out;
  out.reserve(y_values.size() * z_values.size());
  for (double y : y_values) {
    for (double z : z_values) {
      out.push_back({x, y, z, triple_fidelity(mub_triple(x, y, z), model)});
    }
  }
  return out;
}

void write_scan_csv(std::ostream& out, std::span<const ScanPoint> points, std::span<const std::string> header_lines) {
  for (const auto& line : header_lines) out << "# " << line << '\n';
  out << "x,y,z,F\n";
  char buf[128];
  for (const auto& p : points) {
    std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%.12g\n", p.x, p.y, p.z, p.fidelity);
    out << buf;
  }
}

}  // namespace mubest
