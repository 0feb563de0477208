#include "mubest/simulation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>

#include "mubest/errors.hpp"
#include "mubest/random.hpp"

namespace mubest {

namespace {

constexpr double kProbabilityTol = 1e-9;

enum : std::uint64_t { kPhaseScanSeeds = 1, kRandomScanSeeds = 2 };

std::uint64_t bits(double v) { return std::bit_cast<std::uint64_t>(v); }

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  // 64-bit FNV-1a over the bytes of v
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xffU;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t triple_salt(const MubTriple& t) {
  return mix(mix(mix(0xcbf29ce484222325ULL, bits(t.x)), bits(t.y)), bits(t.z));
}

std::uint64_t derived_seed(std::uint64_t seed, std::uint64_t purpose, std::uint64_t index) {
  Rng rng(seed, {static_cast<std::uint64_t>(StreamTag::kUnitaries), purpose, index});
  return rng();
}

void parallel_for(int n, int threads, const std::function<void(int)>& body) {
  threads = std::clamp(threads, 1, std::max(1, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int i = w; i < n; i += threads) body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

// Branch-free inverse CDF: the number of cumulative bounds at or below u.
int sample_outcome(const double* cdf, int outcomes, double u) {
  int j = 0;
  for (int m = 0; m < outcomes - 1; ++m) j += static_cast<int>(u >= cdf[m]);
  return j;
}

double sample_std(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

// Fills per-block, per-state and overall fidelities from per-(state, block) sums.
void finish_report(SimReport& r, const std::vector<double>& state_block_sums) {
  const int k = r.states;
  const int b = r.config.blocks;
  const double m = r.config.repetitions_per_block;
  r.per_block_fidelities.assign(static_cast<std::size_t>(b), 0.0);
  r.per_state_fidelity.assign(static_cast<std::size_t>(k), 0.0);
  for (int blk = 0; blk < b; ++blk) {
    double sum = 0.0;
    for (int i = 0; i < k; ++i) sum += state_block_sums[static_cast<std::size_t>(i * b + blk)];
    r.per_block_fidelities[static_cast<std::size_t>(blk)] = sum / (static_cast<double>(k) * m);
  }
  for (int i = 0; i < k; ++i) {
    double sum = 0.0;
    for (int blk = 0; blk < b; ++blk) sum += state_block_sums[static_cast<std::size_t>(i * b + blk)];
    r.per_state_fidelity[static_cast<std::size_t>(i)] = sum / (m * b);
  }
  double total = 0.0;
  for (double f : r.per_block_fidelities) total += f;
  r.mean_fidelity = total / b;
  r.std = sample_std(r.per_block_fidelities);
}

double weighted_sum(const std::uint32_t* counts, const EstimatorTable& table, int state) {
  double s = 0.0;
  for (int o = 0; o < table.outcome_tuples(); ++o) {
    if (counts[o] != 0) s += static_cast<double>(counts[o]) * table.fidelity(state, o);
  }
  return s;
}

}  // namespace

void SimConfig::validate() const {
  if (repetitions_per_block < 1) throw DomainError("SimConfig: repetitions per block must be >= 1");
  if (blocks < 1) throw DomainError("SimConfig: blocks must be >= 1");
  if (threads < 1) throw DomainError("SimConfig: threads must be >= 1");
}

EstimatorTable build_estimator_table(std::span<const ProjectiveMeasurement> measurements, const StateDesign& design,
                                     const FidelityModel& model) {
  const int copies = static_cast<int>(measurements.size());
  if (copies < 1 || copies > 3) throw DomainError("build_estimator_table: need 1 to 3 measurements");
  const int d = design.dim();
  for (const auto& m : measurements) {
    if (m.dim() != d || m.outcomes() != d) throw SizeError("build_estimator_table: measurement does not match the design dimension");
  }
  const int k = static_cast<int>(design.size());

  EstimatorTable table;
  table.copies = copies;
  table.outcomes_per_copy = d;
  for (const auto& m : measurements) {
    RealVector p(static_cast<Eigen::Index>(k) * d);
    for (int i = 0; i < k; ++i) {
      const RealVector pi = m.probabilities(design.states()[static_cast<std::size_t>(i)]);
      if (std::abs(pi.sum() - 1.0) > kProbabilityTol || pi.minCoeff() < -kProbabilityTol) {
        throw ValidationError("measurement probabilities for state " + std::to_string(i) + " are not a distribution");
      }
      p.segment(static_cast<Eigen::Index>(i) * d, d) = pi.cwiseMax(0.0);
    }
    table.probabilities.push_back(std::move(p));
  }

  const EstimationReport report = estimation_fidelity(measurements, model);
  const ComplexMatrix states = design.columns();
  table.fidelity.resize(k, static_cast<Eigen::Index>(report.per_outcome.size()));
  for (std::size_t o = 0; o < report.per_outcome.size(); ++o) {
    const ComplexMatrix& rho = report.per_outcome[o].estimator.density;
    const ComplexMatrix r_psi = rho * states;
    table.fidelity.col(static_cast<Eigen::Index>(o)) = states.cwiseProduct(r_psi.conjugate()).colwise().sum().real().transpose();
  }
  return table;
}

double expected_fidelity(const EstimatorTable& table) {
  const int d = table.outcomes_per_copy;
  double total = 0.0;
  for (int i = 0; i < table.states(); ++i) {
    double s = 0.0;
    for (int o = 0; o < table.outcome_tuples(); ++o) {
      double p = 1.0;
      int rest = o;
      for (int c = table.copies - 1; c >= 0; --c) {
        p *= table.probability(c, i, rest % d);
        rest /= d;
      }
      s += p * table.fidelity(i, o);
    }
    total += s;
  }
  return total / table.states();
}

int SimReport::outcome_tuples() const {
  int n = 1;
  for (int c = 0; c < copies; ++c) n *= outcomes_per_copy;
  return n;
}

std::uint32_t SimReport::count(int block, int state, int outcome) const {
  if (!has_counts()) throw DataError("SimReport: counts were not recorded");
  return counts[(static_cast<std::size_t>(block) * static_cast<std::size_t>(states) + static_cast<std::size_t>(state)) *
                    static_cast<std::size_t>(outcome_tuples()) +
                static_cast<std::size_t>(outcome)];
}

SimReport simulate_protocol(const MubTriple& triple, const StateDesign& design, const SimConfig& cfg,
                            const FidelityModel& estimator_model) {
  cfg.validate();
  const auto measurements = triple.measurements();
  const EstimatorTable table = build_estimator_table(measurements, design, estimator_model);

  SimReport r;
  r.config = cfg;
  r.x = triple.x;
  r.y = triple.y;
  r.z = triple.z;
  r.states = table.states();
  r.copies = table.copies;
  r.outcomes_per_copy = table.outcomes_per_copy;
  const int k = r.states;
  const int blocks = cfg.blocks;
  const int d = r.outcomes_per_copy;
  const int tuples = r.outcome_tuples();
  if (cfg.record_counts) r.counts.assign(static_cast<std::size_t>(blocks) * k * tuples, 0U);

  const std::uint64_t salt = triple_salt(triple);
  const std::uint64_t salt_a = cfg.share_ab_outcomes ? 0 : salt;
  const std::uint64_t salt_b = cfg.share_ab_outcomes ? bits(triple.x) : salt;
  const std::uint64_t tags[3] = {static_cast<std::uint64_t>(StreamTag::kMeasurementA),
                                 static_cast<std::uint64_t>(StreamTag::kMeasurementB),
                                 static_cast<std::uint64_t>(StreamTag::kMeasurementC)};
  const std::uint64_t salts[3] = {salt_a, salt_b, salt};

  std::vector<double> sums(static_cast<std::size_t>(k) * blocks, 0.0);
  parallel_for(k, cfg.threads, [&](int i) {
    std::vector<double> cdf(static_cast<std::size_t>(3 * d));
    for (int c = 0; c < 3; ++c) {
      double acc = 0.0;
      for (int j = 0; j < d; ++j) {
        acc += table.probability(c, i, j);
        cdf[static_cast<std::size_t>(c * d + j)] = acc;
      }
    }
    std::vector<std::uint32_t> local(static_cast<std::size_t>(tuples));
    std::vector<int> outcomes(static_cast<std::size_t>(cfg.repetitions_per_block));
    for (int b = 0; b < blocks; ++b) {
      std::fill(outcomes.begin(), outcomes.end(), 0);
      for (int c = 0; c < 3; ++c) {
        Rng rng(cfg.seed, {tags[c], static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(b), salts[c]});
        const double* cdf_c = cdf.data() + c * d;
        for (auto& o : outcomes) o = o * d + sample_outcome(cdf_c, d, rng.uniform());
      }
      std::fill(local.begin(), local.end(), 0U);
      for (int o : outcomes) ++local[static_cast<std::size_t>(o)];
      sums[static_cast<std::size_t>(i * blocks + b)] = weighted_sum(local.data(), table, i);
      if (cfg.record_counts) {
        std::copy(local.begin(), local.end(),
                  r.counts.begin() + static_cast<std::ptrdiff_t>((static_cast<std::size_t>(b) * k + i) * tuples));
      }
    }
  });
  finish_report(r, sums);
  return r;
}

SimReport reprocess_two_copy(const SimReport& report, const MubTriple& triple, BasisPair pair,
                             const StateDesign& design, const FidelityModel& estimator_model) {
  if (!report.has_counts()) throw DataError("reprocess_two_copy: report has no recorded counts");
  if (report.copies != 3) throw DataError("reprocess_two_copy: report does not hold three-copy counts");
  if (static_cast<int>(design.size()) != report.states) throw DataError("reprocess_two_copy: design size differs from the report");

  const auto measurements = pair_measurements(triple, pair);
  const EstimatorTable table = build_estimator_table(measurements, design, estimator_model);
  const int d = report.outcomes_per_copy;
  int keep_first = 0;
  int keep_second = 1;
  if (pair == BasisPair::kAC) keep_second = 2;
  if (pair == BasisPair::kBC) {
    keep_first = 1;
    keep_second = 2;
  }

  SimReport r;
  r.config = report.config;
  r.x = report.x;
  r.y = report.y;
  r.z = report.z;
  r.states = report.states;
  r.copies = 2;
  r.outcomes_per_copy = d;
  const int tuples = d * d;
  const int blocks = report.config.blocks;
  r.counts.assign(static_cast<std::size_t>(blocks) * r.states * tuples, 0U);
  std::vector<double> sums(static_cast<std::size_t>(r.states) * blocks, 0.0);
  for (int b = 0; b < blocks; ++b) {
    for (int i = 0; i < r.states; ++i) {
      std::uint32_t* local = r.counts.data() + (static_cast<std::size_t>(b) * r.states + i) * tuples;
      for (int o = 0; o < report.outcome_tuples(); ++o) {
        const int digits[3] = {o / (d * d), (o / d) % d, o % d};
        local[digits[keep_first] * d + digits[keep_second]] += report.count(b, i, o);
      }
      sums[static_cast<std::size_t>(i * blocks + b)] = weighted_sum(local, table, i);
    }
  }
  finish_report(r, sums);
  if (!report.config.record_counts) r.counts.clear();
  return r;
}

DeviationSummary summarize(std::span<const double> values, double reference) {
  if (values.empty()) throw DomainError("summarize: no values");
  DeviationSummary s;
  s.samples = values.size();
  s.reference = reference;
  s.maximal = *std::max_element(values.begin(), values.end());
  s.minimal = *std::min_element(values.begin(), values.end());
  double total = 0.0;
  for (double v : values) {
    total += v;
    s.max_deviation = std::max(s.max_deviation, std::abs(v - reference));
  }
  s.average = std::clamp(total / static_cast<double>(values.size()), s.minimal, s.maximal);
  s.std = sample_std(values);
  return s;
}

std::vector<PhaseScanRow> equivalence_scan_phase(std::span<const double> phi_grid, const MubTriple& base,
                                                 const StateDesign& design, const SimConfig& cfg,
                                                 const FidelityModel& exact_model, bool simulate) {
  std::vector<PhaseScanRow> rows;
  rows.reserve(phi_grid.size());
  for (std::size_t n = 0; n < phi_grid.size(); ++n) {
    const MubTriple t = transform_triple(base, controlled_phase(phi_grid[n]));
    PhaseScanRow row;
    row.phi = phi_grid[n];
    row.exact = triple_fidelity(t, exact_model);
    if (simulate) {
      SimConfig c = cfg;
      c.seed = derived_seed(cfg.seed, kPhaseScanSeeds, n);
      c.record_counts = false;
      const SimReport rep = simulate_protocol(t, design, c);
      row.simulated = rep.mean_fidelity;
      row.simulated_std = rep.std;
    }
    rows.push_back(row);
  }
  return rows;
}

EquivalenceSummary equivalence_scan_random(int n_unitaries, const MubTriple& base, const StateDesign& design,
                                           const SimConfig& cfg, const FidelityModel& exact_model, bool simulate) {
  if (n_unitaries < 1) throw DomainError("equivalence_scan_random: need at least one unitary");
  const double reference = triple_fidelity(base, exact_model);
  Rng stream(cfg.seed, {static_cast<std::uint64_t>(StreamTag::kUnitaries)});
  EquivalenceSummary out;
  for (int n = 0; n < n_unitaries; ++n) {
    const MubTriple t = transform_triple(base, haar_random_unitary(base.basis_a.dim(), stream));
    out.exact_values.push_back(triple_fidelity(t, exact_model));
    if (simulate) {
      SimConfig c = cfg;
      c.seed = derived_seed(cfg.seed, kRandomScanSeeds, static_cast<std::uint64_t>(n));
      c.record_counts = false;
      out.simulated_values.push_back(simulate_protocol(t, design, c).mean_fidelity);
    }
  }
  out.exact = summarize(out.exact_values, reference);
  if (simulate) out.simulated = summarize(out.simulated_values, reference);
  return out;
}

double subset_fidelity(const SimReport& report, std::span<const int> subset) {
  if (subset.empty()) throw DomainError("subset_fidelity: empty subset");
  std::vector<int> sorted(subset.begin(), subset.end());
  std::sort(sorted.begin(), sorted.end());
  double total = 0.0;
  for (int i : sorted) {
    if (i < 0 || i >= report.states) throw DomainError("subset_fidelity: state index out of range");
    total += report.per_state_fidelity[static_cast<std::size_t>(i)];
  }
  return total / static_cast<double>(sorted.size());
}

std::vector<SubsetRow> random_subset_analysis(const SimReport& report, std::span<const int> subset_sizes, int trials,
                                              std::uint64_t seed) {
  if (trials < 1) throw DomainError("random_subset_analysis: trials must be >= 1");
  std::vector<int> all(static_cast<std::size_t>(report.states));
  for (int i = 0; i < report.states; ++i) all[static_cast<std::size_t>(i)] = i;
  std::vector<SubsetRow> rows;
  for (int size : subset_sizes) {
    if (size < 1 || size > report.states) {
      throw DomainError("random_subset_analysis: subset size " + std::to_string(size) + " outside [1, " +
                        std::to_string(report.states) + "]");
    }
    Rng rng(seed, {static_cast<std::uint64_t>(StreamTag::kSubsets), static_cast<std::uint64_t>(size)});
    std::vector<double> values;
    std::vector<int> pick(static_cast<std::size_t>(size));
    for (int t = 0; t < trials; ++t) {
      std::sample(all.begin(), all.end(), pick.begin(), size, rng);
      values.push_back(subset_fidelity(report, pick));
    }
    SubsetRow row;
    row.size = size;
    row.trials = trials;
    double offset = 0.0;
    for (double v : values) offset += v - values.front();
    row.mean = values.front() + offset / trials;
    row.std = sample_std(values);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace mubest
