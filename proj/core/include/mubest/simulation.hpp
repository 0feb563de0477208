#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mubest/designs.hpp"
#include "mubest/estimation.hpp"
#include "mubest/mub.hpp"

namespace mubest {

struct SimConfig {
  std::uint64_t seed = 1;
  int repetitions_per_block = 10000;  // M_block
  int blocks = 10;                    // B
  /// Draw the A and B outcomes from streams that depend only on (state, block)
  /// and x, so triples sharing those bases share those outcomes.
  bool share_ab_outcomes = true;
  int threads = 1;
  bool record_counts = true;

  void validate() const;
};

/// Per-state Born probabilities and estimator fidelities for one product
/// measurement: fidelity(i, o) = <ψ_i| ρ̂_o |ψ_i>, with o the outcome tuple index
/// (first copy most significant).
struct EstimatorTable {
  int copies = 0;
  int outcomes_per_copy = 0;
  std::vector<RealVector> probabilities;  // per copy: K x d, flattened row-major per state
  Eigen::MatrixXd fidelity;              // K x d^N

  int states() const { return static_cast<int>(fidelity.rows()); }
  int outcome_tuples() const { return static_cast<int>(fidelity.cols()); }
  double probability(int copy, int state, int outcome) const {
    return probabilities[static_cast<std::size_t>(copy)](state * outcomes_per_copy + outcome);
  }
};

/// Estimators come from `model` (ideal Q by default). Throws ValidationError
/// if some state's outcome probabilities do not sum to 1 within 1e-9.
EstimatorTable build_estimator_table(std::span<const ProjectiveMeasurement> measurements, const StateDesign& design,
                                     const FidelityModel& model = FidelityModel::ideal());

/// Σ_i Σ_o p_i(o) fidelity(i, o) / K: the infinite-sample limit of the simulation.
double expected_fidelity(const EstimatorTable& table);

struct SimReport {
  SimConfig config;
  double x = 0.0, y = 0.0, z = 0.0;
  int states = 0;
  int copies = 0;
  int outcomes_per_copy = 0;
  double mean_fidelity = 0.0;
  std::vector<double> per_block_fidelities;
  double std = 0.0;                      // sample standard deviation over blocks
  std::vector<double> per_state_fidelity;  // mean of tr(ρ_i ρ̂) over all M_block * B repetitions
  /// counts[(block * states + state) * outcome_tuples + o]; empty unless recorded.
  std::vector<std::uint32_t> counts;

  int outcome_tuples() const;
  std::uint32_t count(int block, int state, int outcome) const;
  bool has_counts() const { return !counts.empty(); }
};

/// Samples outcomes per copy by inverse CDF from per-(state, block, copy)
/// substreams and averages tr(ρ_i ρ̂_{jkl}) per block and overall. The result
/// does not depend on cfg.threads.
SimReport simulate_protocol(const MubTriple& triple, const StateDesign& design, const SimConfig& cfg,
                            const FidelityModel& estimator_model = FidelityModel::ideal());

/// Two-copy averages from the recorded three-copy counts of `report`,
/// marginalising the third measurement. Throws DataError without counts.
SimReport reprocess_two_copy(const SimReport& report, const MubTriple& triple, BasisPair pair,
                             const StateDesign& design, const FidelityModel& estimator_model = FidelityModel::ideal());

struct DeviationSummary {
  double maximal = 0.0;
  double minimal = 0.0;
  double average = 0.0;
  double std = 0.0;
  double max_deviation = 0.0;  // max |value - reference|
  double reference = 0.0;
  std::size_t samples = 0;
};

/// Throws DomainError on an empty list.
DeviationSummary summarize(std::span<const double> values, double reference);

struct PhaseScanRow {
  double phi = 0.0;
  double exact = 0.0;
  std::optional<double> simulated;
  std::optional<double> simulated_std;
};

/// Applies diag(1,1,1,e^{iφ}) to the base triple for each φ. Exact values use
/// exact_model; simulations (when requested) draw from an independent seed per φ.
std::vector<PhaseScanRow> equivalence_scan_phase(std::span<const double> phi_grid, const MubTriple& base,
                                                 const StateDesign& design, const SimConfig& cfg,
                                                 const FidelityModel& exact_model, bool simulate);

struct EquivalenceSummary {
  DeviationSummary exact;
  std::optional<DeviationSummary> simulated;
  std::vector<double> exact_values;
  std::vector<double> simulated_values;
};

/// n Haar unitaries from the (cfg.seed, unitaries) stream applied to the base
/// triple; deviations are measured from the base triple's exact fidelity.
EquivalenceSummary equivalence_scan_random(int n_unitaries, const MubTriple& base, const StateDesign& design,
                                           const SimConfig& cfg, const FidelityModel& exact_model, bool simulate);

struct SubsetRow {
  int size = 0;
  int trials = 0;
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation over trials
};

/// Mean fidelity over `subset`, summed in increasing state order.
double subset_fidelity(const SimReport& report, std::span<const int> subset);

/// For each size, `trials` subsets drawn without replacement from the
/// (seed, subsets, size) stream. Throws DomainError if a size is outside [1, K].
std::vector<SubsetRow> random_subset_analysis(const SimReport& report, std::span<const int> subset_sizes, int trials,
                                              std::uint64_t seed);

/// Structured report: config echo, summary, per-block and per-state values.
void write_sim_report_json(std::ostream& out, const SimReport& report);
void save_sim_report(const SimReport& report, const std::filesystem::path& path);

/// Count table summed over blocks: state_index,j,k,l,count (one outcome column per copy).
void write_counts_csv(std::ostream& out, const SimReport& report, std::span<const std::string> header_lines = {});

}  // namespace mubest
