#include "commands.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "angles.hpp"
#include "manifest.hpp"
#include "mubest/clifford.hpp"
#include "mubest/design_io.hpp"
#include "mubest/designs.hpp"
#include "mubest/errors.hpp"
#include "mubest/estimation.hpp"
#include "mubest/simulation.hpp"

#ifndef MUBEST_VERSION
#define MUBEST_VERSION "0.0.0"
#endif

namespace mubest::cli {

namespace fs = std::filesystem;

namespace {

// Raised when an optimisation ends above its target.
class TargetMissed : public Error {
 public:
  using Error::Error;
};

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

fs::path resolve_output(const std::string& flag, const std::string& default_name) {
  if (!flag.empty()) return flag;
  const char* dir = std::getenv("MUBEST_OUTPUT_DIR");
  if (dir != nullptr && *dir != '\0') return fs::path(dir) / default_name;
  return default_name;
}

void ensure_parent(const fs::path& p) {
  if (p.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(p.parent_path(), ec);
  }
}

StateDesign resolve_design(const std::string& name) {
  if (name == "clifford") return clifford_design();
  if (!fs::exists(name)) throw IoError("design file '" + name + "' does not exist");
  return load_design(name);
}

// Book-keeping shared by all commands: planned outputs, the manifest, timing.
class Run {
 public:
  Run(std::string command, std::uint64_t seed) : start_(std::chrono::steady_clock::now()) {
    manifest_.command = std::move(command);
    manifest_.seed = seed;
    manifest_.tool_version = MUBEST_VERSION;
  }

  void param(const std::string& key, const std::string& value) { manifest_.parameters[key] = value; }
  void param(const std::string& key, double value) { manifest_.parameters[key] = fmt("%.17g", value); }

  fs::path plan(const fs::path& p) {
    ensure_parent(p);
    planned_.push_back(p);
    manifest_.output_paths.push_back(p.string());
    return p;
  }

  std::vector<std::string> csv_header() const {
    return {"manifest_hash=" + manifest_.hash(), "command=" + manifest_.command, "tool_version=" + manifest_.tool_version};
  }

  void finish() {
    manifest_.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    if (!planned_.empty()) write_manifest(manifest_, planned_.front());
  }

  void mark_failed(const std::string& message) const {
    for (const auto& p : planned_) {
      fs::path marker = p;
      marker += ".failed";
      std::ofstream out(marker);
      out << message << '\n';
    }
  }

 private:
  RunManifest manifest_;
  std::chrono::steady_clock::time_point start_;
  std::vector<fs::path> planned_;
};

template <typename Fn>
void write_text(const fs::path& path, Fn&& writer) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  writer(out);
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

FidelityModel make_model(const std::string& mode, const std::string& design_name, const std::string& source) {
  if (mode == "ideal") return FidelityModel::ideal();
  if (mode != "empirical") throw DomainError("unknown mode '" + mode + "' (expected ideal or empirical)");
  EstimatorSource s = EstimatorSource::kEmpirical;
  if (source == "ideal") {
    s = EstimatorSource::kIdeal;
  } else if (source != "empirical") {
    throw DomainError("unknown estimator source '" + source + "'");
  }
  return FidelityModel::empirical(resolve_design(design_name), s);
}

std::string csv_cell(double v) { return fmt("%.12g", v); }

// ---------------------------------------------------------------- groups

struct GroupsArgs {
  std::string which = "restricted";
  std::string out;
  std::string format = "auto";
};

FileFormat parse_format(const std::string& f) {
  if (f == "auto") return FileFormat::kAuto;
  if (f == "json") return FileFormat::kJson;
  if (f == "csv") return FileFormat::kCsv;
  throw DomainError("unknown format '" + f + "'");
}

void cmd_groups(const GroupsArgs& a, Run& run, std::ostream& out) {
  run.param("which", a.which);
  run.param("format", a.format);
  std::size_t expected = 0;
  std::optional<UnitaryGroup> group;
  if (a.which == "pauli") {
    group = pauli_group_projective(2);
    expected = kPauliOrder;
  } else if (a.which == "clifford") {
    group = clifford_group();
    expected = kCliffordOrder;
  } else if (a.which == "restricted") {
    group = restricted_clifford_group();
    expected = kRestrictedCliffordOrder;
  } else {
    throw DomainError("unknown group '" + a.which + "'");
  }
  const FileFormat format = parse_format(a.format);
  const fs::path path = run.plan(resolve_output(a.out, "group_" + a.which + (format == FileFormat::kCsv ? ".csv" : ".json")));
  out << "order=" << group->order() << '\n';
  save_group(*group, path, format);
  run.finish();
  if (group->order() != expected) {
    throw ValidationError("group order " + std::to_string(group->order()) + " differs from " + std::to_string(expected));
  }
}

// ---------------------------------------------------------------- design

struct DesignArgs {
  int states = 200;
  int dim = 4;
  int strength = 4;
  std::uint64_t seed = 1;
  long iters = 100000;
  double target = 0.0287;
  double step = 1.0;
  long progress = 0;
  std::string out;
};

void report_design(const StateDesign& d, int t, std::ostream& out) {
  const double phi = frame_potential(d, t);
  out << "K=" << d.size() << '\n';
  out << "phi" << t << '=' << fmt("%.10f", phi) << '\n';
  out << "bound=" << fmt("%.10f", 1.0 / static_cast<double>(binomial(d.dim() + t - 1, t))) << '\n';
  long n = 1;
  for (int i = 0; i < t; ++i) n *= d.dim();
  if (n <= 1024) out << "symmetric_ratio=" << fmt("%.10f", moment_operator(d, t).symmetric_ratio) << '\n';
}

void cmd_design_clifford(const DesignArgs& a, Run& run, std::ostream& out) {
  const fs::path path = run.plan(resolve_output(a.out, "design_clifford.json"));
  const StateDesign d = clifford_design();
  report_design(d, 4, out);
  save_design(d, path);
  run.finish();
}

void cmd_design_optimize(const DesignArgs& a, Run& run, std::ostream& out) {
  run.param("K", std::to_string(a.states));
  run.param("dim", std::to_string(a.dim));
  run.param("t", std::to_string(a.strength));
  run.param("iters", std::to_string(a.iters));
  run.param("target", a.target);
  run.param("step", a.step);
  const fs::path path = run.plan(resolve_output(a.out, "design_optimized.json"));

  OptimizeOptions opt;
  opt.states = a.states;
  opt.dim = a.dim;
  opt.strength = a.strength;
  opt.seed = a.seed;
  opt.max_iters = a.iters;
  opt.target = a.target;
  opt.step = a.step;
  if (a.progress > 0) {
    opt.observer = [&out, every = a.progress](long it, double phi) {
      if (it % every == 0) out << "iter=" << it << " phi=" << fmt("%.10f", phi) << '\n';
    };
  }
  const StateDesign d = optimize_design(opt);
  const double phi = frame_potential(d, a.strength);
  out << "iterations=" << d.metadata().at("iterations") << '\n';
  report_design(d, a.strength, out);
  save_design(d, path);
  run.finish();
  if (phi > a.target) {
    throw TargetMissed("phi" + std::to_string(a.strength) + "=" + fmt("%.10f", phi) + " did not reach target " +
                       fmt("%.10f", a.target));
  }
}

// ---------------------------------------------------------------- fidelity

struct FidelityArgs {
  std::string x = "pi/2";
  std::string y_list = "0,pi/2";
  std::string z_list = "0:pi:9";
  std::string mode = "ideal";
  std::string design = "clifford";
  std::string estimator_source = "empirical";
  int copies = 3;
  std::string pair = "ab";
  std::string basis = "a";
  std::string out;
};

std::vector<ProjectiveMeasurement> measurements_for(const MubTriple& t, int copies, const std::string& pair,
                                                    const std::string& basis) {
  if (copies == 3) return t.measurements();
  if (copies == 2) return pair_measurements(t, basis_pair_from_string(pair));
  if (copies == 1) {
    if (basis == "a") return {measurement_of(t.basis_a)};
    if (basis == "b") return {measurement_of(t.basis_b)};
    if (basis == "c") return {measurement_of(t.basis_c)};
    throw DomainError("unknown basis '" + basis + "' (expected a, b or c)");
  }
  throw DomainError("--copies must be 1, 2 or 3");
}

void cmd_fidelity(const FidelityArgs& a, Run& run, std::ostream& out) {
  for (const auto& [k, v] : std::initializer_list<std::pair<const char*, const std::string*>>{
           {"x", &a.x}, {"y_list", &a.y_list}, {"z_list", &a.z_list}, {"mode", &a.mode},
           {"design", &a.design}, {"estimator_source", &a.estimator_source}, {"pair", &a.pair}, {"basis", &a.basis}}) {
    run.param(k, *v);
  }
  run.param("copies", std::to_string(a.copies));
  const double x = parse_angle(a.x);
  const auto ys = parse_angle_list(a.y_list);
  const auto zs = parse_angle_list(a.z_list);
  const FidelityModel model = make_model(a.mode, a.design, a.estimator_source);
  const fs::path path = run.plan(resolve_output(a.out, "fidelity.csv"));

  std::vector<ScanPoint> points;
  if (a.copies == 3) {
    points = fidelity_scan(x, ys, zs, model);
  } else {
    for (double y : ys) {
      for (double z : zs) {
        const auto ms = measurements_for(mub_triple(x, y, z), a.copies, a.pair, a.basis);
        points.push_back({x, y, z, estimation_fidelity(ms, model).fidelity});
      }
    }
  }
  for (const auto& p : points) {
    out << "x=" << fmt("%.6f", p.x) << " y=" << fmt("%.6f", p.y) << " z=" << fmt("%.6f", p.z)
        << " F=" << fmt("%.12f", p.fidelity) << '\n';
  }
  const auto header = run.csv_header();
  write_text(path, [&](std::ostream& os) { write_scan_csv(os, points, header); });
  run.finish();
}

// ---------------------------------------------------------------- simulate / subsets

struct SimArgs {
  std::string x = "pi/2";
  std::string y = "pi/2";
  std::string z = "pi/2";
  std::string design = "clifford";
  std::uint64_t seed = 1;
  int m_block = 10000;
  int blocks = 10;
  bool no_share_ab = false;
  int threads = 1;
  std::string estimators = "ideal";
  std::string out;
  std::string counts;
  std::string two_copy;
  std::string sizes = "240,480,720";
  int trials = 30;
};

SimConfig sim_config(const SimArgs& a, Run& run) {
  run.param("x", a.x);
  run.param("y", a.y);
  run.param("z", a.z);
  run.param("design", a.design);
  run.param("M", std::to_string(a.m_block));
  run.param("blocks", std::to_string(a.blocks));
  run.param("share_ab", a.no_share_ab ? "false" : "true");
  run.param("estimators", a.estimators);
  SimConfig cfg;
  cfg.seed = a.seed;
  cfg.repetitions_per_block = a.m_block;
  cfg.blocks = a.blocks;
  cfg.share_ab_outcomes = !a.no_share_ab;
  cfg.threads = a.threads;
  cfg.validate();
  return cfg;
}

void cmd_simulate(const SimArgs& a, Run& run, std::ostream& out) {
  SimConfig cfg = sim_config(a, run);
  cfg.record_counts = !a.counts.empty() || !a.two_copy.empty();
  const MubTriple triple = mub_triple(parse_angle(a.x), parse_angle(a.y), parse_angle(a.z));
  const StateDesign design = resolve_design(a.design);
  const FidelityModel est = a.estimators == "empirical" ? FidelityModel::empirical(design) : FidelityModel::ideal();
  if (a.estimators != "ideal" && a.estimators != "empirical") throw DomainError("unknown estimators '" + a.estimators + "'");

  const fs::path path = run.plan(resolve_output(a.out, "simulate.json"));
  std::optional<fs::path> counts_path;
  if (!a.counts.empty()) counts_path = run.plan(a.counts);
  std::optional<BasisPair> pair;
  std::optional<fs::path> two_path;
  if (!a.two_copy.empty()) {
    pair = basis_pair_from_string(a.two_copy);
    fs::path p = path;
    p.replace_extension(".two_copy_" + a.two_copy + ".json");
    two_path = run.plan(p);
  }

  const SimReport report = simulate_protocol(triple, design, cfg, est);
  const auto ms = triple.measurements();
  const double exact = expected_fidelity(build_estimator_table(ms, design, est));
  out << "mean=" << fmt("%.6f", report.mean_fidelity) << " std=" << fmt("%.2e", report.std) << '\n';
  out << "exact=" << fmt("%.12f", exact) << '\n';
  save_sim_report(report, path);
  if (counts_path) {
    const auto header = run.csv_header();
    write_text(*counts_path, [&](std::ostream& os) { write_counts_csv(os, report, header); });
  }
  if (pair) {
    const SimReport two = reprocess_two_copy(report, triple, *pair, design, est);
    out << "two_copy_" << a.two_copy << " mean=" << fmt("%.6f", two.mean_fidelity) << " std=" << fmt("%.2e", two.std)
        << '\n';
    save_sim_report(two, *two_path);
  }
  run.finish();
}

void cmd_subsets(const SimArgs& a, Run& run, std::ostream& out) {
  SimConfig cfg = sim_config(a, run);
  cfg.record_counts = false;
  run.param("sizes", a.sizes);
  run.param("trials", std::to_string(a.trials));
  const auto sizes = parse_int_list(a.sizes);
  const MubTriple triple = mub_triple(parse_angle(a.x), parse_angle(a.y), parse_angle(a.z));
  const StateDesign design = resolve_design(a.design);
  for (int s : sizes) {
    if (s > static_cast<int>(design.size())) {
      throw DomainError("subset size " + std::to_string(s) + " exceeds the design size " + std::to_string(design.size()));
    }
  }
  const fs::path path = run.plan(resolve_output(a.out, "subsets.csv"));

  const SimReport report = simulate_protocol(triple, design, cfg);
  const auto rows = random_subset_analysis(report, sizes, a.trials, a.seed);
  out << "full K=" << report.states << " mean=" << fmt("%.6f", report.mean_fidelity) << '\n';
  for (const auto& r : rows) {
    out << "K=" << r.size << " mean=" << fmt("%.6f", r.mean) << " std=" << fmt("%.6f", r.std) << '\n';
  }
  const auto header = run.csv_header();
  write_text(path, [&](std::ostream& os) {
    for (const auto& line : header) os << "# " << line << '\n';
    os << "K,trials,mean,std\n";
    for (const auto& r : rows) os << r.size << ',' << r.trials << ',' << csv_cell(r.mean) << ',' << csv_cell(r.std) << '\n';
  });
  run.finish();
}

// ---------------------------------------------------------------- equivalence

struct EquivalenceArgs {
  SimArgs sim;
  std::string mode = "ideal";
  bool exact_only = false;
  std::string phi_grid;
  int unitaries = 10000;
};

void cmd_equivalence(const EquivalenceArgs& a, Run& run, std::ostream& out) {
  const SimConfig cfg = sim_config(a.sim, run);
  run.param("mode", a.mode);
  run.param("exact_only", a.exact_only ? "true" : "false");
  run.param("phi_grid", a.phi_grid);
  run.param("unitaries", std::to_string(a.unitaries));
  const MubTriple base = mub_triple(parse_angle(a.sim.x), parse_angle(a.sim.y), parse_angle(a.sim.z));
  const StateDesign design = resolve_design(a.sim.design);
  const FidelityModel model = a.mode == "ideal" ? FidelityModel::ideal() : FidelityModel::empirical(design);
  if (a.mode != "ideal" && a.mode != "empirical") throw DomainError("unknown mode '" + a.mode + "'");
  const fs::path path = run.plan(resolve_output(a.sim.out, "equivalence.csv"));
  const auto header = run.csv_header();

  if (!a.phi_grid.empty()) {
    const auto phis = parse_angle_list(a.phi_grid);
    const auto rows = equivalence_scan_phase(phis, base, design, cfg, model, !a.exact_only);
    double lo = rows.front().exact;
    double hi = lo;
    for (const auto& r : rows) {
      lo = std::min(lo, r.exact);
      hi = std::max(hi, r.exact);
    }
    out << "points=" << rows.size() << " exact_variation=" << fmt("%.3e", hi - lo) << '\n';
    write_text(path, [&](std::ostream& os) {
      for (const auto& line : header) os << "# " << line << '\n';
      os << "phi,F_exact,F_sim,F_sim_std\n";
      for (const auto& r : rows) {
        os << csv_cell(r.phi) << ',' << csv_cell(r.exact) << ',' << (r.simulated ? csv_cell(*r.simulated) : "") << ','
           << (r.simulated_std ? csv_cell(*r.simulated_std) : "") << '\n';
      }
    });
  } else {
    const EquivalenceSummary s = equivalence_scan_random(a.unitaries, base, design, cfg, model, !a.exact_only);
    auto print = [&](const char* kind, const DeviationSummary& d) {
      out << kind << " maximal=" << fmt("%.5f", d.maximal) << " minimal=" << fmt("%.5f", d.minimal)
          << " average=" << fmt("%.5f", d.average) << " std=" << fmt("%.2e", d.std)
          << " max_deviation=" << fmt("%.2e", d.max_deviation) << '\n';
    };
    print("exact", s.exact);
    if (s.simulated) print("simulated", *s.simulated);
    write_text(path, [&](std::ostream& os) {
      for (const auto& line : header) os << "# " << line << '\n';
      os << "kind,maximal,minimal,average,std,max_deviation,reference,samples\n";
      auto row = [&](const char* kind, const DeviationSummary& d) {
        os << kind << ',' << csv_cell(d.maximal) << ',' << csv_cell(d.minimal) << ',' << csv_cell(d.average) << ','
           << csv_cell(d.std) << ',' << csv_cell(d.max_deviation) << ',' << csv_cell(d.reference) << ',' << d.samples
           << '\n';
      };
      row("exact", s.exact);
      if (s.simulated) row("simulated", *s.simulated);
    });
  }
  run.finish();
}

void add_sim_flags(CLI::App* cmd, SimArgs& a) {
  cmd->add_option("--x", a.x, "Angle x of the B basis (radians or pi fractions)");
  cmd->add_option("--y", a.y, "Angle y of the C basis");
  cmd->add_option("--z", a.z, "Angle z of the C basis");
  cmd->add_option("--design", a.design, "'clifford' or a design file");
  cmd->add_option("--seed", a.seed, "Master seed");
  cmd->add_option("--M", a.m_block, "Repetitions per block")->check(CLI::PositiveNumber);
  cmd->add_option("--blocks", a.blocks, "Number of blocks")->check(CLI::PositiveNumber);
  cmd->add_flag("--no-share-ab", a.no_share_ab, "Draw A and B outcomes from triple-specific streams");
  cmd->add_option("--threads", a.threads, "Worker threads")->check(CLI::PositiveNumber);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Estimation fidelities, designs and simulations for MUB triples in dimension 4", "mubest"};
  app.option_defaults()->always_capture_default();
  app.set_version_flag("--version", MUBEST_VERSION);
  app.require_subcommand(1);
  app.footer("Output files default to $MUBEST_OUTPUT_DIR (or the working directory).\n"
             "Exit codes: 0 ok, 2 usage or I/O, 3 numerical target missed, 4 validation failure.");

  GroupsArgs groups;
  auto* g = app.add_subcommand("groups", "Generate a two-qubit group and write its elements");
  g->add_option("--which", groups.which, "pauli, clifford or restricted")
      ->check(CLI::IsMember({"pauli", "clifford", "restricted"}));
  g->add_option("--out", groups.out, "Output file (default group_<which>.json)");
  g->add_option("--format", groups.format, "auto, json or csv")->check(CLI::IsMember({"auto", "json", "csv"}));

  DesignArgs design;
  auto* d = app.add_subcommand("design", "Build a state design");
  d->require_subcommand(1);
  auto* dc = d->add_subcommand("clifford", "Restricted-Clifford orbit of the fiducial state");
  dc->add_option("--out", design.out, "Output file (default design_clifford.json)");
  auto* dopt = d->add_subcommand("optimize", "Minimise the frame potential from random states");
  dopt->add_option("--K", design.states, "Number of states")->check(CLI::PositiveNumber);
  dopt->add_option("--dim", design.dim, "Hilbert space dimension")->check(CLI::PositiveNumber);
  dopt->add_option("--t", design.strength, "Design strength")->check(CLI::PositiveNumber);
  dopt->add_option("--seed", design.seed, "Seed of the initial states");
  dopt->add_option("--iters", design.iters, "Iteration limit")->check(CLI::PositiveNumber);
  dopt->add_option("--target", design.target, "Stop once the frame potential is at or below this");
  dopt->add_option("--step", design.step, "Initial step size");
  dopt->add_option("--progress", design.progress, "Print progress every N iterations (0 = off)");
  dopt->add_option("--out", design.out, "Output file (default design_optimized.json)");

  FidelityArgs fid;
  auto* f = app.add_subcommand("fidelity", "Exact estimation fidelity over an angle grid");
  f->add_option("--x", fid.x, "Angle x");
  f->add_option("--y-list", fid.y_list, "Angles y: comma list or start:stop:count");
  f->add_option("--z-list", fid.z_list, "Angles z: comma list or start:stop:count");
  f->add_option("--mode", fid.mode, "ideal or empirical")->check(CLI::IsMember({"ideal", "empirical"}));
  f->add_option("--design", fid.design, "Design for empirical mode: 'clifford' or a file");
  f->add_option("--estimator-source", fid.estimator_source, "Empirical mode estimators from the ideal or the design Q")
      ->check(CLI::IsMember({"ideal", "empirical"}));
  f->add_option("--copies", fid.copies, "Number of copies measured (1, 2 or 3)")->check(CLI::Range(1, 3));
  f->add_option("--pair", fid.pair, "Bases used with --copies 2: ab, ac or bc")->check(CLI::IsMember({"ab", "ac", "bc"}));
  f->add_option("--basis", fid.basis, "Basis used with --copies 1: a, b or c")->check(CLI::IsMember({"a", "b", "c"}));
  f->add_option("--out", fid.out, "Output CSV (default fidelity.csv)");

  SimArgs sim;
  auto* s = app.add_subcommand("simulate", "Monte-Carlo run of the three-copy protocol");
  add_sim_flags(s, sim);
  s->add_option("--estimators", sim.estimators, "Estimators from the ideal or the design Q")
      ->check(CLI::IsMember({"ideal", "empirical"}));
  s->add_option("--out", sim.out, "Report file (default simulate.json)");
  s->add_option("--counts", sim.counts, "Also write the outcome count table to this CSV");
  s->add_option("--two-copy", sim.two_copy, "Also reprocess the counts for this pair: ab, ac or bc")
      ->check(CLI::IsMember({"ab", "ac", "bc"}));

  EquivalenceArgs eq;
  auto* e = app.add_subcommand("equivalence", "Fidelity under unitaries applied to all three bases");
  add_sim_flags(e, eq.sim);
  e->add_option("--mode", eq.mode, "Exact values from the ideal or the design Q")->check(CLI::IsMember({"ideal", "empirical"}));
  e->add_flag("--exact", eq.exact_only, "Skip the simulations");
  e->add_option("--phi-grid", eq.phi_grid, "Controlled-phase angles (start:stop:count); random unitaries if empty");
  e->add_option("--unitaries", eq.unitaries, "Number of Haar unitaries")->check(CLI::PositiveNumber);
  e->add_option("--out", eq.sim.out, "Output CSV (default equivalence.csv)");

  SimArgs sub;
  auto* u = app.add_subcommand("subsets", "Fidelity over random subsets of the design states");
  add_sim_flags(u, sub);
  u->add_option("--sizes", sub.sizes, "Subset sizes");
  u->add_option("--trials", sub.trials, "Subsets drawn per size")->check(CLI::PositiveNumber);
  u->add_option("--out", sub.out, "Output CSV (default subsets.csv)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& ex) {
    const int code = app.exit(ex, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  std::optional<Run> run;
  try {
    if (g->parsed()) {
      run.emplace("groups", 0);
      cmd_groups(groups, *run, out);
    } else if (dc->parsed()) {
      run.emplace("design clifford", 0);
      cmd_design_clifford(design, *run, out);
    } else if (dopt->parsed()) {
      run.emplace("design optimize", design.seed);
      cmd_design_optimize(design, *run, out);
    } else if (f->parsed()) {
      run.emplace("fidelity", 0);
      cmd_fidelity(fid, *run, out);
    } else if (s->parsed()) {
      run.emplace("simulate", sim.seed);
      cmd_simulate(sim, *run, out);
    } else if (e->parsed()) {
      run.emplace("equivalence", eq.sim.seed);
      cmd_equivalence(eq, *run, out);
    } else if (u->parsed()) {
      run.emplace("subsets", sub.seed);
      cmd_subsets(sub, *run, out);
    }
  } catch (const TargetMissed& ex) {
    err << "error: " << ex.what() << '\n';
    if (run) run->mark_failed(ex.what());
    return kExitTarget;
  } catch (const InfeasibleError& ex) {
    err << "error: " << ex.what() << '\n';
    if (run) run->mark_failed(ex.what());
    return kExitTarget;
  } catch (const IoError& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << '\n';
    if (run) run->mark_failed(ex.what());
    return kExitValidation;
  }
  return kExitOk;
}

}  // namespace mubest::cli
