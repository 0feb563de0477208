#include <cstdio>
#include <fstream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "mubest/errors.hpp"
#include "mubest/simulation.hpp"

namespace mubest {

using json = nlohmann::ordered_json;

void write_sim_report_json(std::ostream& out, const SimReport& r) {
  json j;
  j["kind"] = "sim_report";
  j["config"] = {{"seed", r.config.seed},
                 {"repetitions_per_block", r.config.repetitions_per_block},
                 {"blocks", r.config.blocks},
                 {"share_ab_outcomes", r.config.share_ab_outcomes},
                 {"record_counts", r.config.record_counts}};
  j["x"] = r.x;
  j["y"] = r.y;
  j["z"] = r.z;
  j["states"] = r.states;
  j["copies"] = r.copies;
  j["mean_fidelity"] = r.mean_fidelity;
  j["std"] = r.std;
  j["per_block_fidelities"] = r.per_block_fidelities;
  j["per_state_fidelity"] = r.per_state_fidelity;
  out << j.dump(2) << '\n';
}

void save_sim_report(const SimReport& report, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_sim_report_json(out, report);
  if (!out) throw IoError("failed writing " + path.string());
}

void write_counts_csv(std::ostream& out, const SimReport& r, std::span<const std::string> header_lines) {
  if (!r.has_counts()) throw DataError("write_counts_csv: report has no recorded counts");
  for (const auto& line : header_lines) out << "# " << line << '\n';
  static const char* names[3] = {"j", "k", "l"};
  out << "state_index";
  for (int c = 0; c < r.copies; ++c) out << ',' << names[c];
  out << ",count\n";
  const int tuples = r.outcome_tuples();
  const int d = r.outcomes_per_copy;
  for (int i = 0; i < r.states; ++i) {
    for (int o = 0; o < tuples; ++o) {
      unsigned long total = 0;
      for (int b = 0; b < r.config.blocks; ++b) total += r.count(b, i, o);
      out << i;
      int div = tuples / d;
      for (int c = 0; c < r.copies; ++c) {
        out << ',' << (o / div) % d;
        div = std::max(1, div / d);
      }
      out << ',' << total << '\n';
    }
  }
}

}  // namespace mubest
