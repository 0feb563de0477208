#include "mubest/design_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mubest/errors.hpp"
#include "mubest/random.hpp"

namespace mubest {

namespace {

using json = nlohmann::ordered_json;

constexpr double kPhiConsistencyTol = 1e-9;
constexpr int kClosureSpotChecks = 100;
constexpr std::uint64_t kClosureSeed = 0x5eed;

// Header fields and numeric records shared by design and group files.
struct RecordFile {
  json header = json::object();
  std::vector<std::vector<double>> records;
};

std::string format17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

FileFormat resolve(FileFormat format, const std::filesystem::path& path) {
  if (format != FileFormat::kAuto) return format;
  return path.extension() == ".csv" ? FileFormat::kCsv : FileFormat::kJson;
}

std::string header_value_text(const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

void write_records(const RecordFile& file, const std::filesystem::path& path, FileFormat format,
                   const std::vector<std::string>& column_names) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");

  if (resolve(format, path) == FileFormat::kCsv) {
    for (const auto& [key, value] : file.header.items()) {
      if (value.is_object()) {
        for (const auto& [mk, mv] : value.items()) out << "# " << key << '.' << mk << '=' << header_value_text(mv) << '\n';
      } else if (value.is_array()) {
        std::string joined;
        for (const auto& item : value) joined += (joined.empty() ? "" : ";") + header_value_text(item);
        out << "# " << key << '=' << joined << '\n';
      } else {
        out << "# " << key << '=' << header_value_text(value) << '\n';
      }
    }
    for (std::size_t c = 0; c < column_names.size(); ++c) out << (c ? "," : "") << column_names[c];
    out << '\n';
    for (const auto& rec : file.records) {
      for (std::size_t c = 0; c < rec.size(); ++c) out << (c ? "," : "") << format17(rec[c]);
      out << '\n';
    }
  } else {
    out << "{\n";
    for (const auto& [key, value] : file.header.items()) {
      // phi_t keeps full precision; nlohmann would print the shortest round-trip form.
      out << "  " << json(key).dump() << ": " << (value.is_number_float() ? format17(value.get<double>()) : value.dump())
          << ",\n";
    }
    out << "  \"records\": [\n";
    for (std::size_t r = 0; r < file.records.size(); ++r) {
      out << "    [";
      for (std::size_t c = 0; c < file.records[r].size(); ++c) out << (c ? ", " : "") << format17(file.records[r][c]);
      out << ']' << (r + 1 < file.records.size() ? "," : "") << '\n';
    }
    out << "  ]\n}\n";
  }
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

std::string read_all(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t line_of_byte(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

RecordFile parse_json(const std::string& text, const std::string& where) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(where + ": line " + std::to_string(line_of_byte(text, e.byte)) + ": JSON syntax error");
  }
  if (!doc.is_object()) throw ParseError(where + ": top level must be an object");
  if (!doc.contains("records") || !doc["records"].is_array()) {
    throw ParseError(where + ": field 'records' missing or not an array");
  }
  RecordFile file;
  for (const auto& [key, value] : doc.items()) {
    if (key != "records") file.header[key] = value;
  }
  const auto& recs = doc["records"];
  file.records.reserve(recs.size());
  for (std::size_t r = 0; r < recs.size(); ++r) {
    if (!recs[r].is_array()) throw ParseError(where + ": field records[" + std::to_string(r) + "] is not an array");
    std::vector<double> row;
    row.reserve(recs[r].size());
    for (std::size_t c = 0; c < recs[r].size(); ++c) {
      if (!recs[r][c].is_number()) {
        throw ParseError(where + ": field records[" + std::to_string(r) + "][" + std::to_string(c) + "] is not a number");
      }
      row.push_back(recs[r][c].get<double>());
    }
    file.records.push_back(std::move(row));
  }
  return file;
}

json csv_header_value(const std::string& text) {
  // Numbers stay numbers; everything else is a string.
  double v = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec == std::errc() && ptr == end && !text.empty()) {
    if (text.find_first_of(".eE") == std::string::npos) return json(std::stoll(text));
    return json(v);
  }
  return json(text);
}

RecordFile parse_csv(const std::string& text, const std::string& where) {
  RecordFile file;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  bool seen_columns = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string loc = where + ": line " + std::to_string(line_no);
    if (line.front() == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw ParseError(loc + ": header line without '='");
      std::string key = line.substr(1, eq - 1);
      key.erase(0, key.find_first_not_of(' '));
      const std::string value = line.substr(eq + 1);
      const auto dot = key.find('.');
      if (dot != std::string::npos) {
        file.header[key.substr(0, dot)][key.substr(dot + 1)] = value;
      } else if (key == "generators") {
        json list = json::array();
        std::istringstream parts(value);
        for (std::string part; std::getline(parts, part, ';');) list.push_back(part);
        file.header[key] = list;
      } else {
        file.header[key] = csv_header_value(value);
      }
      continue;
    }
    if (!seen_columns) {
      seen_columns = true;
      continue;
    }
    std::vector<double> row;
    std::size_t start = 0;
    std::size_t column = 1;
    while (start <= line.size()) {
      const auto comma = line.find(',', start);
      const std::string cell = line.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc() || ptr != cell.data() + cell.size() || cell.empty()) {
        throw ParseError(loc + ", column " + std::to_string(column) + ": '" + cell + "' is not a number");
      }
      row.push_back(v);
      if (comma == std::string::npos) break;
      start = comma + 1;
      ++column;
    }
    file.records.push_back(std::move(row));
  }
  return file;
}

RecordFile read_records(const std::filesystem::path& path, FileFormat format) {
  const std::string text = read_all(path);
  const std::string where = path.string();
  return resolve(format, path) == FileFormat::kCsv ? parse_csv(text, where) : parse_json(text, where);
}

template <typename T>
T require(const RecordFile& file, const std::string& key, const std::string& where) {
  if (!file.header.contains(key)) throw ParseError(where + ": missing header field '" + key + "'");
  try {
    return file.header.at(key).get<T>();
  } catch (const json::exception&) {
    throw ParseError(where + ": header field '" + key + "' has the wrong type");
  }
}

void check_version_and_kind(const RecordFile& file, const std::string& kind, const std::string& where) {
  const int version = require<int>(file, "format_version", where);
  if (version != kDesignFormatVersion) {
    throw ParseError(where + ": unsupported format_version " + std::to_string(version));
  }
  if (file.header.contains("kind") && require<std::string>(file, "kind", where) != kind) {
    throw ParseError(where + ": file holds a '" + require<std::string>(file, "kind", where) + "', expected '" + kind + "'");
  }
}

std::vector<std::string> amplitude_columns(int count) {
  std::vector<std::string> names;
  for (int i = 0; i < count; ++i) {
    names.push_back("re" + std::to_string(i));
    names.push_back("im" + std::to_string(i));
  }
  return names;
}

}  // namespace

void save_design(const StateDesign& design, const std::filesystem::path& path, FileFormat format) {
  const int t = std::max(1, design.strength());
  RecordFile file;
  file.header["format_version"] = kDesignFormatVersion;
  file.header["kind"] = "state_design";
  file.header["dim"] = design.dim();
  file.header["t"] = design.strength();
  file.header["K"] = design.size();
  file.header["provenance"] = to_string(design.provenance());
  file.header["phi_t"] = design.size() ? frame_potential(design, t) : 0.0;
  json meta = json::object();
  for (const auto& [k, v] : design.metadata()) meta[k] = v;
  file.header["metadata"] = meta;
  for (const auto& state : design.states()) {
    std::vector<double> rec;
    for (int i = 0; i < state.dim(); ++i) {
      rec.push_back(state[i].real());
      rec.push_back(state[i].imag());
    }
    file.records.push_back(std::move(rec));
  }
  write_records(file, path, format, amplitude_columns(design.dim()));
}

StateDesign load_design(const std::filesystem::path& path, FileFormat format) {
  const std::string where = path.string();
  const RecordFile file = read_records(path, format);
  check_version_and_kind(file, "state_design", where);
  const int dim = require<int>(file, "dim", where);
  const int t = require<int>(file, "t", where);
  const auto k = require<std::size_t>(file, "K", where);
  const auto provenance = provenance_from_string(require<std::string>(file, "provenance", where));
  if (dim < 1) throw ParseError(where + ": header field 'dim' must be positive");
  if (file.records.size() != k) {
    throw ParseError(where + ": header declares K = " + std::to_string(k) + " but " +
                     std::to_string(file.records.size()) + " state records follow");
  }

  std::vector<PureState> states;
  states.reserve(k);
  for (std::size_t r = 0; r < k; ++r) {
    const auto& rec = file.records[r];
    if (rec.size() != static_cast<std::size_t>(2 * dim)) {
      throw ParseError(where + ": field records[" + std::to_string(r) + "] holds " + std::to_string(rec.size()) +
                       " numbers, expected " + std::to_string(2 * dim));
    }
    ComplexVector v(dim);
    for (int i = 0; i < dim; ++i) v(i) = Complex(rec[2 * i], rec[2 * i + 1]);
    if (std::abs(v.norm() - 1.0) > kUnitTol) {
      throw ValidationError(where + ": state " + std::to_string(r) + " is not unit norm (norm " +
                            format17(v.norm()) + ")");
    }
    states.emplace_back(std::move(v));
  }

  Metadata meta;
  if (file.header.contains("metadata") && file.header["metadata"].is_object()) {
    for (const auto& [mk, mv] : file.header["metadata"].items()) meta[mk] = header_value_text(mv);
  }
  meta["source_path"] = where;
  StateDesign design(dim, t, std::move(states), provenance, std::move(meta));

  if (file.header.contains("phi_t") && k > 0) {
    const double stored = require<double>(file, "phi_t", where);
    const double recomputed = frame_potential(design, std::max(1, t));
    if (std::abs(stored - recomputed) > kPhiConsistencyTol) {
      throw ValidationError(where + ": header phi_t = " + format17(stored) + " but the states give " +
                            format17(recomputed));
    }
  }
  return design;
}

void save_group(const UnitaryGroup& group, const std::filesystem::path& path, FileFormat format) {
  RecordFile file;
  file.header["format_version"] = kDesignFormatVersion;
  file.header["kind"] = "unitary_group";
  file.header["dim"] = group.dim();
  file.header["K"] = group.order();
  file.header["provenance"] = "custom";
  file.header["generators"] = group.generator_labels();
  for (const auto& e : group.elements()) {
    std::vector<double> rec;
    const auto& m = e.matrix();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        rec.push_back(m(i, j).real());
        rec.push_back(m(i, j).imag());
      }
    }
    file.records.push_back(std::move(rec));
  }
  write_records(file, path, format, amplitude_columns(group.dim() * group.dim()));
}

UnitaryGroup load_group(const std::filesystem::path& path, std::optional<std::size_t> expected_order,
                        FileFormat format) {
  const std::string where = path.string();
  const RecordFile file = read_records(path, format);
  check_version_and_kind(file, "unitary_group", where);
  const int dim = require<int>(file, "dim", where);
  const auto k = require<std::size_t>(file, "K", where);
  if (dim < 1) throw ParseError(where + ": header field 'dim' must be positive");
  if (file.records.size() != k) {
    throw ParseError(where + ": header declares K = " + std::to_string(k) + " but " +
                     std::to_string(file.records.size()) + " element records follow");
  }
  std::vector<std::string> labels;
  if (file.header.contains("generators")) labels = file.header["generators"].get<std::vector<std::string>>();

  std::vector<CanonicalUnitary> elements;
  elements.reserve(k);
  for (std::size_t r = 0; r < k; ++r) {
    const auto& rec = file.records[r];
    if (rec.size() != static_cast<std::size_t>(2 * dim * dim)) {
      throw ParseError(where + ": field records[" + std::to_string(r) + "] has the wrong length");
    }
    ComplexMatrix m(dim, dim);
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) m(i, j) = Complex(rec[2 * (i * dim + j)], rec[2 * (i * dim + j) + 1]);
    }
    if (!is_unitary(m)) throw ValidationError(where + ": element " + std::to_string(r) + " is not unitary");
    elements.push_back(canonicalize_phase(m));
  }
  UnitaryGroup group(std::move(elements), std::move(labels));

  if (group.order() != k) throw ValidationError(where + ": file contains duplicate elements");
  if (expected_order && group.order() != *expected_order) {
    throw ValidationError(where + ": group order " + std::to_string(group.order()) + ", expected " +
                          std::to_string(*expected_order));
  }
  if (k == 0) throw ValidationError(where + ": empty group");
  if (!group.contains(ComplexMatrix(ComplexMatrix::Identity(dim, dim)))) {
    throw ValidationError(where + ": identity is missing");
  }
  Rng rng(kClosureSeed);
  for (int check = 0; check < kClosureSpotChecks; ++check) {
    const auto& a = group.elements()[rng() % k].matrix();
    const auto& b = group.elements()[rng() % k].matrix();
    if (!group.contains(ComplexMatrix(a * b)) || !group.contains(ComplexMatrix(a.adjoint()))) {
      throw ValidationError(where + ": closure spot check failed");
    }
  }
  return group;
}

}  // namespace mubest
