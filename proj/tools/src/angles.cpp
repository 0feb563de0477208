#include "angles.hpp"

#include <charconv>
#include <cmath>
#include <numbers>

#include "mubest/errors.hpp"

namespace mubest::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& s, const std::string& whole) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
    throw DomainError("cannot parse angle '" + whole + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

double parse_angle(const std::string& text) {
  std::string s = trim(text);
  if (s.empty()) throw DomainError("empty angle");

  std::size_t pi_pos = s.find("pi");
  std::size_t pi_len = 2;
  if (pi_pos == std::string::npos) {
    pi_pos = s.find("π");
    pi_len = std::string("π").size();
  }
  if (pi_pos == std::string::npos) return parse_number(s, text);

  std::string coef = s.substr(0, pi_pos);
  std::string rest = s.substr(pi_pos + pi_len);
  if (!coef.empty() && coef.back() == '*') coef.pop_back();
  double c = 1.0;
  if (coef == "-") {
    c = -1.0;
  } else if (coef == "+") {
    c = 1.0;
  } else if (!coef.empty()) {
    c = parse_number(coef, text);
  }
  double denom = 1.0;
  if (!rest.empty()) {
    if (rest.front() != '/') throw DomainError("cannot parse angle '" + text + "'");
    denom = parse_number(rest.substr(1), text);
    if (denom == 0.0) throw DomainError("zero denominator in angle '" + text + "'");
  }
  return c * std::numbers::pi / denom;
}

std::vector<double> parse_angle_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) {
    const std::string t = trim(item);
    if (t.empty()) throw DomainError("empty entry in angle list '" + text + "'");
    const auto parts = split(t, ':');
    if (parts.size() == 1) {
      out.push_back(parse_angle(t));
      continue;
    }
    if (parts.size() != 3) throw DomainError("range must be start:stop:count, got '" + t + "'");
    const double start = parse_angle(parts[0]);
    const double stop = parse_angle(parts[1]);
    const double count_d = parse_number(trim(parts[2]), t);
    const int count = static_cast<int>(count_d);
    if (count < 1 || count != count_d) throw DomainError("range count must be a positive integer in '" + t + "'");
    if (count == 1) {
      out.push_back(start);
      continue;
    }
    for (int i = 0; i < count - 1; ++i) out.push_back(start + (stop - start) * i / (count - 1));
    out.push_back(stop);
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (const auto& item : split(text, ',')) {
    const std::string t = trim(item);
    int v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || v < 1) {
      throw DomainError("expected positive integers, got '" + text + "'");
    }
    out.push_back(v);
  }
  return out;
}

}  // namespace mubest::cli
