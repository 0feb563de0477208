#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace mubest {

/// Deterministic random stream.
///
/// Wraps std::mt19937_64. Independent substreams are derived by feeding the
/// 64-bit master seed together with a path of stream identifiers (for example
/// {purpose, state index, block index, copy}) through std::seed_seq, so any
/// (seed, path) pair reproduces the same sequence regardless of the order in
/// which streams are created or the thread that consumes them. Sequences are
/// reproducible within one build; they are not a cross-platform contract for
/// the normal variates, which go through std::normal_distribution.
class Rng {
 public:
  using result_type = std::mt19937_64::result_type;

  explicit Rng(std::uint64_t seed);
  Rng(std::uint64_t seed, std::initializer_list<std::uint64_t> path);

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double normal() { return normal_(engine_); }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Stream purposes, used as the first element of substream paths.
enum class StreamTag : std::uint64_t {
  kDesignInit = 1,
  kMeasurementA = 2,
  kMeasurementB = 3,
  kMeasurementC = 4,
  kUnitaries = 5,
  kSubsets = 6,
};

}  // namespace mubest
