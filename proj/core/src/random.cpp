#include "mubest/random.hpp"

#include <vector>

namespace mubest {

namespace {

std::mt19937_64 seeded_engine(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
  std::vector<std::uint32_t> words;
  words.reserve(2 + 2 * path.size());
  auto push = [&words](std::uint64_t v) {
    words.push_back(static_cast<std::uint32_t>(v & 0xffffffffu));
    words.push_back(static_cast<std::uint32_t>(v >> 32));
  };
  push(seed);
  for (std::uint64_t id : path) push(id);
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

}  // namespace

Rng::Rng(std::uint64_t seed) : engine_(seeded_engine(seed, {})) {}

Rng::Rng(std::uint64_t seed, std::initializer_list<std::uint64_t> path)
    : engine_(seeded_engine(seed, path)) {}

}  // namespace mubest
