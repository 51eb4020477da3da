#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace banditms {

// Distinct deterministic random streams per (master seed, repetition, role).
// splitmix64 is used as the mixing function so that nearby seeds do not
// produce correlated mt19937_64 states.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

enum class StreamRole : std::uint64_t {
  Environment = 1,
  BaseLearner = 2,
  Meta = 3,
};

inline std::uint64_t derive_stream_seed(std::uint64_t master_seed,
                                        std::uint64_t rep_index,
                                        StreamRole role,
                                        std::uint64_t index = 0) {
  std::uint64_t s = splitmix64(master_seed);
  s = splitmix64(s ^ (rep_index * 0x9e3779b97f4a7c15ULL));
  s = splitmix64(s ^ static_cast<std::uint64_t>(role));
  s = splitmix64(s ^ index);
  return s;
}

using Rng = std::mt19937_64;

}  // namespace banditms
