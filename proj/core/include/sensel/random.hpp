#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace sensel {

/// Independent generator keyed by a list of 64-bit values, e.g.
/// (seed, batch, candidate). Each key contributes both 32-bit halves.
inline std::mt19937_64 make_stream(std::initializer_list<std::uint64_t> keys) {
  std::vector<std::uint32_t> words;
  words.reserve(2 * keys.size());
  for (std::uint64_t k : keys) {
    words.push_back(static_cast<std::uint32_t>(k));
    words.push_back(static_cast<std::uint32_t>(k >> 32));
  }
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

/// Uniform double in [0, 1) from the top 53 bits of one draw.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace sensel
