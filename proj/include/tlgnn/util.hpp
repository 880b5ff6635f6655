#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <string_view>

namespace tlgnn {

// 64-bit FNV-1a, used for dataset hashing and seed derivation.
inline uint64_t fnv1a64(std::string_view s, uint64_t h = 0xcbf29ce484222325ull) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Every random stream in the project is derived from one root seed and a
// purpose string, so independent components never share a stream.
inline uint64_t seed_for(uint64_t root, std::string_view purpose) {
  return splitmix64(root ^ fnv1a64(purpose));
}

// Unbiased integer in [0, bound). Implementation-pinned so outputs are
// reproducible across standard libraries (std::uniform_int_distribution is not).
inline uint64_t rand_below(std::mt19937_64& rng, uint64_t bound) {
  if (bound <= 1) return 0;
  uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    uint64_t r = rng();
    if (r >= threshold) return r % bound;
  }
}

// Uniform double in [0, 1) with 53 random bits.
inline double rand_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Writes `content` to `path` atomically (temp file + rename).
void atomic_write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace tlgnn
