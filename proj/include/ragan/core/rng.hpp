#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace ragan::core {

// FNV-1a over a tag string plus mix-in words. Every random stream in the
// pipeline derives its seed this way from the experiment seed, so stages
// stay independent of each other and runs replay exactly.
inline uint64_t mix_seed(uint64_t base, std::string_view tag, uint64_t n = 0) {
  uint64_t h = 14695981039346656037ull;
  auto eat = [&h](uint64_t w) {
    for (int i = 0; i < 8; ++i) {
      h ^= (w >> (8 * i)) & 0xff;
      h *= 1099511628211ull;
    }
  };
  eat(base);
  for (char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  eat(n);
  return h;
}

inline std::mt19937_64 make_rng(uint64_t base, std::string_view tag, uint64_t n = 0) {
  return std::mt19937_64(mix_seed(base, tag, n));
}

// Hash of raw bytes, used for cache keys and ingest fingerprints.
inline uint64_t fnv1a(std::string_view bytes, uint64_t h = 14695981039346656037ull) {
  for (char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace ragan::core
