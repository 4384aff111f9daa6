#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace rgvlm {

// splitmix64: the usual stateless mixer. We use it to derive independent
// stream seeds from (root seed, salt...) tuples so that adding a consumer
// of randomness somewhere never shifts the draws seen by another.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t v) {
  return splitmix64(seed ^ splitmix64(v));
}

// FNV-1a over bytes; stable across platforms, used to fold strings into seeds.
inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t salt) {
  return hash_combine(root, salt);
}

inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t a, std::uint64_t b) {
  return hash_combine(hash_combine(root, a), b);
}

inline std::uint64_t derive_seed(std::uint64_t root, std::string_view name) {
  return hash_combine(root, fnv1a(name));
}

inline std::mt19937_64 make_rng(std::uint64_t seed) {
  return std::mt19937_64(splitmix64(seed));
}

}  // namespace rgvlm
