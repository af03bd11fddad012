#include "figcap/rng.hpp"

#include <algorithm>
#include <numeric>

#include "figcap/error.hpp"

namespace figcap {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t global_seed, std::string_view key,
                          std::uint64_t stream) {
  std::uint64_t s = splitmix64(global_seed);
  s = splitmix64(s ^ fnv1a64(key));
  return splitmix64(s ^ splitmix64(stream));
}

std::uint64_t Rng::uniform(std::uint64_t n) {
  if (n == 0) throw Error("Rng::uniform: empty range");
  // Largest multiple of n representable; draws above it are rejected.
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % n + 1) % n;
  std::uint64_t draw = next();
  while (draw > limit) draw = next();
  return draw % n;
}

std::vector<std::size_t> Rng::sample_without_replacement(std::size_t n,
                                                         std::size_t k) {
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  k = std::min(k, n);
  for (std::size_t i = 0; i < k; ++i) {
    std::swap(pool[i], pool[i + uniform(n - i)]);
  }
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace figcap
