#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace figcap {

// figcap-rng-v1.
//
// Seeds are derived with splitmix64 from (global seed, FNV-1a hash of a key,
// stream tag) and drive a std::mt19937_64, whose raw output sequence is fixed
// by the standard. Bounded draws use rejection sampling on the raw 64-bit
// output, so results do not depend on the standard library's distributions.
inline constexpr std::string_view kRngVersion = "figcap-rng-v1";

std::uint64_t fnv1a64(std::string_view bytes);
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t global_seed, std::string_view key,
                          std::uint64_t stream);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform integer in [0, n). n must be positive.
  std::uint64_t uniform(std::uint64_t n);

  // k distinct indices from [0, n), returned in ascending order.
  std::vector<std::size_t> sample_without_replacement(std::size_t n,
                                                      std::size_t k);

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[uniform(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace figcap
