#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace metaeval {

// Portable pseudorandom source. The engine is std::mt19937_64, whose output
// sequence is fixed by the C++ standard; the distributions below are written
// out here because the standard library ones are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound);

  // Uniform real in [0, 1) with 53 bits of resolution.
  double uniform();

  bool coin(double p) { return uniform() < p; }

  template <typename It>
  void shuffle(It first, It last) {
    auto n = static_cast<std::uint64_t>(last - first);
    for (std::uint64_t i = n; i > 1; --i) {
      auto j = below(i);
      std::swap(first[i - 1], first[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t basis = 0xcbf29ce484222325ULL);

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

// Child seed for a named stage (e.g. "generate/doc-17/R1") under a root seed.
std::uint64_t derive_seed(std::uint64_t root, std::string_view name);

}  // namespace metaeval
