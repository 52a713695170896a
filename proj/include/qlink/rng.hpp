#pragma once

#include <cstdint>

namespace qlink {

// SplitMix64 streams keyed per trial: the starting state is a mixed hash of
// (seed, trial index), so every trial draws from its own stream and results
// do not depend on execution order or thread count.
class TrialRng {
 public:
  TrialRng(std::uint64_t seed, std::uint64_t trial) {
    state_ = mix(seed ^ mix(trial + 0x9e3779b97f4a7c15ull));
  }

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1) with 53 random bits
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace qlink
