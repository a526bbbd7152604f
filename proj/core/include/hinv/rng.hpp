#pragma once

#include <cstdint>

namespace hinv {

/// Counter-based standard normal draws keyed by (seed, path, step, component).
///
/// Every draw is a pure function of its key, so Monte-Carlo paths can be
/// generated in any order or in parallel and still reproduce bit-exactly.
class CounterNormal {
 public:
  explicit CounterNormal(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }
  double operator()(std::uint64_t path, std::uint64_t step, std::uint64_t component) const;

 private:
  std::uint64_t seed_;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

}  // namespace hinv
