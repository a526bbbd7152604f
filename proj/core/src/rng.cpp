#include "hinv/rng.hpp"

#include <cmath>
#include <numbers>

namespace hinv {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {

// Uniform in (0, 1], never zero so log() is safe.
double to_unit(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

}  // namespace

double CounterNormal::operator()(std::uint64_t path, std::uint64_t step,
                                 std::uint64_t component) const {
  std::uint64_t key = mix64(seed_);
  key = mix64(key ^ path);
  key = mix64(key ^ step);
  key = mix64(key ^ component);
  const double u1 = to_unit(key);
  const double u2 = to_unit(mix64(key ^ 0xd1b54a32d192ed03ULL));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace hinv
