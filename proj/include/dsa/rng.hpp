#pragma once

#include <cstdint>
#include <random>

namespace dsa {

using Rng = std::mt19937_64;

/// Independent random streams derived from one run seed. Each consumer of
/// randomness owns its own stream so that, e.g., the traffic trace does not
/// depend on which routing algorithm consumed agent draws.
enum class Stream : std::uint64_t {
  Topology = 1,
  PuActivity = 2,
  Traffic = 3,
  Agent = 4,
};

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline Rng make_rng(std::uint64_t seed, Stream stream, std::uint64_t index = 0) {
  std::uint64_t s = splitmix64(seed);
  s = splitmix64(s ^ static_cast<std::uint64_t>(stream));
  s = splitmix64(s ^ index);
  return Rng(s);
}

} // namespace dsa
