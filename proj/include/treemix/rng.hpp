#pragma once

// Stateless counter-based uniforms: each draw is a hash of
// (seed, replicate, node, stream), so a field value never depends on the
// order in which nodes or replicates are visited.

#include <cstdint>

#include "treemix/tree.hpp"

namespace treemix::rng {

// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

constexpr std::uint64_t counter_bits(std::uint64_t seed, std::uint64_t replicate,
                                     const NodeId& v, std::uint64_t stream) {
  std::uint64_t h = mix64(seed);
  h = mix64(h ^ replicate);
  h = mix64(h ^ static_cast<std::uint64_t>(v.j));
  h = mix64(h ^ static_cast<std::uint64_t>(v.k));
  return mix64(h ^ stream);
}

// Uniform on (-1, 1), exactly symmetric: midpoints of 2^53 equal cells.
constexpr double symmetric_unit(std::uint64_t bits) {
  const auto v = static_cast<std::int64_t>(bits >> 11);
  return static_cast<double>(2 * v + 1 - (std::int64_t{1} << 53)) * 0x1.0p-53;
}

constexpr double uniform_pm1(std::uint64_t seed, std::uint64_t replicate, const NodeId& v,
                             std::uint64_t stream) {
  return symmetric_unit(counter_bits(seed, replicate, v, stream));
}

}  // namespace treemix::rng
