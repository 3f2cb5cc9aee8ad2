#pragma once

#include <cstdint>

namespace unidemand {

// Counter-based uniform stream: the draw for (seed, stream, index) depends on
// nothing else, so Monte-Carlo results are independent of thread scheduling.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t keyed_bits(std::uint64_t seed, std::uint64_t stream,
                                std::uint64_t index) {
  return splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ index);
}

// Uniform on the open interval (0, 1).
inline double keyed_uniform(std::uint64_t seed, std::uint64_t stream,
                            std::uint64_t index) {
  const std::uint64_t bits = keyed_bits(seed, stream, index) >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

}  // namespace unidemand
