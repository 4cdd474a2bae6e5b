#pragma once

#include <cstdint>

namespace owm {

// Counter-based randomness: every draw is a pure function of (seed, replica, time,
// draw kind), so traces are reproducible regardless of evaluation order and replicas
// can run concurrently without shared state.
enum class DrawKind : std::uint64_t { UBucket = 1, AuxCoin = 2, FallbackCoin = 3 };

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::uint64_t draw_bits(std::uint64_t seed, std::uint64_t replica, std::uint64_t time,
                               DrawKind kind) {
  std::uint64_t h = mix64(seed);
  h = mix64(h ^ (replica * 0xd6e8feb86659fd93ull));
  h = mix64(h ^ (time * 0xa0761d6478bd642full));
  h = mix64(h ^ static_cast<std::uint64_t>(kind));
  return h;
}

// Uniform double in [0, 1).
inline double draw_unit(std::uint64_t seed, std::uint64_t replica, std::uint64_t time,
                        DrawKind kind) {
  return static_cast<double>(draw_bits(seed, replica, time, kind) >> 11) * 0x1.0p-53;
}

}  // namespace owm
