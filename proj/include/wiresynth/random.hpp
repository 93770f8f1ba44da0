#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace wiresynth {

// The standard distributions are implementation-defined, so scene bytes would
// differ between standard libraries. These helpers draw directly from the
// engine's raw output instead.

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Stable per-item seed for item `id` under `master`.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t id) {
  return splitmix64(splitmix64(master) ^ (id * 0xd1342543de82ef95ULL + 1));
}

using Engine = std::mt19937_64;

/// Uniform in [0, 1].
inline double uniform_closed(Engine& engine) {
  return static_cast<double>(engine() >> 11) * (1.0 / 9007199254740991.0);
}

/// Uniform in [0, n), unbiased by rejection.
inline std::uint64_t uniform_index(Engine& engine, std::uint64_t n) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = engine();
  } while (x >= limit);
  return x % n;
}

inline double uniform_range(Engine& engine, double lo, double hi) {
  return lo + (hi - lo) * uniform_closed(engine);
}

}  // namespace wiresynth
