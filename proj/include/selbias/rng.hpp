#pragma once

#include <cstdint>
#include <random>

namespace selbias::rng {

/// splitmix64 finalizer (public domain); mixes one 64-bit word.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Stream purposes keep draws for unrelated jobs independent under one master seed.
enum class Stream : std::uint64_t {
  dataset = 1,  ///< synthetic regressor generation
  eps = 2,      ///< latent-noise draws
};

/// Counter-based seed derivation: any (grid, rep) slot is reproducible in
/// isolation, so replications can run in any order and on any thread.
constexpr std::uint64_t derive_seed(std::uint64_t master, Stream purpose,
                                    std::uint64_t grid_index = 0,
                                    std::uint64_t rep_index = 0) noexcept {
  std::uint64_t h = mix64(master);
  h = mix64(h ^ static_cast<std::uint64_t>(purpose));
  h = mix64(h ^ grid_index);
  return mix64(h ^ rep_index);
}

inline std::mt19937_64 make_engine(std::uint64_t master, Stream purpose,
                                   std::uint64_t grid_index = 0,
                                   std::uint64_t rep_index = 0) {
  return std::mt19937_64(derive_seed(master, purpose, grid_index, rep_index));
}

}  // namespace selbias::rng
