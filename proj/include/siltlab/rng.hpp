#pragma once

#include <cstdint>
#include <random>

namespace siltlab::rng {

// Generator scheme "sm64/mt19937_64/box-muller v1".
//
// Stream layout: stream i of a base seed s is seeded with
//   mix64(s + (i+1) * 0x9E3779B97F4A7C15)
// (splitmix64 with an O(1) jump to position i+1), so any stream of a batch
// can be reconstructed in isolation. Batch replica r draws its own seed as
// stream r of the batch seed; a replica that needs several independent
// generators (e.g. an X/Y path pair) splits again one level down.
// The engine is std::mt19937_64 (bit-exact per the standard) and normals
// come from a hand-rolled Box-Muller transform, so identical inputs give
// identical doubles on any conforming platform.

constexpr std::uint64_t kStreamGamma = 0x9E3779B97F4A7C15ull;

constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

constexpr std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
  return mix64(seed + (stream + 1) * kStreamGamma);
}

class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : engine_(seed) {}

  // Uniform on (0, 1]; never returns 0 so log() below is safe.
  double uniform_open() {
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
  }

  // Uniform on [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; two draws per uniform pair.
  double normal();

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// FNV-1a over a byte string; used for configuration fingerprints.
std::uint64_t fnv1a(const void* data, std::size_t n);

}  // namespace siltlab::rng
