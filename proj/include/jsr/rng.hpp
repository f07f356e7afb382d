#pragma once

#include <cstdint>
#include <random>

namespace jsr {

// Deterministic random stream. The draw sequence is a pure function of the
// seed, with a fixed consumption order:
//   - uniform(): one engine draw, top 53 bits -> [0, 1)
//   - normal(): Marsaglia polar transform; a rejection round consumes two
//     uniforms, and each accepted round yields two normals (the second is
//     cached and returned by the next call without touching the engine)
//   - uniform_index(n): engine draws rejected until unbiased, then mod n
// Streams are reproducible across runs and thread counts for a given build;
// cross-platform bit-exactness is not promised and nothing depends on it.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}

  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double normal();

  // Unbiased integer in [0, n); n must be >= 1.
  std::uint64_t uniform_index(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace jsr
