#pragma once

#include <cstdint>
#include <random>

namespace nbl {

// Independent substreams are derived from (master seed, owner id, purpose)
// so that adding or removing a consumer never perturbs another stream.
enum class StreamPurpose : std::uint64_t {
  signal = 1,
  delay = 2,
  adversary = 3,
  fixed_delay = 4,
  analysis = 5,
};

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t owner, StreamPurpose purpose);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t master, std::uint64_t owner, StreamPurpose purpose)
      : engine_(derive_seed(master, owner, purpose)) {}

  // Uniform on [0, 1) with 53 random bits; identical across standard libraries.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  // Uniform on {0, ..., n-1}; n > 0.
  std::uint64_t below(std::uint64_t n);
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace nbl
