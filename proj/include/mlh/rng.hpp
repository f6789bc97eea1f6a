#pragma once

#include <cstdint>
#include <random>

namespace mlh {

/// SplitMix64 finalizer; used to derive independent engine seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Per-stream random source. Streams with the same (seed, stream) are bit-identical,
/// so path i always sees the same numbers no matter which thread runs it.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream);

  /// Uniform on the open interval (0, 1) with 53 random bits.
  double uniform();
  /// Standard normal by Box-Muller (no cached second variate).
  double normal();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
};

}  // namespace mlh
