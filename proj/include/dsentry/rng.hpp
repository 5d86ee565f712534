#pragma once

#include <cstdint>
#include <random>

namespace dsentry {

/// SplitMix64 finalizer; used to derive independent engine seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Deterministic random stream identified by (seed, stream_id).
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. All distributions are implemented here rather than taken from
/// <random>, because the standard leaves their algorithms unspecified.
/// Normal variates use Box-Muller and therefore depend on the platform's
/// log/cos; everything else is bit-exact across platforms.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  /// Child stream keyed by `key`; independent of this stream's position.
  RngStream substream(std::uint64_t key) const;

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on (0, 1].
  double uniform_open_low();
  /// Uniform integer in [0, n). n must be > 0.
  std::uint64_t below(std::uint64_t n);
  double normal(double mean = 0.0, double std = 1.0);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

}  // namespace dsentry
