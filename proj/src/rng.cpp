#include "dsentry/rng.hpp"

#include <cmath>
#include <numbers>

namespace dsentry {

namespace {

std::uint64_t engine_seed(std::uint64_t seed, std::uint64_t stream_id) {
  return splitmix64(seed ^ splitmix64(stream_id ^ 0x5DEECE66DULL));
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), engine_(engine_seed(seed, stream_id)) {}

RngStream RngStream::substream(std::uint64_t key) const {
  return RngStream(seed_, splitmix64(stream_id_ + 0x632BE59BD9B4E019ULL) ^ splitmix64(key));
}

double RngStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RngStream::uniform_open_low() {
  return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
}

std::uint64_t RngStream::below(std::uint64_t n) {
  // Rejection sampling removes modulo bias.
  const std::uint64_t limit = (~std::uint64_t{0} / n) * n;
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return x % n;
}

double RngStream::normal(double mean, double std) {
  const double u1 = uniform_open_low();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  return mean + std * r * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace dsentry
