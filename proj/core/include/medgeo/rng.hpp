#pragma once

#include <cmath>
#include <cstdint>

#include "medgeo/errors.hpp"

namespace medgeo {

/// Splittable counter-style generator (splitmix64 core). The state advances
/// by a fixed odd constant, so every output is a pure function of
/// (seed, stream_id, draw index); distinct stream ids give independent-quality
/// streams that can be handed to worker threads without coordination.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id)
      : state_(derive(seed, stream_id)) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  /// Uniform draw strictly inside (0,1); never returns an endpoint, so logs
  /// and reciprocals of draws are always finite.
  double uniform01() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform_real(double lo, double hi) {
    if (lo > hi) throw DomainError("uniform_real: lo > hi");
    return lo + uniform01() * (hi - lo);
  }

  /// Uniform over the inclusive integer range {lo, ..., hi}, unbiased via
  /// rejection.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    if (lo > hi) throw DomainError("uniform_int: lo > hi");
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1ULL;
    if (span == 0) return static_cast<std::int64_t>(next_u64());  // full range
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t x = next_u64();
    while (x >= limit) x = next_u64();
    return lo + static_cast<std::int64_t>(x % span);
  }

  /// Standard normal via Box-Muller; consumes two uniforms per draw.
  double std_normal() {
    const double u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  /// Inverse gamma with shape 1 and scale 1: reciprocal of a unit-rate
  /// exponential. CDF is exp(-1/x).
  double inv_gamma_1_1() {
    const double e = -std::log(uniform01());
    return 1.0 / e;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream_id) {
    // Two mix rounds decorrelate nearby (seed, stream) pairs.
    return mix(mix(seed + 0x632BE59BD9B4E019ULL) ^
               mix(stream_id + 0x9E3779B97F4A7C15ULL));
  }

  std::uint64_t state_;
};

}  // namespace medgeo
