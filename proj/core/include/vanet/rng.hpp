#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace vanet {

/// Identifiers for the independent random streams a run draws from. Keeping
/// them separate means, e.g., changing the traffic pattern never perturbs the
/// vehicle trajectories of the same seed.
enum class StreamId : std::uint64_t {
  Placement = 1,
  Mobility = 2,
  Traffic = 3,
  Channel = 4,
  Analytics = 5,
};

std::uint64_t splitmix64(std::uint64_t x);

/// Seeded 64-bit Mersenne Twister with portable conversions.
///
/// The standard distributions are implementation-defined, so the stream
/// converts raw engine output itself; results are identical on every
/// conforming platform.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0);
  RandomStream(std::uint64_t seed, StreamId stream)
      : RandomStream(seed, static_cast<std::uint64_t>(stream)) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n). n must be positive.
  std::size_t index(std::size_t n);

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace vanet
