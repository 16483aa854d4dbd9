#pragma once

#include <cstdint>

namespace kusuoka {

/// Counter-based generator: the n-th draw of stream (seed, stream) is a pure
/// function of (seed, stream, n), so ensembles give the same numbers whatever
/// the order in which trajectories are scheduled.
class CounterRng {
  public:
    CounterRng(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next_u64();

    /// Uniform on (0, 1]; never returns exactly zero.
    double uniform_open_closed();

    /// Standard normal variate (Box-Muller).
    double normal();

    std::uint64_t counter() const { return counter_; }

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

}  // namespace kusuoka
