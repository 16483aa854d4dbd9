#include "kusuoka/rng.hpp"

#include <cmath>
#include <numbers>

namespace kusuoka {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(mix64(mix64(seed) ^ mix64(stream ^ 0x5851f42d4c957f2dULL))) {}

std::uint64_t CounterRng::next_u64() {
    // two rounds so that adjacent counters under one key decorrelate
    const std::uint64_t block = counter_++;
    return mix64(mix64(block ^ key_) + key_);
}

double CounterRng::uniform_open_closed() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double CounterRng::normal() {
    const double u1 = uniform_open_closed();
    const double u2 = uniform_open_closed();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace kusuoka
