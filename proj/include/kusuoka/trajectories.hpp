#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "kusuoka/pifs.hpp"

namespace kusuoka {

struct Trajectory {
    OutcomeString outcomes;
    /// rho_0 = I/d followed by the post-measurement states; empty unless
    /// requested.
    std::vector<DensityMatrix> states;
    std::uint64_t seed = 0;
    std::size_t length = 0;
};

/// Samples n steps starting from I/d. Outcomes are drawn by inverse CDF
/// (right-closed intervals, index order) from stream `stream` of the
/// counter-based generator keyed by `seed`.
Trajectory sample_trajectory(const Pifs &pifs, std::size_t n, std::uint64_t seed, bool record_states = false,
                             std::uint64_t stream = 0);

/// Aggregated prefix statistics over independent trajectories. Trajectory t
/// uses stream t, so the result does not depend on the thread count.
struct EmpiricalStats {
    std::size_t sample_count = 0;
    std::size_t outcomes = 0;
    std::size_t prefix_len = 0;
    std::size_t traj_len = 0;
    /// cylinder_counts[n][index]: number of trajectories whose first n
    /// outcomes form the string OutcomeString::from_index(index, n, k).
    std::vector<std::vector<std::uint64_t>> cylinder_counts;
    std::vector<double> symbol_frequencies;  // fraction of all sampled outcomes
    std::vector<double> standard_errors;     // sqrt(p(1-p)/n) per symbol over the first outcome
    /// Number of trajectories that are constant at symbol i over their whole
    /// length.
    std::vector<std::uint64_t> constant_run_counts;
    /// Number of trajectories that are constant at symbol i from position
    /// tail_start onwards.
    std::vector<std::uint64_t> tail_counts;
    std::size_t tail_start = 0;

    std::uint64_t count(const OutcomeString &s) const;
    double frequency(const OutcomeString &s) const;
    /// sqrt(f(1-f)/sample_count) for the empirical frequency f of s.
    double standard_error(const OutcomeString &s) const;
};

struct SamplingOptions {
    std::size_t prefix_len = 1;
    std::size_t n_samples = 1000;
    std::size_t traj_len = 1;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    /// Start of the window used for tail_counts; traj_len / 2 when unset.
    std::optional<std::size_t> tail_start;
};

/// InvalidArgument unless 1 <= prefix_len <= traj_len and n_samples >= 1.
EmpiricalStats empirical_cylinder_freq(const Pifs &pifs, const SamplingOptions &options);

/// Convenience overload with default thread count and tail window.
EmpiricalStats empirical_cylinder_freq(const Pifs &pifs, std::size_t prefix_len, std::size_t n_samples,
                                       std::size_t traj_len, std::uint64_t seed, unsigned threads = 1);

/// (1/n) sum_t f(outcome_t) along one trajectory of length traj_len.
double birkhoff_average(const Pifs &pifs, const std::vector<double> &f, std::size_t traj_len, std::uint64_t seed);

}  // namespace kusuoka
