#include "kusuoka/trajectories.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "kusuoka/rng.hpp"

namespace kusuoka {

namespace {

int draw_outcome(const Pifs &pifs, const DensityMatrix &state, CounterRng &rng) {
    std::vector<double> probs = pifs.outcome_probs(state);
    double total = 0.0;
    for (double &p : probs) {
        if (p <= pifs.zero_prob_threshold()) p = 0.0;
        total += p;
    }
    if (std::abs(total - 1.0) > pifs.tolerances().tol_sum) {
        throw Error(ErrorKind::Inconsistent, "outcome probabilities sum to " + std::to_string(total));
    }
    const double u = rng.uniform_open_closed() * total;
    double cumulative = 0.0;
    int last_positive = 0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] == 0.0) continue;
        last_positive = static_cast<int>(i);
        cumulative += probs[i];
        if (u <= cumulative) return static_cast<int>(i);
    }
    return last_positive;
}

struct LocalCounts {
    std::vector<std::vector<std::uint64_t>> cylinders;
    std::vector<std::uint64_t> symbols;
    std::vector<std::uint64_t> constant_runs;
    std::vector<std::uint64_t> tails;
};

LocalCounts make_counts(std::size_t k, std::size_t prefix_len) {
    LocalCounts c;
    c.cylinders.resize(prefix_len + 1);
    std::size_t level = 1;
    for (std::size_t n = 0; n <= prefix_len; ++n) {
        c.cylinders[n].assign(level, 0);
        level *= k;
    }
    c.symbols.assign(k, 0);
    c.constant_runs.assign(k, 0);
    c.tails.assign(k, 0);
    return c;
}

void accumulate(LocalCounts &c, const OutcomeString &s, std::size_t k, std::size_t prefix_len,
                std::size_t tail_start) {
    std::size_t index = 0;
    c.cylinders[0][0] += 1;
    for (std::size_t n = 1; n <= prefix_len; ++n) {
        index = index * k + static_cast<std::size_t>(s[n - 1]);
        c.cylinders[n][index] += 1;
    }
    for (int sym : s.symbols()) c.symbols[static_cast<std::size_t>(sym)] += 1;

    const auto &sym = s.symbols();
    const int first = sym.front();
    if (std::all_of(sym.begin(), sym.end(), [&](int x) { return x == first; })) {
        c.constant_runs[static_cast<std::size_t>(first)] += 1;
    }
    const int last = sym.back();
    if (std::all_of(sym.begin() + static_cast<std::ptrdiff_t>(tail_start), sym.end(),
                    [&](int x) { return x == last; })) {
        c.tails[static_cast<std::size_t>(last)] += 1;
    }
}

}  // namespace

Trajectory sample_trajectory(const Pifs &pifs, std::size_t n, std::uint64_t seed, bool record_states,
                             std::uint64_t stream) {
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "trajectory length must be at least 1");
    CounterRng rng(seed, stream);
    Trajectory out;
    out.seed = seed;
    out.length = n;
    DensityMatrix state = maximally_mixed(pifs.dim());
    if (record_states) {
        out.states.reserve(n + 1);
        out.states.push_back(state);
    }
    std::vector<int> symbols;
    symbols.reserve(n);
    for (std::size_t t = 0; t < n; ++t) {
        const int i = draw_outcome(pifs, state, rng);
        symbols.push_back(i);
        state = pifs.evolve(state, i);
        if (record_states) out.states.push_back(state);
    }
    out.outcomes = OutcomeString(std::move(symbols));
    return out;
}

std::uint64_t EmpiricalStats::count(const OutcomeString &s) const {
    if (s.size() > prefix_len) throw Error(ErrorKind::InvalidArgument, "string longer than the recorded prefix");
    std::size_t index = 0;
    for (int sym : s.symbols()) index = index * outcomes + static_cast<std::size_t>(sym);
    return cylinder_counts.at(s.size()).at(index);
}

double EmpiricalStats::frequency(const OutcomeString &s) const {
    return static_cast<double>(count(s)) / static_cast<double>(sample_count);
}

double EmpiricalStats::standard_error(const OutcomeString &s) const {
    const double f = frequency(s);
    return std::sqrt(f * (1.0 - f) / static_cast<double>(sample_count));
}

EmpiricalStats empirical_cylinder_freq(const Pifs &pifs, const SamplingOptions &options) {
    if (options.prefix_len < 1 || options.prefix_len > options.traj_len) {
        throw Error(ErrorKind::InvalidArgument, "prefix length must lie in 1..trajectory length");
    }
    if (options.n_samples < 1) throw Error(ErrorKind::InvalidArgument, "need at least one sample");
    const std::size_t k = pifs.outcomes();
    enumeration_size(k, options.prefix_len, 10'000'000);
    const std::size_t tail_start = std::min(options.tail_start.value_or(options.traj_len / 2), options.traj_len - 1);

    const unsigned threads =
        static_cast<unsigned>(std::clamp<std::size_t>(options.threads, 1, options.n_samples));
    std::vector<LocalCounts> partial(threads, make_counts(k, options.prefix_len));
    std::vector<std::exception_ptr> errors(threads);
    auto work = [&](unsigned w) {
        try {
            for (std::size_t t = w; t < options.n_samples; t += threads) {
                const auto traj = sample_trajectory(pifs, options.traj_len, options.seed, false, t);
                accumulate(partial[w], traj.outcomes, k, options.prefix_len, tail_start);
            }
        } catch (...) {
            errors[w] = std::current_exception();
        }
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
        for (auto &th : pool) th.join();
    }
    for (const auto &e : errors) {
        if (e) std::rethrow_exception(e);
    }

    LocalCounts total = make_counts(k, options.prefix_len);
    for (const auto &p : partial) {
        for (std::size_t n = 0; n < total.cylinders.size(); ++n) {
            for (std::size_t i = 0; i < total.cylinders[n].size(); ++i) total.cylinders[n][i] += p.cylinders[n][i];
        }
        for (std::size_t i = 0; i < k; ++i) {
            total.symbols[i] += p.symbols[i];
            total.constant_runs[i] += p.constant_runs[i];
            total.tails[i] += p.tails[i];
        }
    }

    EmpiricalStats stats;
    stats.sample_count = options.n_samples;
    stats.outcomes = k;
    stats.prefix_len = options.prefix_len;
    stats.traj_len = options.traj_len;
    stats.tail_start = tail_start;
    stats.cylinder_counts = std::move(total.cylinders);
    stats.constant_run_counts = std::move(total.constant_runs);
    stats.tail_counts = std::move(total.tails);
    const double steps = static_cast<double>(options.n_samples) * static_cast<double>(options.traj_len);
    const double n = static_cast<double>(options.n_samples);
    for (std::size_t i = 0; i < k; ++i) {
        stats.symbol_frequencies.push_back(static_cast<double>(total.symbols[i]) / steps);
        const double f = static_cast<double>(stats.cylinder_counts[1][i]) / n;
        stats.standard_errors.push_back(std::sqrt(f * (1.0 - f) / n));
    }
    return stats;
}

EmpiricalStats empirical_cylinder_freq(const Pifs &pifs, std::size_t prefix_len, std::size_t n_samples,
                                       std::size_t traj_len, std::uint64_t seed, unsigned threads) {
    SamplingOptions options;
    options.prefix_len = prefix_len;
    options.n_samples = n_samples;
    options.traj_len = traj_len;
    options.seed = seed;
    options.threads = threads;
    return empirical_cylinder_freq(pifs, options);
}

double birkhoff_average(const Pifs &pifs, const std::vector<double> &f, std::size_t traj_len, std::uint64_t seed) {
    if (f.size() != pifs.outcomes()) {
        throw Error(ErrorKind::DimensionMismatch, "observable needs one weight per outcome");
    }
    const auto traj = sample_trajectory(pifs, traj_len, seed);
    double sum = 0.0;
    for (int sym : traj.outcomes.symbols()) sum += f[static_cast<std::size_t>(sym)];
    return sum / static_cast<double>(traj_len);
}

}  // namespace kusuoka
