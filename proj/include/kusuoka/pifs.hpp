#pragma once

#include <cmath>
#include <compare>
#include <string>
#include <string_view>
#include <vector>

#include "kusuoka/quantum.hpp"

namespace kusuoka {

/// Finite string of measurement outcomes. Symbols are 0-based in memory and
/// 1-based in text ("1,2,1").
class OutcomeString {
  public:
    OutcomeString() = default;
    explicit OutcomeString(std::vector<int> symbols) : symbols_(std::move(symbols)) {}

    /// Parses "1,2,1" (1-based). An empty text is the empty string. Symbols
    /// outside 1..k raise InvalidArgument.
    static OutcomeString parse(std::string_view text, std::size_t k);

    /// Constant string of `n` copies of `symbol`.
    static OutcomeString repeat(int symbol, std::size_t n);

    /// The `index`-th string of length `n` in lexicographic order, i.e. the
    /// base-k digits of `index` with the first symbol most significant.
    static OutcomeString from_index(std::size_t index, std::size_t n, std::size_t k);

    std::size_t size() const { return symbols_.size(); }
    bool empty() const { return symbols_.empty(); }
    int operator[](std::size_t i) const { return symbols_[i]; }
    const std::vector<int> &symbols() const { return symbols_; }

    OutcomeString reversed() const;
    OutcomeString slice(std::size_t begin, std::size_t end) const;
    OutcomeString concat(const OutcomeString &other) const;

    std::string to_string() const;

    friend bool operator==(const OutcomeString &, const OutcomeString &) = default;
    friend auto operator<=>(const OutcomeString &, const OutcomeString &) = default;

  private:
    std::vector<int> symbols_;
};

/// Both evaluations of a Kusuoka cylinder probability.
struct CylinderProbability {
    double trace_formula = 0.0;
    double hs_formula = 0.0;
    double difference() const { return std::abs(trace_formula - hs_formula); }
};

/// Probabilities of every string of length 0..n_max: `by_length[n][index]`
/// with the index ordering of `OutcomeString::from_index`.
struct CylinderTable {
    std::size_t k = 0;
    std::vector<std::vector<double>> by_length;

    double at(const OutcomeString &s) const;
    std::size_t max_length() const { return by_length.size() - 1; }
};

/// Number of strings of length 0..n over k symbols; throws
/// EnumerationTooLarge beyond `limit`.
std::size_t enumeration_size(std::size_t k, std::size_t n_max, std::size_t limit);

/// The repeatedly measured unitary system: outcome i occurs with probability
/// tr(Pi_i U rho U*) and then rho -> K_i rho K_i* / p with K_i = sqrt(Pi_i) U.
class Pifs {
  public:
    /// Precomputes the Kraus factors and checks sum K_i* K_i = I and
    /// stationarity of I/d.
    Pifs(Unitary u, Povm povm, Tolerances tol = {});

    Eigen::Index dim() const { return u_.dim(); }
    std::size_t outcomes() const { return povm_.size(); }
    const Unitary &unitary() const { return u_; }
    const Povm &povm() const { return povm_; }
    const Tolerances &tolerances() const { return tol_; }
    double zero_prob_threshold() const { return tol_.zero_prob_threshold; }

    const std::vector<ComplexMatrix> &kraus() const { return kraus_; }
    const ComplexMatrix &kraus(std::size_t i) const { return kraus_.at(i); }
    const std::vector<ComplexMatrix> &sqrt_elements() const { return sqrt_elements_; }

    /// Operators U* sqrt(Pi_i) generating the Kusuoka measure.
    std::vector<ComplexMatrix> kusuoka_family() const;

    /// p_i(rho), clamped to [0, 1].
    double outcome_prob(const DensityMatrix &rho, int i) const;

    /// All p_i(rho) at once (one conjugation by U).
    std::vector<double> outcome_probs(const DensityMatrix &rho) const;

    /// F_i(rho); ZeroProbabilityBranch when p_i(rho) <= zero_prob_threshold.
    DensityMatrix evolve(const DensityMatrix &rho, int i) const;

    /// tr(M rho M*) with M = K_{i_n} ... K_{i_1}; 1 for the empty string.
    double string_prob(const DensityMatrix &rho, const OutcomeString &s) const;

    /// Same probability built step by step from outcome_prob and evolve,
    /// returning 0 as soon as a branch falls below zero_prob_threshold.
    double string_prob_recursive(const DensityMatrix &rho, const OutcomeString &s) const;

    /// P_*(C_s) by the trace formula and by (1/d)||U* sqrt(Pi_{i_1}) ... U* sqrt(Pi_{i_n})||_HS^2.
    CylinderProbability kusuoka_cylinder(const OutcomeString &s) const;

    /// P_*(C_s); throws Inconsistent if the two formulas disagree by more
    /// than tol_recon.
    double kusuoka_cylinder_prob(const OutcomeString &s) const;

    /// P_*(C_s) for every string up to length n_max, sharing prefix
    /// products. Guarded by `limit` on the number of strings.
    CylinderTable cylinder_table(std::size_t n_max, std::size_t limit = 10'000'000) const;

    /// Max |sum_i K_i* K_i - I|_HS and |sum_i K_i rho_* K_i* - rho_*|_HS.
    double normalization_defect() const;
    double stationarity_defect() const;

  private:
    void check_symbol(int i) const;
    void check_dim(const DensityMatrix &rho) const;

    Unitary u_;
    Povm povm_;
    Tolerances tol_;
    std::vector<ComplexMatrix> sqrt_elements_;
    std::vector<ComplexMatrix> kraus_;
};

}  // namespace kusuoka
