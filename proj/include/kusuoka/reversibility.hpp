#pragma once

#include "kusuoka/pifs.hpp"

namespace kusuoka {

struct ReversibilityScan {
    double max_discrepancy = 0.0;
    /// First string (by length, then lexicographically) attaining the maximum.
    OutcomeString worst_string;
    std::size_t n_max = 0;
    std::size_t strings_checked = 0;
};

/// max |P(C_s) - P(C_reverse(s))| over all strings of length 1..n_max.
/// EnumerationTooLarge when more than `limit` strings would be visited.
ReversibilityScan reversibility_scan(const Pifs &pifs, std::size_t n_max, std::size_t limit = 10'000'000);

struct FactIdentityReport {
    /// max over m of |p(I/d, L^m S) - p(Pi_S, L^m) / d|, L and S the large and
    /// small outcomes.
    double first_visit_residual = 0.0;
    /// max over strings up to factorization_length containing S and every
    /// position t holding S of |p(I/d, s) - p(I/d, s[0..t]) p(Pi_S, s[t+1..])|.
    double factorization_residual = 0.0;
    std::size_t m_max = 0;
    std::size_t factorization_length = 6;
    std::size_t identities_checked = 0;
    bool passed = false;
};

/// Checks the two identities behind reversibility of two-projection PVMs
/// against tol_rev. WrongPovmKind for other POVMs.
FactIdentityReport fact_identities_check(const Pifs &pifs, std::size_t m_max, std::size_t factorization_length = 6);

}  // namespace kusuoka
