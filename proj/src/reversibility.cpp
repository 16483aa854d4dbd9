#include "kusuoka/reversibility.hpp"

#include <algorithm>
#include <cmath>

namespace kusuoka {

ReversibilityScan reversibility_scan(const Pifs &pifs, std::size_t n_max, std::size_t limit) {
    const CylinderTable table = pifs.cylinder_table(n_max, limit);
    const std::size_t k = pifs.outcomes();

    ReversibilityScan out;
    out.n_max = n_max;
    for (std::size_t n = 1; n <= n_max; ++n) {
        const auto &row = table.by_length[n];
        for (std::size_t index = 0; index < row.size(); ++index) {
            std::size_t reversed = 0;
            for (std::size_t rest = index, pos = 0; pos < n; ++pos, rest /= k) {
                reversed = reversed * k + rest % k;
            }
            ++out.strings_checked;
            const double gap = std::abs(row[index] - row[reversed]);
            if (out.strings_checked == 1 || gap > out.max_discrepancy) {
                out.max_discrepancy = gap;
                out.worst_string = OutcomeString::from_index(index, n, k);
            }
        }
    }
    return out;
}

FactIdentityReport fact_identities_check(const Pifs &pifs, std::size_t m_max, std::size_t factorization_length) {
    const auto &view = pifs.povm().kind().two_proj;
    if (!view) throw Error(ErrorKind::WrongPovmKind, "identities hold for two-projection PVMs only");
    const int large = static_cast<int>(view->large);
    const int small = static_cast<int>(view->small);
    const Eigen::Index d = pifs.dim();
    const DensityMatrix rho = maximally_mixed(d);
    const DensityMatrix pi_small = DensityMatrix::trusted(pifs.povm().element(view->small));

    FactIdentityReport report;
    report.m_max = m_max;
    report.factorization_length = factorization_length;

    for (std::size_t m = 0; m <= m_max; ++m) {
        const OutcomeString run = OutcomeString::repeat(large, m);
        const double lhs = pifs.string_prob(rho, run.concat(OutcomeString::repeat(small, 1)));
        const double rhs = pifs.string_prob(pi_small, run) / static_cast<double>(d);
        report.first_visit_residual = std::max(report.first_visit_residual, std::abs(lhs - rhs));
        ++report.identities_checked;
    }

    enumeration_size(pifs.outcomes(), factorization_length, 10'000'000);
    for (std::size_t n = 1; n <= factorization_length; ++n) {
        std::size_t count = 1;
        for (std::size_t j = 0; j < n; ++j) count *= 2;
        for (std::size_t index = 0; index < count; ++index) {
            std::vector<int> symbols(n);
            for (std::size_t pos = 0; pos < n; ++pos) {
                symbols[pos] = ((index >> (n - 1 - pos)) & 1U) ? small : large;
            }
            const OutcomeString s(std::move(symbols));
            const double whole = pifs.string_prob(rho, s);
            for (std::size_t t = 0; t < n; ++t) {
                if (s[t] != small) continue;
                const double split = pifs.string_prob(rho, s.slice(0, t + 1)) * pifs.string_prob(pi_small, s.slice(t + 1, n));
                report.factorization_residual = std::max(report.factorization_residual, std::abs(whole - split));
                ++report.identities_checked;
            }
        }
    }

    const double tol = pifs.tolerances().tol_rev;
    report.passed = report.first_visit_residual <= tol && report.factorization_residual <= tol;
    return report;
}

}  // namespace kusuoka
