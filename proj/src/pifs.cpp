#include "kusuoka/pifs.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

namespace kusuoka {

namespace {

double clamp_prob(double p) { return std::clamp(p, 0.0, 1.0); }

}  // namespace

// ---------------------------------------------------------------------------
// OutcomeString

OutcomeString OutcomeString::parse(std::string_view text, std::size_t k) {
    std::vector<int> symbols;
    std::size_t pos = 0;
    auto trim = [](std::string_view s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
        return s;
    };
    if (trim(text).empty()) return OutcomeString{};
    while (pos <= text.size()) {
        const std::size_t comma = std::min(text.find(',', pos), text.size());
        const std::string_view token = trim(text.substr(pos, comma - pos));
        int value = 0;
        const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
        if (token.empty() || ec != std::errc{} || end != token.data() + token.size()) {
            throw Error(ErrorKind::InvalidArgument, "bad outcome symbol '" + std::string(token) + "'");
        }
        if (value < 1 || static_cast<std::size_t>(value) > k) {
            throw Error(ErrorKind::InvalidArgument,
                        "outcome " + std::to_string(value) + " outside 1.." + std::to_string(k));
        }
        symbols.push_back(value - 1);
        pos = comma + 1;
    }
    return OutcomeString(std::move(symbols));
}

OutcomeString OutcomeString::repeat(int symbol, std::size_t n) {
    return OutcomeString(std::vector<int>(n, symbol));
}

OutcomeString OutcomeString::from_index(std::size_t index, std::size_t n, std::size_t k) {
    std::vector<int> symbols(n);
    for (std::size_t pos = n; pos-- > 0;) {
        symbols[pos] = static_cast<int>(index % k);
        index /= k;
    }
    return OutcomeString(std::move(symbols));
}

OutcomeString OutcomeString::reversed() const {
    return OutcomeString(std::vector<int>(symbols_.rbegin(), symbols_.rend()));
}

OutcomeString OutcomeString::slice(std::size_t begin, std::size_t end) const {
    end = std::min(end, symbols_.size());
    begin = std::min(begin, end);
    return OutcomeString(std::vector<int>(symbols_.begin() + static_cast<std::ptrdiff_t>(begin),
                                          symbols_.begin() + static_cast<std::ptrdiff_t>(end)));
}

OutcomeString OutcomeString::concat(const OutcomeString &other) const {
    std::vector<int> out = symbols_;
    out.insert(out.end(), other.symbols_.begin(), other.symbols_.end());
    return OutcomeString(std::move(out));
}

std::string OutcomeString::to_string() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
        if (i) out << ',';
        out << symbols_[i] + 1;
    }
    return out.str();
}

double CylinderTable::at(const OutcomeString &s) const {
    std::size_t index = 0;
    for (int sym : s.symbols()) index = index * k + static_cast<std::size_t>(sym);
    return by_length.at(s.size()).at(index);
}

std::size_t enumeration_size(std::size_t k, std::size_t n_max, std::size_t limit) {
    std::size_t total = 0;
    std::size_t level = 1;
    for (std::size_t n = 0; n <= n_max; ++n) {
        total += level;
        if (total > limit) {
            throw Error(ErrorKind::EnumerationTooLarge, "more than " + std::to_string(limit) +
                                                            " strings up to length " + std::to_string(n_max));
        }
        if (n < n_max) {
            if (level > limit / std::max<std::size_t>(k, 1)) {
                throw Error(ErrorKind::EnumerationTooLarge, "more than " + std::to_string(limit) + " strings");
            }
            level *= k;
        }
    }
    return total;
}

// ---------------------------------------------------------------------------
// Pifs

Pifs::Pifs(Unitary u, Povm povm, Tolerances tol) : u_(std::move(u)), povm_(std::move(povm)), tol_(tol) {
    if (u_.dim() != povm_.dim()) {
        throw Error(ErrorKind::DimensionMismatch, "unitary is " + std::to_string(u_.dim()) + "-dimensional, POVM " +
                                                      std::to_string(povm_.dim()) + "-dimensional");
    }
    for (const auto &e : povm_.elements()) {
        sqrt_elements_.push_back(psd_sqrt(e, tol_));
        kraus_.push_back(sqrt_elements_.back() * u_.matrix());
    }
    if (normalization_defect() > tol_.tol_recon) {
        throw Error(ErrorKind::Inconsistent, "Kraus factors do not resolve the identity");
    }
    if (stationarity_defect() > tol_.tol_recon) {
        throw Error(ErrorKind::Inconsistent, "maximally mixed state is not stationary");
    }
}

std::vector<ComplexMatrix> Pifs::kusuoka_family() const {
    std::vector<ComplexMatrix> family;
    for (const auto &k : kraus_) family.push_back(k.adjoint());
    return family;
}

double Pifs::normalization_defect() const {
    const Eigen::Index d = dim();
    ComplexMatrix sum = ComplexMatrix::Zero(d, d);
    for (const auto &k : kraus_) sum += k.adjoint() * k;
    return (sum - ComplexMatrix::Identity(d, d)).norm();
}

double Pifs::stationarity_defect() const {
    const Eigen::Index d = dim();
    const ComplexMatrix rho = ComplexMatrix::Identity(d, d) / static_cast<double>(d);
    ComplexMatrix sum = ComplexMatrix::Zero(d, d);
    for (const auto &k : kraus_) sum += k * rho * k.adjoint();
    return (sum - rho).norm();
}

void Pifs::check_symbol(int i) const {
    if (i < 0 || static_cast<std::size_t>(i) >= outcomes()) {
        throw Error(ErrorKind::InvalidArgument, "outcome index " + std::to_string(i + 1) + " out of range");
    }
}

void Pifs::check_dim(const DensityMatrix &rho) const {
    if (rho.dim() != dim()) {
        throw Error(ErrorKind::DimensionMismatch, "state dimension " + std::to_string(rho.dim()) +
                                                      " != " + std::to_string(dim()));
    }
}

double Pifs::outcome_prob(const DensityMatrix &rho, int i) const {
    check_dim(rho);
    check_symbol(i);
    const ComplexMatrix &k = kraus_[static_cast<std::size_t>(i)];
    return clamp_prob((k * rho.matrix() * k.adjoint()).trace().real());
}

std::vector<double> Pifs::outcome_probs(const DensityMatrix &rho) const {
    check_dim(rho);
    const ComplexMatrix evolved = u_.matrix() * rho.matrix() * u_.matrix().adjoint();
    std::vector<double> probs;
    probs.reserve(outcomes());
    for (const auto &e : povm_.elements()) {
        // tr(Pi sigma) for Hermitian Pi: sum of elementwise conj(Pi) * sigma
        probs.push_back(clamp_prob((e.conjugate().cwiseProduct(evolved)).sum().real()));
    }
    return probs;
}

DensityMatrix Pifs::evolve(const DensityMatrix &rho, int i) const {
    check_dim(rho);
    check_symbol(i);
    const ComplexMatrix &k = kraus_[static_cast<std::size_t>(i)];
    const ComplexMatrix sigma = k * rho.matrix() * k.adjoint();
    const double p = sigma.trace().real();
    if (!(p > tol_.zero_prob_threshold)) {
        throw Error(ErrorKind::ZeroProbabilityBranch,
                    "outcome " + std::to_string(i + 1) + " has probability " + std::to_string(p));
    }
    return DensityMatrix::trusted(sigma / p);
}

double Pifs::string_prob(const DensityMatrix &rho, const OutcomeString &s) const {
    check_dim(rho);
    if (s.empty()) return 1.0;
    ComplexMatrix m = ComplexMatrix::Identity(dim(), dim());
    for (int sym : s.symbols()) {
        check_symbol(sym);
        m = kraus_[static_cast<std::size_t>(sym)] * m;
    }
    return clamp_prob((m * rho.matrix() * m.adjoint()).trace().real());
}

double Pifs::string_prob_recursive(const DensityMatrix &rho, const OutcomeString &s) const {
    check_dim(rho);
    double p = 1.0;
    DensityMatrix state = rho;
    for (std::size_t t = 0; t < s.size(); ++t) {
        const double step = outcome_prob(state, s[t]);
        if (!(step > tol_.zero_prob_threshold)) return 0.0;
        p *= step;
        if (t + 1 < s.size()) state = evolve(state, s[t]);
    }
    return p;
}

CylinderProbability Pifs::kusuoka_cylinder(const OutcomeString &s) const {
    const Eigen::Index d = dim();
    CylinderProbability out;
    out.trace_formula = string_prob(maximally_mixed(d), s);

    // U* sqrt(Pi_{i_1}) ... U* sqrt(Pi_{i_n}), multiplied left to right
    ComplexMatrix a = ComplexMatrix::Identity(d, d);
    for (int sym : s.symbols()) {
        a = a * (u_.matrix().adjoint() * sqrt_elements_[static_cast<std::size_t>(sym)]);
    }
    out.hs_formula = clamp_prob(a.squaredNorm() / static_cast<double>(d));
    return out;
}

double Pifs::kusuoka_cylinder_prob(const OutcomeString &s) const {
    const auto both = kusuoka_cylinder(s);
    if (both.difference() > tol_.tol_recon) {
        throw Error(ErrorKind::Inconsistent, "trace and Hilbert-Schmidt formulas differ by " +
                                                 std::to_string(both.difference()) + " on " + s.to_string());
    }
    return both.trace_formula;
}

CylinderTable Pifs::cylinder_table(std::size_t n_max, std::size_t limit) const {
    const std::size_t k = outcomes();
    enumeration_size(k, n_max, limit);
    const Eigen::Index d = dim();
    const double inv_d = 1.0 / static_cast<double>(d);

    CylinderTable table;
    table.k = k;
    table.by_length.resize(n_max + 1);
    std::size_t level = 1;
    for (std::size_t n = 0; n <= n_max; ++n) {
        table.by_length[n].assign(level, 0.0);
        level *= k;
    }
    table.by_length[0][0] = 1.0;

    // depth-first over the prefix tree; stack[n] holds K_{i_n} ... K_{i_1}
    std::vector<ComplexMatrix> stack(n_max + 1);
    stack[0] = ComplexMatrix::Identity(d, d);
    auto visit = [&](auto &&self, std::size_t depth, std::size_t index) -> void {
        if (depth == n_max) return;
        for (std::size_t j = 0; j < k; ++j) {
            stack[depth + 1].noalias() = kraus_[j] * stack[depth];
            const std::size_t child = index * k + j;
            table.by_length[depth + 1][child] = clamp_prob(stack[depth + 1].squaredNorm() * inv_d);
            self(self, depth + 1, child);
        }
    };
    visit(visit, 0, 0);
    return table;
}

}  // namespace kusuoka
