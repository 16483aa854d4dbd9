#include <algorithm>

#include "kusuoka/error.hpp"
#include "kusuoka/tolerances.hpp"

namespace kusuoka {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::NotHermitian: return "NotHermitian";
        case ErrorKind::NotUnitary: return "NotUnitary";
        case ErrorKind::NotPsd: return "NotPsd";
        case ErrorKind::NoConvergence: return "NoConvergence";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::BadDimension: return "BadDimension";
        case ErrorKind::ZeroElement: return "ZeroElement";
        case ErrorKind::SumNotIdentity: return "SumNotIdentity";
        case ErrorKind::WrongPovmKind: return "WrongPovmKind";
        case ErrorKind::ZeroProbabilityBranch: return "ZeroProbabilityBranch";
        case ErrorKind::EmptyString: return "EmptyString";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::TooManyOutcomes: return "TooManyOutcomes";
        case ErrorKind::EnumerationTooLarge: return "EnumerationTooLarge";
        case ErrorKind::NoFixedPoint: return "NoFixedPoint";
        case ErrorKind::Inconsistent: return "Inconsistent";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::SchemaError: return "SchemaError";
        case ErrorKind::ValidationError: return "ValidationError";
    }
    return "Unknown";
}

bool is_guard(ErrorKind kind) {
    return kind == ErrorKind::TooManyOutcomes || kind == ErrorKind::EnumerationTooLarge;
}

const std::array<Tolerances::Entry, 14> &Tolerances::entries() {
    static const std::array<Entry, 14> table{{
        {"tol_unit", &Tolerances::tol_unit},
        {"tol_herm", &Tolerances::tol_herm},
        {"tol_psd", &Tolerances::tol_psd},
        {"tol_rank", &Tolerances::tol_rank},
        {"tol_recon", &Tolerances::tol_recon},
        {"tol_cluster", &Tolerances::tol_cluster},
        {"tol_orth", &Tolerances::tol_orth},
        {"tol_sum", &Tolerances::tol_sum},
        {"tol_trace", &Tolerances::tol_trace},
        {"tol_subspace", &Tolerances::tol_subspace},
        {"tol_pd", &Tolerances::tol_pd},
        {"tol_fix", &Tolerances::tol_fix},
        {"tol_rev", &Tolerances::tol_rev},
        {"zero_prob_threshold", &Tolerances::zero_prob_threshold},
    }};
    return table;
}

std::optional<Tolerances::Field> Tolerances::find(std::string_view name) {
    const auto &table = entries();
    auto it = std::find_if(table.begin(), table.end(), [&](const Entry &e) { return e.name == name; });
    if (it == table.end()) return std::nullopt;
    return it->field;
}

}  // namespace kusuoka
