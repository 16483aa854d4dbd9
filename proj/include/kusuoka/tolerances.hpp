#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace kusuoka {

/// Numerical thresholds shared by every module. Field names match the keys
/// accepted in model files ("tol_unit", ...) and the `--tol-<name>` CLI flags.
struct Tolerances {
    double tol_unit = 1e-10;     // ||U*U - I||_HS
    double tol_herm = 1e-10;     // ||A - A*||_HS relative to ||A||_HS
    double tol_psd = 1e-10;      // eigenvalue floor for PSD checks and ranks
    double tol_rank = 1e-9;      // Gram-Schmidt residual below which a direction is dropped
    double tol_recon = 1e-9;     // reconstruction residuals and dual-route agreement
    double tol_cluster = 1e-8;   // eigenvalue clustering distance
    double tol_orth = 1e-9;      // orthonormality of bases
    double tol_sum = 1e-10;      // sum-to-identity and stochasticity
    double tol_trace = 1e-10;    // density matrix trace
    double tol_subspace = 1e-8;  // vector-in-subspace membership
    double tol_pd = 1e-10;       // positive-definiteness of stationary densities
    double tol_fix = 1e-10;      // fixed-point residual
    double tol_rev = 1e-10;      // reversal discrepancy
    double zero_prob_threshold = 1e-12;

    using Field = double Tolerances::*;
    struct Entry {
        std::string_view name;
        Field field;
    };
    static const std::array<Entry, 14> &entries();

    /// Pointer to the field called `name`, or nullopt for an unknown name.
    static std::optional<Field> find(std::string_view name);
};

}  // namespace kusuoka
