#include <chrono>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "kusuoka/ergodicity.hpp"
#include "kusuoka/general_kusuoka.hpp"
#include "kusuoka/markov.hpp"
#include "kusuoka/model_io.hpp"
#include "kusuoka/reversibility.hpp"
#include "kusuoka/trajectories.hpp"

namespace {

using namespace kusuoka;

enum class Format { Auto, Json, Csv };

struct GlobalOptions {
    std::string output = "auto";
    unsigned threads = 1;
    std::map<std::string, double> tolerance_flags;
};

std::string flag_for(std::string_view name) {
    std::string flag(name);
    if (flag.rfind("tol_", 0) == 0) flag.erase(0, 4);
    for (char &c : flag) {
        if (c == '_') c = '-';
    }
    return "--tol-" + flag;
}

std::string fmt(double x) {
    std::ostringstream out;
    out << std::setprecision(std::numeric_limits<double>::max_digits10) << x;
    return out.str();
}

Json subspace_to_json(const Subspace &w) {
    Json basis = Json::array();
    for (Eigen::Index c = 0; c < w.dim(); ++c) basis.push_back(vector_to_json(w.basis().col(c)));
    return Json{{"dimension", w.dim()}, {"basis", basis}};
}

Json one_based(const std::vector<int> &indices) {
    Json out = Json::array();
    for (int i : indices) out.push_back(i + 1);
    return out;
}

Json witness_to_json(const ErgodicityWitness &witness) {
    return std::visit(
        [](const auto &w) -> Json {
            using T = std::decay_t<decltype(w)>;
            if constexpr (std::is_same_v<T, std::monostate>) {
                return nullptr;
            } else if constexpr (std::is_same_v<T, SubspaceWitness>) {
                return Json{{"type", "subspace"}, {"subspace", subspace_to_json(w.subspace)}};
            } else if constexpr (std::is_same_v<T, IndexSubsetWitness>) {
                return Json{{"type", "index_subset"},
                            {"subset", one_based(w.subset)},
                            {"subspace", subspace_to_json(w.subspace)}};
            } else {
                return Json{{"type", "eigenvector"},
                            {"vector", vector_to_json(w.v)},
                            {"eigenvalue", complex_to_json(w.eigenvalue)}};
            }
        },
        witness);
}

class Runner {
  public:
    Runner(const GlobalOptions &global, std::string command, std::string model_path)
        : global_(global), command_(std::move(command)), model_path_(std::move(model_path)),
          start_(std::chrono::steady_clock::now()) {}

    const Model &model() {
        if (!model_) {
            Json overrides = Json::object();
            for (const auto &[name, value] : global_.tolerance_flags) overrides[name] = value;
            model_ = load_model(model_path_, overrides);
        }
        return *model_;
    }

    Format format(Format natural) const {
        if (global_.output == "json") return Format::Json;
        if (global_.output == "csv") return Format::Csv;
        return natural;
    }

    void emit_report(const Json &parameters, const Json &results) {
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        Json report{{"command", command_},
                    {"model", model_path_},
                    {"model_digest", model().digest},
                    {"parameters", parameters},
                    {"results", results},
                    {"tolerances", tolerances_to_json(model().tolerances)},
                    {"wall_time_s", wall}};
        std::cout << report.dump(2) << '\n';
    }

  private:
    const GlobalOptions &global_;
    std::string command_;
    std::string model_path_;
    std::chrono::steady_clock::time_point start_;
    std::optional<Model> model_;
};

Json validate_results(const Model &m) {
    const auto pifs = m.pifs();
    const auto &kind = m.povm.kind();
    Json ranks = Json::array();
    for (auto r : kind.ranks) ranks.push_back(r);
    Json out{{"dimension", m.u.dim()},
             {"outcomes", m.povm.size()},
             {"kind", std::string(to_string(kind.tag))},
             {"ranks", ranks},
             {"is_pvm", kind.is_pvm},
             {"rank_one", kind.rank_one.has_value()},
             {"two_projection", kind.two_proj.has_value()},
             {"normalization_defect", pifs.normalization_defect()},
             {"stationarity_defect", pifs.stationarity_defect()}};
    if (kind.rank_one) out["rank_one_scale"] = kind.rank_one->scale;
    if (kind.two_proj) {
        out["large_outcome"] = kind.two_proj->large + 1;
        out["small_outcome"] = kind.two_proj->small + 1;
    }
    return out;
}

int run_sample(Runner &runner, const GlobalOptions &global, std::size_t len, std::size_t samples,
               std::uint64_t seed, bool record_states, bool stats, std::size_t prefix_len) {
    const auto pifs = runner.model().pifs();
    const Json parameters{{"len", len},       {"samples", samples},       {"seed", seed},
                          {"stats", stats},   {"prefix_len", prefix_len}, {"record_states", record_states}};
    if (stats) {
        SamplingOptions options;
        options.prefix_len = prefix_len;
        options.n_samples = samples;
        options.traj_len = len;
        options.seed = seed;
        options.threads = global.threads;
        const auto s = empirical_cylinder_freq(pifs, options);
        Json cylinders = Json::array();
        for (std::size_t n = 1; n <= s.prefix_len; ++n) {
            for (std::size_t i = 0; i < s.cylinder_counts[n].size(); ++i) {
                const auto str = OutcomeString::from_index(i, n, s.outcomes);
                cylinders.push_back({{"string", str.to_string()},
                                     {"count", s.cylinder_counts[n][i]},
                                     {"frequency", s.frequency(str)},
                                     {"standard_error", s.standard_error(str)}});
            }
        }
        runner.emit_report(parameters, Json{{"sample_count", s.sample_count},
                                            {"cylinders", cylinders},
                                            {"symbol_frequencies", s.symbol_frequencies},
                                            {"standard_errors", s.standard_errors},
                                            {"constant_run_counts", s.constant_run_counts},
                                            {"tail_start", s.tail_start},
                                            {"tail_counts", s.tail_counts}});
        return 0;
    }
    if (record_states || runner.format(Format::Csv) == Format::Json) {
        Json trajectories = Json::array();
        for (std::size_t t = 0; t < samples; ++t) {
            const auto traj = sample_trajectory(pifs, len, seed, record_states, t);
            Json item{{"outcomes", traj.outcomes.to_string()}};
            if (record_states) {
                Json states = Json::array();
                for (const auto &rho : traj.states) states.push_back(matrix_to_json(rho.matrix()));
                item["states"] = states;
            }
            trajectories.push_back(item);
        }
        runner.emit_report(parameters, Json{{"trajectories", trajectories}});
        return 0;
    }
    for (std::size_t t = 0; t < samples; ++t) {
        std::cout << sample_trajectory(pifs, len, seed, false, t).outcomes.to_string() << '\n';
    }
    return 0;
}

int dispatch(int argc, char **argv) {
    CLI::App app{"Kusuoka measures of repeatedly measured unitary systems"};
    app.require_subcommand(1);
    GlobalOptions global;
    app.add_option("--output", global.output, "Output format")
        ->check(CLI::IsMember({"auto", "json", "csv"}))
        ->capture_default_str();
    app.add_option("--threads", global.threads, "Worker threads for sampling")->check(CLI::PositiveNumber);
    std::map<std::string, std::optional<double>> tol_values;
    for (const auto &entry : Tolerances::entries()) {
        auto &slot = tol_values[std::string(entry.name)];
        app.add_option_function<double>(
            flag_for(entry.name), [&slot](double v) { slot = v; }, "Override " + std::string(entry.name));
    }

    std::string model_path;
    auto add_cmd = [&](const char *name, const char *help) {
        auto *cmd = app.add_subcommand(name, help);
        cmd->add_option("model", model_path, "Model file (JSON)")->required()->check(CLI::ExistingFile);
        return cmd;
    };

    auto *validate = add_cmd("validate", "Validate a model and classify its POVM");

    std::string string_text;
    auto *prob = add_cmd("prob", "Cylinder probability of an outcome string");
    prob->add_option("--string", string_text, "Comma-separated 1-based outcomes, e.g. 1,2,1")->required();

    auto *transition = add_cmd("transition", "Transition matrix of a rank-one POVM");
    auto *ergodicity = add_cmd("ergodicity", "Ergodicity verdict with witness and cross-checks");

    std::size_t m_max = 0;
    auto *lemma = add_cmd("lemma-limit", "Trace sequence of (PU)^m for a two-projection PVM");
    lemma->add_option("--m-max", m_max, "Number of terms (0 selects it from the spectral gap)");

    std::size_t n_max = 8;
    auto *reversibility = add_cmd("reversibility", "Largest probability change under string reversal");
    reversibility->add_option("--n-max", n_max, "Longest string length")->capture_default_str();

    std::size_t len = 1000, samples = 100, prefix_len = 3;
    std::uint64_t seed = 0;
    bool record_states = false, stats = false;
    auto *sample = add_cmd("sample", "Monte Carlo trajectories");
    sample->add_option("--len", len, "Trajectory length")->capture_default_str()->check(CLI::PositiveNumber);
    sample->add_option("--samples", samples, "Number of trajectories")->capture_default_str()->check(CLI::PositiveNumber);
    sample->add_option("--seed", seed, "Master seed")->capture_default_str();
    sample->add_flag("--record-states", record_states, "Include post-measurement states");
    sample->add_flag("--stats", stats, "Emit aggregated prefix statistics instead of trajectories");
    sample->add_option("--prefix-len", prefix_len, "Prefix length for --stats")->capture_default_str();

    auto *fixed_point = add_cmd("fixed-point", "Stationary density of the Kusuoka family");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    for (const auto &[name, value] : tol_values) {
        if (value) global.tolerance_flags[name] = *value;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    Runner runner(global, command, model_path);

    if (validate->parsed()) {
        runner.emit_report(Json::object(), validate_results(runner.model()));
    } else if (prob->parsed()) {
        const auto pifs = runner.model().pifs();
        const auto s = OutcomeString::parse(string_text, pifs.outcomes());
        const auto both = pifs.kusuoka_cylinder(s);
        if (runner.format(Format::Json) == Format::Csv) {
            std::cout << "string,trace_formula,hs_formula,difference\n"
                      << '"' << s.to_string() << "\"," << fmt(both.trace_formula) << ',' << fmt(both.hs_formula)
                      << ',' << fmt(both.difference()) << '\n';
        } else {
            runner.emit_report(Json{{"string", s.to_string()}},
                               Json{{"probability", pifs.kusuoka_cylinder_prob(s)},
                                    {"trace_formula", both.trace_formula},
                                    {"hs_formula", both.hs_formula},
                                    {"difference", both.difference()}});
        }
    } else if (transition->parsed()) {
        const auto q = transition_matrix(runner.model().pifs());
        if (runner.format(Format::Csv) == Format::Csv) {
            for (Eigen::Index i = 0; i < q.q.rows(); ++i) {
                for (Eigen::Index j = 0; j < q.q.cols(); ++j) std::cout << (j ? "," : "") << fmt(q.q(i, j));
                std::cout << '\n';
            }
        } else {
            Json rows = Json::array();
            for (Eigen::Index i = 0; i < q.q.rows(); ++i) {
                Json row = Json::array();
                for (Eigen::Index j = 0; j < q.q.cols(); ++j) row.push_back(q.q(i, j));
                rows.push_back(row);
            }
            const auto irr = is_irreducible(q, runner.model().tolerances.zero_prob_threshold);
            runner.emit_report(Json::object(), Json{{"transition_matrix", rows},
                                                    {"max_row_defect", q.max_row_defect()},
                                                    {"max_column_defect", q.max_column_defect()},
                                                    {"irreducible", irr.irreducible},
                                                    {"closed_set", one_based(irr.closed_set)}});
        }
    } else if (ergodicity->parsed()) {
        const auto pifs = runner.model().pifs();
        const auto verdict = ergodicity_verdict(pifs);
        Json checks = Json::array();
        for (const auto &c : verdict.cross_checks) checks.push_back({{"name", c.name}, {"passed", c.passed}});
        Json results{{"status", std::string(to_string(verdict.status))},
                     {"criterion", std::string(to_string(verdict.criterion))},
                     {"witness", witness_to_json(verdict.witness)},
                     {"algebra_dimension", verdict.algebra.dimension},
                     {"algebra_irreducible", verdict.algebra.irreducible},
                     {"cross_checks", checks},
                     {"all_checks_passed", verdict.all_checks_passed()},
                     {"diagnostics", verdict.diagnostics}};
        if (pifs.povm().kind().two_proj) {
            results["nonergodic_tail_mass"] = nonergodic_tail_mass(pifs.unitary(), pifs.povm(), pifs.tolerances());
        }
        runner.emit_report(Json::object(), results);
    } else if (lemma->parsed()) {
        const auto &m = runner.model();
        const auto limit = lemma_trace_limit(m.u, m.povm, m_max, m.tolerances);
        if (runner.format(Format::Csv) == Format::Csv) {
            std::cout << "m,trace\n";
            for (std::size_t i = 0; i < limit.sequence.size(); ++i) std::cout << i + 1 << ',' << fmt(limit.sequence[i]) << '\n';
            std::cout << "spectral_value," << fmt(limit.spectral_value) << '\n';
            std::cout << "convergence_gap," << fmt(limit.convergence_gap) << '\n';
        } else {
            runner.emit_report(Json{{"m_max", limit.m_max}},
                               Json{{"sequence", limit.sequence},
                                    {"spectral_value", limit.spectral_value},
                                    {"convergence_gap", limit.convergence_gap},
                                    {"contraction_rate", limit.contraction_rate},
                                    {"converged", limit.converged}});
        }
    } else if (reversibility->parsed()) {
        const auto pifs = runner.model().pifs();
        const auto scan = reversibility_scan(pifs, n_max);
        Json results{{"max_discrepancy", scan.max_discrepancy},
                     {"worst_string", scan.worst_string.to_string()},
                     {"strings_checked", scan.strings_checked},
                     {"within_tol_rev", scan.max_discrepancy <= pifs.tolerances().tol_rev}};
        if (pifs.povm().kind().two_proj) {
            const auto facts = fact_identities_check(pifs, n_max);
            results["identities"] = {{"first_visit_residual", facts.first_visit_residual},
                                     {"factorization_residual", facts.factorization_residual},
                                     {"passed", facts.passed}};
        }
        runner.emit_report(Json{{"n_max", n_max}}, results);
    } else if (sample->parsed()) {
        return run_sample(runner, global, len, samples, seed, record_states, stats, prefix_len);
    } else if (fixed_point->parsed()) {
        const auto &m = runner.model();
        const auto family = OperatorFamily::from_pifs(m.pifs());
        const auto fixed = stationary_density(family, m.tolerances);
        const Eigen::Index d = family.dim();
        const double deviation =
            (fixed.rho.matrix() - ComplexMatrix::Identity(d, d) / static_cast<double>(d)).norm();
        runner.emit_report(Json::object(), Json{{"rho", matrix_to_json(fixed.rho.matrix())},
                                                {"residual", fixed.residual},
                                                {"fixed_space_dim", fixed.fixed_space_dim},
                                                {"non_unique_warning", fixed.non_unique_warning},
                                                {"min_eigenvalue", fixed.min_eigenvalue},
                                                {"distance_to_maximally_mixed", deviation}});
    }
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    try {
        return dispatch(argc, argv);
    } catch (const kusuoka::Error &e) {
        std::cerr << "error: " << e.what() << '\n';
        if (kusuoka::is_guard(e.kind())) return 3;
        switch (e.kind()) {
            case kusuoka::ErrorKind::Inconsistent:
            case kusuoka::ErrorKind::NoConvergence:
            case kusuoka::ErrorKind::NoFixedPoint: return 1;
            default: return 2;
        }
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
