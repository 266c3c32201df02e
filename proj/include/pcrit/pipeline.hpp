#pragma once

#include "pcrit/ambiguity.hpp"
#include "pcrit/bayes.hpp"
#include "pcrit/domains.hpp"
#include "pcrit/robust.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace pcrit {

/// Stream indices passed to derive_seed together with the run seed.
inline constexpr std::uint64_t dataset_stream = 101;
inline constexpr std::uint64_t posterior_stream = 202;
inline constexpr std::uint64_t validation_stream = 303;

enum class Mode { Bayesian, Frequentist };

std::string_view to_string(Mode mode);
Mode parse_mode(std::string_view text);

/// Named weight/norm combination used in benchmark tables.
struct Method {
    std::string label;
    NormKind norm = NormKind::WeightedL1;
    ShapeMode shape = ShapeMode::Uniform;
};

/// uniform-l1, optimized-l1, socp-l1, uniform-linf, optimized-linf
Method parse_method(std::string_view label);

struct ExperimentConfig {
    std::string domain = "riverswim";
    std::size_t domain_size = 0;          // 0 keeps the domain default
    double discount = -1.0;               // negative keeps the domain default
    std::string mdp_file;                 // overrides domain when set
    std::string dataset_file;
    std::string posterior_file;

    Mode mode = Mode::Bayesian;
    NormKind norm = NormKind::WeightedL1;
    ShapeMode shape = ShapeMode::Analytic;
    std::optional<Inequality> inequality;  // default follows the norm
    double delta = 0.05;
    std::size_t samples = 20;
    std::size_t dataset_size = 20;
    double prior_concentration = 1.0;
    bool split_dataset = false;
    std::vector<std::uint64_t> seeds{1};
    std::size_t validation_samples = 1000;
    double tol = default_tolerance;
    std::size_t max_iterations = default_iteration_cap;
    std::string output_dir;

    // benchmark grid; empty lists fall back to the single-run fields
    std::vector<std::string> bench_domains;
    std::vector<std::string> bench_methods;
    std::vector<double> bench_deltas;
    bool bench_validate = false;

    /// Throws InvalidArgument on out-of-range values.
    void validate() const;
    Inequality effective_inequality() const;
};

/// Every key accepted by set_config_value, in config_to_text order.
const std::vector<std::string>& config_keys();

/// Sets one field from its textual key and value.
void set_config_value(ExperimentConfig& config, std::string_view key, std::string_view value);
/// Flat "key = value" text; '#' starts a comment.
ExperimentConfig parse_config(std::string_view text, ExperimentConfig base = {});
ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {});
std::string config_to_text(const ExperimentConfig& config);

/// Everything produced by one run of the construction and robust solve.
struct RunResult {
    Domain domain;
    std::uint64_t seed = 0;
    std::optional<DirichletPosterior> posterior;  // Bayesian runs with a conjugate posterior
    std::optional<PosteriorSampleSet> imported_samples;
    AmbiguityBuild build;
    RobustSolution solution;
    double nominal_return = 0.0;     // max_pi rho(pi, nominal model)
    double normalized_loss = 0.0;
    double seconds = 0.0;
};

/// Runs the shape-then-size construction for one seed, then robust value iteration.
RunResult run_single(const ExperimentConfig& config, std::uint64_t seed);

/// (rho_bar - rho_hat) / |rho_bar|; infinite when rho_bar is zero and the returns differ.
double normalized_loss(double nominal_return, double robust_return);

struct ValidationReport {
    std::size_t samples = 0;
    double guarantee_fraction = 0.0;
    double coverage = 0.0;
    double threshold = 0.0;
    bool passed = false;
};

/// Fresh posterior draws: guarantee fraction and joint coverage; passes when fraction >= 1 - delta - 0.02.
ValidationReport validate_guarantee(const ExperimentConfig& config, const RunResult& run);

struct ResultRow {
    std::string domain;
    std::string mode;
    std::string method;
    double delta = 0.0;
    std::uint64_t seed = 0;
    double discount = 0.0;
    double robust_return = 0.0;
    double nominal_return = 0.0;
    double loss = 0.0;
    double seconds = 0.0;
    std::optional<double> guarantee_fraction;
    std::string error;  // empty when the cell succeeded
};

struct SummaryRow {
    std::string domain;
    std::string mode;
    std::string method;
    double delta = 0.0;
    double discount = 0.0;
    std::size_t runs = 0;
    std::size_t failures = 0;
    double median_robust_return = 0.0;
    double median_nominal_return = 0.0;
    double median_loss = 0.0;
};

struct ExperimentTable {
    std::vector<ResultRow> rows;
    std::vector<SummaryRow> summary;
    std::vector<std::uint64_t> seeds;
};

/// Runs every (domain, method, delta, seed) cell; failed cells are recorded and skipped.
ExperimentTable run_experiment(const ExperimentConfig& config);

std::string table_to_csv(const ExperimentTable& table);
std::string summary_to_csv(const ExperimentTable& table);
std::string format_table(const ExperimentTable& table);

double median(numvec values);

/// Writes v', z', psi', the final set, the nominal MDP, the solution and a summary into dir.
void save_run(const std::string& dir, const ExperimentConfig& config, const RunResult& run);

/// Reads an ambiguity.csv written by save_run; listed rows form the finite-weight support.
AmbiguitySet load_ambiguity_csv(const std::string& path, const TabularMdp& mdp);
std::string ambiguity_to_csv(const TabularMdp& mdp, const AmbiguitySet& amb);

} // namespace pcrit
