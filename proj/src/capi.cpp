#include "pcrit/pcrit.h"

#include "pcrit/domains.hpp"
#include "pcrit/io.hpp"
#include "pcrit/pipeline.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <new>
#include <sstream>
#include <string>

struct pcrit_config {
    pcrit::ExperimentConfig value;
};

struct pcrit_mdp {
    pcrit::TabularMdp mdp;
    pcrit::TransitionModel model;
};

struct pcrit_run {
    pcrit::ExperimentConfig config;
    pcrit::RunResult result;
};

struct pcrit_table {
    pcrit::ExperimentTable table;
};

namespace {

thread_local std::string last_error;

pcrit_status status_of(pcrit::ErrorCode code) {
    using pcrit::ErrorCode;
    switch (code) {
    case ErrorCode::InvalidArgument: return PCRIT_INVALID_ARGUMENT;
    case ErrorCode::InvalidModel: return PCRIT_INVALID_MODEL;
    case ErrorCode::InvalidSet: return PCRIT_INVALID_SET;
    case ErrorCode::SupportViolation: return PCRIT_SUPPORT_VIOLATION;
    case ErrorCode::NonConvergence: return PCRIT_NON_CONVERGENCE;
    case ErrorCode::Io: return PCRIT_IO_ERROR;
    case ErrorCode::Parse: return PCRIT_PARSE_ERROR;
    case ErrorCode::Unsupported: return PCRIT_UNSUPPORTED;
    }
    return PCRIT_INTERNAL_ERROR;
}

// Runs body and converts any exception into a status plus a thread-local message.
template <class F>
pcrit_status guarded(F&& body) {
    try {
        body();
        last_error.clear();
        return PCRIT_OK;
    } catch (const pcrit::Error& e) {
        last_error = e.what();
        return status_of(e.code());
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return PCRIT_INTERNAL_ERROR;
    } catch (const std::exception& e) {
        last_error = e.what();
        return PCRIT_INTERNAL_ERROR;
    } catch (...) {
        last_error = "unknown failure";
        return PCRIT_INTERNAL_ERROR;
    }
}

void require_arg(const void* pointer, const char* name) {
    if (pointer == nullptr) pcrit::fail(pcrit::ErrorCode::InvalidArgument, std::string(name) + " must not be null");
}

char* duplicate(const std::string& text) {
    auto* out = static_cast<char*>(std::malloc(text.size() + 1));
    if (out == nullptr) throw std::bad_alloc();
    std::memcpy(out, text.c_str(), text.size() + 1);
    return out;
}

void emit(char** out, const std::string& text) {
    require_arg(out, "out");
    *out = duplicate(text);
}

std::string join_lines(const std::vector<std::string>& items) {
    std::string text;
    for (const auto& item : items) text += item + "\n";
    return text;
}

void check_pair(const pcrit_run* run, size_t s, size_t a) {
    require_arg(run, "run");
    const auto& mdp = run->result.domain.mdp;
    if (s >= mdp.num_states() || a >= mdp.num_actions())
        pcrit::fail(pcrit::ErrorCode::InvalidArgument, "state or action index out of range");
}

constexpr double not_a_number = std::numeric_limits<double>::quiet_NaN();

} // namespace

extern "C" {

const char* pcrit_version(void) { return "1.0.0"; }

const char* pcrit_last_error(void) { return last_error.c_str(); }

const char* pcrit_status_name(pcrit_status status) {
    switch (status) {
    case PCRIT_OK: return "ok";
    case PCRIT_INVALID_ARGUMENT: return "invalid argument";
    case PCRIT_INVALID_MODEL: return "invalid model";
    case PCRIT_INVALID_SET: return "invalid ambiguity set";
    case PCRIT_SUPPORT_VIOLATION: return "support violation";
    case PCRIT_NON_CONVERGENCE: return "non-convergence";
    case PCRIT_IO_ERROR: return "i/o error";
    case PCRIT_PARSE_ERROR: return "parse error";
    case PCRIT_UNSUPPORTED: return "unsupported";
    case PCRIT_INTERNAL_ERROR: return "internal error";
    }
    return "unknown status";
}

void pcrit_string_free(char* text) { std::free(text); }

pcrit_status pcrit_domain_names(char** out) {
    return guarded([&] { emit(out, join_lines(pcrit::domain_names())); });
}

pcrit_status pcrit_config_create(pcrit_config** out) {
    return guarded([&] {
        require_arg(out, "out");
        *out = new pcrit_config{};
    });
}

pcrit_status pcrit_config_clone(const pcrit_config* config, pcrit_config** out) {
    return guarded([&] {
        require_arg(config, "config");
        require_arg(out, "out");
        *out = new pcrit_config{config->value};
    });
}

void pcrit_config_destroy(pcrit_config* config) { delete config; }

pcrit_status pcrit_config_set(pcrit_config* config, const char* key, const char* value) {
    return guarded([&] {
        require_arg(config, "config");
        require_arg(key, "key");
        require_arg(value, "value");
        pcrit::set_config_value(config->value, key, value);
    });
}

pcrit_status pcrit_config_load(pcrit_config* config, const char* path) {
    return guarded([&] {
        require_arg(config, "config");
        require_arg(path, "path");
        config->value = pcrit::load_config(path, config->value);
    });
}

pcrit_status pcrit_config_dump(const pcrit_config* config, char** out) {
    return guarded([&] {
        require_arg(config, "config");
        emit(out, pcrit::config_to_text(config->value));
    });
}

pcrit_status pcrit_config_keys(char** out) {
    return guarded([&] { emit(out, join_lines(pcrit::config_keys())); });
}

pcrit_status pcrit_config_validate(const pcrit_config* config) {
    return guarded([&] {
        require_arg(config, "config");
        config->value.validate();
    });
}

pcrit_status pcrit_mdp_from_domain(const char* name, size_t size, double discount, pcrit_mdp** out) {
    return guarded([&] {
        require_arg(name, "name");
        require_arg(out, "out");
        auto domain = pcrit::make_domain(name, size, discount);
        *out = new pcrit_mdp{std::move(domain.mdp), std::move(domain.truth)};
    });
}

pcrit_status pcrit_mdp_load_csv(const char* path, pcrit_mdp** out) {
    return guarded([&] {
        require_arg(path, "path");
        require_arg(out, "out");
        auto loaded = pcrit::load_mdp_csv(path);
        *out = new pcrit_mdp{std::move(loaded.mdp), std::move(loaded.model)};
    });
}

pcrit_status pcrit_mdp_save_csv(const pcrit_mdp* mdp, const char* path) {
    return guarded([&] {
        require_arg(mdp, "mdp");
        require_arg(path, "path");
        pcrit::save_mdp_csv(path, mdp->mdp, mdp->model);
    });
}

void pcrit_mdp_destroy(pcrit_mdp* mdp) { delete mdp; }

size_t pcrit_mdp_num_states(const pcrit_mdp* mdp) { return mdp ? mdp->mdp.num_states() : 0; }

size_t pcrit_mdp_num_actions(const pcrit_mdp* mdp) { return mdp ? mdp->mdp.num_actions() : 0; }

double pcrit_mdp_discount(const pcrit_mdp* mdp) { return mdp ? mdp->mdp.discount() : not_a_number; }

double pcrit_mdp_probability(const pcrit_mdp* mdp, size_t s, size_t a, size_t next) {
    if (!mdp || s >= mdp->mdp.num_states() || a >= mdp->mdp.num_actions() || next >= mdp->mdp.num_states())
        return not_a_number;
    return mdp->model.row(s, a)[next];
}

double pcrit_mdp_reward(const pcrit_mdp* mdp, size_t s, size_t a, size_t next) {
    if (!mdp || s >= mdp->mdp.num_states() || a >= mdp->mdp.num_actions() || next >= mdp->mdp.num_states())
        return not_a_number;
    return mdp->mdp.reward(s, a, next);
}

pcrit_status pcrit_mdp_solve_nominal(const pcrit_mdp* mdp, double tol, double* values, size_t* policy,
                                     double* ret) {
    return guarded([&] {
        require_arg(mdp, "mdp");
        const auto solution = pcrit::solve_nominal(mdp->mdp, mdp->model, tol);
        if (values) std::copy(solution.value.values.begin(), solution.value.values.end(), values);
        if (policy) std::copy(solution.policy.actions.begin(), solution.policy.actions.end(), policy);
        if (ret) *ret = pcrit::return_of(mdp->mdp, mdp->model, solution.policy);
    });
}

pcrit_status pcrit_solve(const pcrit_config* config, uint64_t seed, pcrit_run** out) {
    return guarded([&] {
        require_arg(config, "config");
        require_arg(out, "out");
        auto result = pcrit::run_single(config->value, seed);
        *out = new pcrit_run{config->value, std::move(result)};
    });
}

void pcrit_run_destroy(pcrit_run* run) { delete run; }

size_t pcrit_run_num_states(const pcrit_run* run) { return run ? run->result.domain.mdp.num_states() : 0; }

size_t pcrit_run_num_actions(const pcrit_run* run) { return run ? run->result.domain.mdp.num_actions() : 0; }

double pcrit_run_robust_return(const pcrit_run* run) { return run ? run->result.solution.robust_return : not_a_number; }

double pcrit_run_nominal_return(const pcrit_run* run) { return run ? run->result.nominal_return : not_a_number; }

double pcrit_run_normalized_loss(const pcrit_run* run) { return run ? run->result.normalized_loss : not_a_number; }

double pcrit_run_seconds(const pcrit_run* run) { return run ? run->result.seconds : not_a_number; }

double pcrit_run_residual(const pcrit_run* run) { return run ? run->result.solution.residual : not_a_number; }

size_t pcrit_run_iterations(const pcrit_run* run) { return run ? run->result.solution.iterations : 0; }

pcrit_status pcrit_run_values(const pcrit_run* run, double* values) {
    return guarded([&] {
        require_arg(run, "run");
        require_arg(values, "values");
        const auto& v = run->result.solution.value.values;
        std::copy(v.begin(), v.end(), values);
    });
}

pcrit_status pcrit_run_policy(const pcrit_run* run, size_t* policy) {
    return guarded([&] {
        require_arg(run, "run");
        require_arg(policy, "policy");
        const auto& p = run->result.solution.policy.actions;
        std::copy(p.begin(), p.end(), policy);
    });
}

pcrit_status pcrit_run_budget(const pcrit_run* run, size_t s, size_t a, double* budget) {
    return guarded([&] {
        check_pair(run, s, a);
        require_arg(budget, "budget");
        *budget = run->result.build.set.ball(run->result.domain.mdp, s, a).budget;
    });
}

pcrit_status pcrit_run_weights(const pcrit_run* run, size_t s, size_t a, double* weights) {
    return guarded([&] {
        check_pair(run, s, a);
        require_arg(weights, "weights");
        const auto ball = run->result.build.set.ball(run->result.domain.mdp, s, a);
        std::copy(ball.weights.begin(), ball.weights.end(), weights);
    });
}

pcrit_status pcrit_run_summary(const pcrit_run* run, char** out) {
    return guarded([&] {
        require_arg(run, "run");
        const auto& r = run->result;
        const auto& c = run->config;
        std::ostringstream text;
        text << "domain " << r.domain.name << " (S=" << r.domain.mdp.num_states()
             << ", A=" << r.domain.mdp.num_actions() << ", gamma=" << r.domain.mdp.discount() << ")\n"
             << "mode " << pcrit::to_string(c.mode) << ", norm " << pcrit::to_string(c.norm) << ", shape "
             << pcrit::to_string(c.shape) << ", delta " << c.delta << ", seed " << r.seed << "\n"
             << "robust return   " << pcrit::io::format_double(r.solution.robust_return) << "\n"
             << "nominal return  " << pcrit::io::format_double(r.nominal_return) << "\n"
             << "normalized loss " << pcrit::io::format_double(r.normalized_loss) << "\n"
             << "iterations " << r.solution.iterations << ", residual "
             << pcrit::io::format_double(r.solution.residual) << ", seconds " << r.seconds << "\n"
             << "policy";
        for (auto action : r.solution.policy.actions) text << ' ' << action;
        text << "\n";
        emit(out, text.str());
    });
}

pcrit_status pcrit_run_save(const pcrit_run* run, const char* dir) {
    return guarded([&] {
        require_arg(run, "run");
        require_arg(dir, "dir");
        pcrit::save_run(dir, run->config, run->result);
    });
}

pcrit_status pcrit_validate(const pcrit_run* run, pcrit_validation* out) {
    return guarded([&] {
        require_arg(run, "run");
        require_arg(out, "out");
        const auto report = pcrit::validate_guarantee(run->config, run->result);
        out->samples = report.samples;
        out->guarantee_fraction = report.guarantee_fraction;
        out->coverage = report.coverage;
        out->threshold = report.threshold;
        out->passed = report.passed ? 1 : 0;
    });
}

pcrit_status pcrit_bench(const pcrit_config* config, pcrit_table** out) {
    return guarded([&] {
        require_arg(config, "config");
        require_arg(out, "out");
        *out = new pcrit_table{pcrit::run_experiment(config->value)};
    });
}

void pcrit_table_destroy(pcrit_table* table) { delete table; }

size_t pcrit_table_num_rows(const pcrit_table* table) { return table ? table->table.rows.size() : 0; }

size_t pcrit_table_failures(const pcrit_table* table) {
    if (!table) return 0;
    size_t failures = 0;
    for (const auto& row : table->table.rows) failures += row.error.empty() ? 0 : 1;
    return failures;
}

size_t pcrit_table_validation_failures(const pcrit_table* table) {
    if (!table) return 0;
    size_t failures = 0;
    for (const auto& row : table->table.rows)
        if (row.guarantee_fraction && *row.guarantee_fraction < 1.0 - row.delta - 0.02) ++failures;
    return failures;
}

pcrit_status pcrit_table_csv(const pcrit_table* table, char** out) {
    return guarded([&] {
        require_arg(table, "table");
        emit(out, pcrit::table_to_csv(table->table));
    });
}

pcrit_status pcrit_table_summary_csv(const pcrit_table* table, char** out) {
    return guarded([&] {
        require_arg(table, "table");
        emit(out, pcrit::summary_to_csv(table->table));
    });
}

pcrit_status pcrit_table_format(const pcrit_table* table, char** out) {
    return guarded([&] {
        require_arg(table, "table");
        emit(out, pcrit::format_table(table->table));
    });
}

double pcrit_table_median_loss(const pcrit_table* table, const char* domain, const char* mode, const char* method,
                               double delta) {
    if (!table || !domain || !mode || !method) return not_a_number;
    for (const auto& row : table->table.summary)
        if (row.domain == domain && row.mode == mode && row.method == method && std::abs(row.delta - delta) < 1e-12)
            return row.median_loss;
    return not_a_number;
}

} // extern "C"
