// Command-line front end. Talks to the library exclusively through pcrit.h.

#include <pcrit/pcrit.h>

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int exit_ok = 0;
constexpr int exit_validation = 1;
constexpr int exit_error = 2;

struct Failure {
    pcrit_status status;
    std::string message;
};

void check(pcrit_status status, const std::string& context) {
    if (status != PCRIT_OK)
        throw Failure{status, context + ": " + pcrit_status_name(status) + ": " + pcrit_last_error()};
}

std::string take(char* text) {
    std::string out = text ? text : "";
    pcrit_string_free(text);
    return out;
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);)
        if (!line.empty()) out.push_back(line);
    return out;
}

std::string flag_name(std::string key) {
    std::replace(key.begin(), key.end(), '_', '-');
    return "--" + key;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Failure{PCRIT_IO_ERROR, "cannot write " + path};
    out << text;
}

using ConfigHandle = std::unique_ptr<pcrit_config, decltype(&pcrit_config_destroy)>;
using RunHandle = std::unique_ptr<pcrit_run, decltype(&pcrit_run_destroy)>;

// Flags shared by every verb that builds an ExperimentConfig.
class ConfigFlags {
public:
    void attach(CLI::App* cmd) {
        cmd->add_option("-c,--config", file_, "flat key = value configuration file");
        for (const auto& key : lines(take_keys())) {
            auto& slot = values_[key];
            cmd->add_option(flag_name(key), slot, "configuration key " + key);
        }
    }

    ConfigHandle build() const {
        pcrit_config* raw = nullptr;
        check(pcrit_config_create(&raw), "config");
        ConfigHandle config(raw, &pcrit_config_destroy);
        if (!file_.empty()) check(pcrit_config_load(config.get(), file_.c_str()), "config file");
        for (const auto& [key, value] : values_)
            if (value) check(pcrit_config_set(config.get(), key.c_str(), value->c_str()), flag_name(key));
        check(pcrit_config_validate(config.get()), "config");
        return config;
    }

private:
    static std::string take_keys() {
        char* text = nullptr;
        check(pcrit_config_keys(&text), "config keys");
        return take(text);
    }

    std::string file_;
    std::map<std::string, std::optional<std::string>> values_;
};

std::string config_value(const pcrit_config* config, const std::string& key) {
    char* text = nullptr;
    check(pcrit_config_dump(config, &text), "config");
    for (const auto& line : lines(take(text))) {
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto name = line.substr(0, eq);
        name.erase(name.find_last_not_of(' ') + 1);
        if (name != key) continue;
        auto value = line.substr(eq + 1);
        value.erase(0, value.find_first_not_of(' '));
        return value;
    }
    return {};
}

std::uint64_t first_seed(const pcrit_config* config) {
    const auto seeds = config_value(config, "seeds");
    return std::stoull(seeds.substr(0, seeds.find(',')));
}

RunHandle solve(const pcrit_config* config, std::optional<std::uint64_t> seed) {
    pcrit_run* raw = nullptr;
    check(pcrit_solve(config, seed ? *seed : first_seed(config), &raw), "solve");
    return RunHandle(raw, &pcrit_run_destroy);
}

void print_summary(const pcrit_run* run) {
    char* text = nullptr;
    check(pcrit_run_summary(run, &text), "summary");
    std::cout << take(text);
}

void maybe_save(const pcrit_config* config, const pcrit_run* run) {
    const auto dir = config_value(config, "output_dir");
    if (dir.empty()) return;
    check(pcrit_run_save(run, dir.c_str()), "save");
    std::cout << "artifacts written to " << dir << "\n";
}

int cmd_solve(const ConfigFlags& flags, std::optional<std::uint64_t> seed) {
    const auto config = flags.build();
    const auto run = solve(config.get(), seed);
    print_summary(run.get());
    maybe_save(config.get(), run.get());
    return exit_ok;
}

int cmd_validate(const ConfigFlags& flags, std::optional<std::uint64_t> seed) {
    const auto config = flags.build();
    const auto run = solve(config.get(), seed);
    print_summary(run.get());
    maybe_save(config.get(), run.get());
    pcrit_validation report{};
    check(pcrit_validate(run.get(), &report), "validate");
    std::printf("validation samples %zu\nguarantee fraction %.6f (threshold %.6f)\njoint coverage %.6f\n%s\n",
                report.samples, report.guarantee_fraction, report.threshold, report.coverage,
                report.passed ? "guarantee holds" : "guarantee violated");
    return report.passed ? exit_ok : exit_validation;
}

int cmd_bench(const ConfigFlags& flags, bool csv) {
    const auto config = flags.build();
    pcrit_table* raw = nullptr;
    check(pcrit_bench(config.get(), &raw), "bench");
    std::unique_ptr<pcrit_table, decltype(&pcrit_table_destroy)> table(raw, &pcrit_table_destroy);

    char* text = nullptr;
    if (csv) {
        check(pcrit_table_csv(table.get(), &text), "bench csv");
    } else {
        check(pcrit_table_format(table.get(), &text), "bench table");
    }
    std::cout << take(text);

    const auto dir = config_value(config.get(), "output_dir");
    if (!dir.empty()) {
        check(pcrit_table_csv(table.get(), &text), "bench csv");
        const auto rows = take(text);
        check(pcrit_table_summary_csv(table.get(), &text), "bench summary");
        const auto summary = take(text);
        check(pcrit_table_format(table.get(), &text), "bench table");
        const auto aligned = take(text);
        check(pcrit_config_dump(config.get(), &text), "config");
        const auto echoed = take(text);
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec) throw Failure{PCRIT_IO_ERROR, "cannot create " + dir + ": " + ec.message()};
        write_text(dir + "/results.csv", rows);
        write_text(dir + "/summary.csv", summary);
        write_text(dir + "/summary.txt", aligned);
        write_text(dir + "/config.txt", echoed);
        std::cerr << "bench results written to " << dir << "\n";
    }

    const auto failures = pcrit_table_failures(table.get());
    const auto violations = pcrit_table_validation_failures(table.get());
    if (failures) std::cerr << failures << " cell(s) failed; see the error column\n";
    if (violations) {
        std::cerr << violations << " cell(s) violated the guarantee check\n";
        return exit_validation;
    }
    return failures ? exit_error : exit_ok;
}

int cmd_export(const std::string& domain, std::size_t size, double discount, const std::string& output) {
    pcrit_mdp* raw = nullptr;
    check(pcrit_mdp_from_domain(domain.c_str(), size, discount, &raw), "domain " + domain);
    std::unique_ptr<pcrit_mdp, decltype(&pcrit_mdp_destroy)> mdp(raw, &pcrit_mdp_destroy);
    check(pcrit_mdp_save_csv(mdp.get(), output.c_str()), "export");
    std::printf("%s: S=%zu A=%zu gamma=%g written to %s\n", domain.c_str(), pcrit_mdp_num_states(mdp.get()),
                pcrit_mdp_num_actions(mdp.get()), pcrit_mdp_discount(mdp.get()), output.c_str());
    return exit_ok;
}

int cmd_domains() {
    char* text = nullptr;
    check(pcrit_domain_names(&text), "domains");
    std::cout << take(text);
    return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Percentile-criterion policies through robust MDPs with optimized ambiguity sets"};
    app.set_version_flag("--version", std::string(pcrit_version()));
    app.require_subcommand(1);

    ConfigFlags solve_flags, validate_flags, bench_flags;
    std::optional<std::uint64_t> solve_seed, validate_seed;
    bool bench_csv = false;

    auto* solve_cmd = app.add_subcommand("solve", "build the ambiguity set for one seed and solve the robust MDP");
    solve_flags.attach(solve_cmd);
    solve_cmd->add_option("--seed", solve_seed, "seed for this run (default: first entry of --seeds)");

    auto* validate_cmd =
        app.add_subcommand("validate", "solve, then check the guarantee on fresh posterior draws");
    validate_flags.attach(validate_cmd);
    validate_cmd->add_option("--seed", validate_seed, "seed for this run (default: first entry of --seeds)");

    auto* bench_cmd = app.add_subcommand("bench", "run the (domain, method, delta, seed) grid");
    bench_flags.attach(bench_cmd);
    bench_cmd->add_flag("--csv", bench_csv, "print per-run CSV instead of the aligned summary");

    std::string export_domain, export_output;
    std::size_t export_size = 0;
    double export_discount = -1.0;
    auto* export_cmd = app.add_subcommand("export-domain", "write a built-in domain as an MDP CSV");
    export_cmd->add_option("domain", export_domain, "domain name")->required();
    export_cmd->add_option("-o,--output", export_output, "output CSV path")->required();
    export_cmd->add_option("--domain-size", export_size, "number of states where the domain is sized");
    export_cmd->add_option("--discount", export_discount, "discount factor (default: domain default)");

    auto* domains_cmd = app.add_subcommand("domains", "list built-in domains");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_error;
    }

    try {
        if (*solve_cmd) return cmd_solve(solve_flags, solve_seed);
        if (*validate_cmd) return cmd_validate(validate_flags, validate_seed);
        if (*bench_cmd) return cmd_bench(bench_flags, bench_csv);
        if (*export_cmd) return cmd_export(export_domain, export_size, export_discount, export_output);
        if (*domains_cmd) return cmd_domains();
    } catch (const Failure& f) {
        std::cerr << "error: " << f.message << "\n";
        return exit_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_error;
    }
    return exit_error;
}
