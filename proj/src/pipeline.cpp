#include "pcrit/pipeline.hpp"

#include "pcrit/io.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace pcrit {

namespace {

bool parse_bool(std::string_view text, const std::string& key) {
    if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
    if (text == "false" || text == "0" || text == "no" || text == "off") return false;
    fail(ErrorCode::Parse, key + ": expected a boolean, found '" + std::string(text) + "'");
}

template <class T, class F>
std::vector<T> parse_list(std::string_view text, F convert) {
    std::vector<T> out;
    for (const auto& part : io::split(text, ','))
        if (!part.empty()) out.push_back(convert(part));
    return out;
}

template <class T, class F>
std::string join(const std::vector<T>& values, F convert) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) out += (i ? "," : "") + convert(values[i]);
    return out;
}

std::string pass_through(const std::string& s) { return s; }

} // namespace

std::string_view to_string(Mode mode) { return mode == Mode::Bayesian ? "bayesian" : "frequentist"; }

Mode parse_mode(std::string_view text) {
    if (text == "bayesian" || text == "bayes") return Mode::Bayesian;
    if (text == "frequentist") return Mode::Frequentist;
    fail(ErrorCode::InvalidArgument, "unknown mode '" + std::string(text) + "' (bayesian, frequentist)");
}

Method parse_method(std::string_view label) {
    const auto dash = label.rfind('-');
    require(dash != std::string_view::npos, ErrorCode::InvalidArgument,
            "method '" + std::string(label) + "' should look like optimized-l1 or uniform-linf");
    Method m;
    m.label = std::string(label);
    m.shape = parse_shape_mode(label.substr(0, dash));
    m.norm = parse_norm_kind(label.substr(dash + 1));
    return m;
}

void ExperimentConfig::validate() const {
    require(delta > 0.0 && delta < 0.5, ErrorCode::InvalidArgument, "delta must lie in (0, 0.5)");
    require(samples >= 1, ErrorCode::InvalidArgument, "samples must be at least 1");
    require(!seeds.empty(), ErrorCode::InvalidArgument, "at least one seed is required");
    require(tol > 0.0, ErrorCode::InvalidArgument, "tol must be positive");
    require(validation_samples >= 1, ErrorCode::InvalidArgument, "validation_samples must be at least 1");
    require(prior_concentration > 0.0, ErrorCode::InvalidArgument, "prior_concentration must be positive");
    require(discount < 1.0, ErrorCode::InvalidArgument, "discount must be below 1");
    for (double d : bench_deltas)
        require(d > 0.0 && d < 0.5, ErrorCode::InvalidArgument, "bench delta must lie in (0, 0.5)");
    if (mode == Mode::Frequentist && inequality)
        require(inequality_norm(*inequality) == norm, ErrorCode::InvalidArgument,
                "the chosen inequality does not bound the chosen norm");
}

Inequality ExperimentConfig::effective_inequality() const {
    if (inequality) return *inequality;
    return norm == NormKind::WeightedL1 ? Inequality::HoeffdingL1 : Inequality::HoeffdingLInf;
}

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys{
        "domain", "domain_size", "discount", "mdp_file", "dataset_file", "posterior_file",
        "mode", "norm", "shape", "inequality", "delta", "samples",
        "dataset_size", "prior_concentration", "split_dataset", "seeds", "validation_samples", "tol",
        "max_iterations", "output_dir", "bench_domains", "bench_methods", "bench_deltas", "bench_validate"};
    return keys;
}

void set_config_value(ExperimentConfig& c, std::string_view key_view, std::string_view value_view) {
    const std::string key(key_view);
    const auto value = io::trim(value_view);
    const auto number = [&] { return io::parse_double(value, key); };
    const auto count = [&] { return io::parse_index(value, key); };
    if (key == "domain") c.domain = value;
    else if (key == "domain_size") c.domain_size = count();
    else if (key == "discount") c.discount = number();
    else if (key == "mdp_file") c.mdp_file = value;
    else if (key == "dataset_file") c.dataset_file = value;
    else if (key == "posterior_file") c.posterior_file = value;
    else if (key == "mode") c.mode = parse_mode(value);
    else if (key == "norm") c.norm = parse_norm_kind(value);
    else if (key == "shape") c.shape = parse_shape_mode(value);
    else if (key == "inequality") {
        if (value.empty() || value == "auto") c.inequality.reset();
        else c.inequality = parse_inequality(value);
    } else if (key == "delta") c.delta = number();
    else if (key == "samples") c.samples = count();
    else if (key == "dataset_size") c.dataset_size = count();
    else if (key == "prior_concentration") c.prior_concentration = number();
    else if (key == "split_dataset") c.split_dataset = parse_bool(value, key);
    else if (key == "seeds") c.seeds = parse_list<std::uint64_t>(value, [&](const std::string& s) { return io::parse_uint(s, key); });
    else if (key == "validation_samples") c.validation_samples = count();
    else if (key == "tol") c.tol = number();
    else if (key == "max_iterations") c.max_iterations = count();
    else if (key == "output_dir") c.output_dir = value;
    else if (key == "bench_domains") c.bench_domains = parse_list<std::string>(value, pass_through);
    else if (key == "bench_methods") {
        c.bench_methods = parse_list<std::string>(value, pass_through);
        for (const auto& m : c.bench_methods) parse_method(m);
    } else if (key == "bench_deltas") c.bench_deltas = parse_list<double>(value, [&](const std::string& s) { return io::parse_double(s, key); });
    else if (key == "bench_validate") c.bench_validate = parse_bool(value, key);
    else fail(ErrorCode::InvalidArgument, "unknown configuration key '" + key + "'");
}

ExperimentConfig parse_config(std::string_view text, ExperimentConfig base) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        const auto content = io::trim(std::string_view(line).substr(0, hash));
        if (content.empty()) continue;
        const auto eq = content.find('=');
        require(eq != std::string::npos, ErrorCode::Parse,
                "config line " + std::to_string(line_no) + ": expected 'key = value'");
        try {
            set_config_value(base, io::trim(std::string_view(content).substr(0, eq)),
                             std::string_view(content).substr(eq + 1));
        } catch (const Error& e) {
            fail(e.code(), "config line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return base;
}

ExperimentConfig load_config(const std::string& path, ExperimentConfig base) {
    std::ifstream in(path);
    require(bool(in), ErrorCode::Io, "cannot open config '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse_config(buffer.str(), std::move(base));
    } catch (const Error& e) {
        fail(e.code(), path + ": " + e.what());
    }
}

std::string config_to_text(const ExperimentConfig& c) {
    std::ostringstream out;
    const auto num = [](double x) { return io::format_double(x); };
    out << "domain = " << c.domain << "\n"
        << "domain_size = " << c.domain_size << "\n"
        << "discount = " << num(c.discount) << "\n"
        << "mdp_file = " << c.mdp_file << "\n"
        << "dataset_file = " << c.dataset_file << "\n"
        << "posterior_file = " << c.posterior_file << "\n"
        << "mode = " << to_string(c.mode) << "\n"
        << "norm = " << to_string(c.norm) << "\n"
        << "shape = " << to_string(c.shape) << "\n"
        << "inequality = " << (c.inequality ? std::string(to_string(*c.inequality)) : std::string("auto")) << "\n"
        << "delta = " << num(c.delta) << "\n"
        << "samples = " << c.samples << "\n"
        << "dataset_size = " << c.dataset_size << "\n"
        << "prior_concentration = " << num(c.prior_concentration) << "\n"
        << "split_dataset = " << (c.split_dataset ? "true" : "false") << "\n"
        << "seeds = " << join(c.seeds, [](std::uint64_t s) { return std::to_string(s); }) << "\n"
        << "validation_samples = " << c.validation_samples << "\n"
        << "tol = " << num(c.tol) << "\n"
        << "max_iterations = " << c.max_iterations << "\n"
        << "output_dir = " << c.output_dir << "\n"
        << "bench_domains = " << join(c.bench_domains, pass_through) << "\n"
        << "bench_methods = " << join(c.bench_methods, pass_through) << "\n"
        << "bench_deltas = " << join(c.bench_deltas, num) << "\n"
        << "bench_validate = " << (c.bench_validate ? "true" : "false") << "\n";
    return out.str();
}

double normalized_loss(double nominal_return, double robust_return) {
    const double gap = nominal_return - robust_return;
    if (nominal_return == 0.0) return gap == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), gap);
    return gap / std::abs(nominal_return);
}

namespace {

Domain load_domain(const ExperimentConfig& config) {
    if (config.mdp_file.empty()) return make_domain(config.domain, config.domain_size, config.discount);
    auto loaded = load_mdp_csv(config.mdp_file);
    Domain d;
    d.name = config.mdp_file;
    d.mdp = config.discount >= 0.0 ? loaded.mdp.with_discount(config.discount) : std::move(loaded.mdp);
    d.truth = std::move(loaded.model);
    return d;
}

double optimal_return(const TabularMdp& mdp, const TransitionModel& model, double tol) {
    const auto solution = solve_nominal(mdp, model, tol);
    return return_of(mdp, model, solution.policy);
}

TransitionDataset obtain_dataset(const ExperimentConfig& config, const Domain& domain, std::uint64_t seed) {
    if (!config.dataset_file.empty())
        return load_dataset_csv(config.dataset_file, domain.mdp.num_states(), domain.mdp.num_actions());
    return sample_dataset(domain.mdp, domain.truth, config.dataset_size, derive_seed(seed, dataset_stream));
}

} // namespace

RunResult run_single(const ExperimentConfig& config, std::uint64_t seed) {
    config.validate();
    const auto start = std::chrono::steady_clock::now();
    RunResult run;
    run.seed = seed;
    run.domain = load_domain(config);
    const auto& mdp = run.domain.mdp;

    BuildOptions options;
    options.kind = config.norm;
    options.shape = config.shape;
    options.delta = config.delta;
    options.tol = config.tol;

    if (config.mode == Mode::Bayesian) {
        TransitionModel mean;
        if (!config.posterior_file.empty()) {
            run.imported_samples = load_posterior_samples_csv(config.posterior_file, mdp);
            run.imported_samples->seed = seed;
            run.build = build_ambiguity_set(mdp, BayesianInput{&*run.imported_samples}, options);
            mean = sample_mean(*run.imported_samples);
        } else {
            auto prior = run.domain.prior ? *run.domain.prior
                                          : DirichletPosterior::uniform_prior(mdp, config.prior_concentration);
            prior.check_support(mdp);
            const auto data = obtain_dataset(config, run.domain, seed);
            run.posterior = dirichlet_posterior(data, prior);
            const auto samples = sample_posterior(*run.posterior, config.samples, derive_seed(seed, posterior_stream));
            run.build = build_ambiguity_set(mdp, BayesianInput{&samples}, options);
            mean = run.posterior->mean();
        }
        run.nominal_return = optimal_return(mdp, mean, config.tol);
    } else {
        const auto data = obtain_dataset(config, run.domain, seed);
        FrequentistInput input;
        input.inequality = config.effective_inequality();
        if (config.split_dataset) {
            // alternate observations of each pair between the shape half and the budget half
            TransitionDataset budget_half(mdp.num_states(), mdp.num_actions());
            TransitionDataset shape_half(mdp.num_states(), mdp.num_actions());
            std::vector<std::size_t> seen(mdp.num_pairs(), 0);
            for (const auto& t : data.transitions()) {
                auto& k = seen[mdp.pair_index(t.state, t.action)];
                (k++ % 2 == 0 ? budget_half : shape_half).add(t);
            }
            input.data = &budget_half;
            input.shape_data = &shape_half;
            run.build = build_ambiguity_set(mdp, input, options);
            run.nominal_return = optimal_return(mdp, empirical_model(mdp, budget_half), config.tol);
        } else {
            input.data = &data;
            run.build = build_ambiguity_set(mdp, input, options);
            run.nominal_return = optimal_return(mdp, empirical_model(mdp, data), config.tol);
        }
    }

    run.solution = robust_value_iteration(mdp, run.build.set, config.tol, config.max_iterations);
    run.normalized_loss = normalized_loss(run.nominal_return, run.solution.robust_return);
    run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return run;
}

ValidationReport validate_guarantee(const ExperimentConfig& config, const RunResult& run) {
    require(config.mode == Mode::Bayesian, ErrorCode::Unsupported,
            "guarantee validation draws from the posterior and needs Bayesian mode");
    require(run.posterior.has_value(), ErrorCode::Unsupported,
            "guarantee validation needs a conjugate posterior; imported samples cannot be redrawn");
    const auto& mdp = run.domain.mdp;
    PosteriorSampler sampler(*run.posterior, derive_seed(run.seed, validation_stream));
    std::size_t good = 0, covered = 0;
    for (std::size_t i = 0; i < config.validation_samples; ++i) {
        const auto model = sampler.draw(i);
        if (return_of(mdp, model, run.solution.policy) >= run.solution.robust_return - 1e-9) ++good;
        if (set_contains(mdp, run.build.set, model)) ++covered;
    }
    ValidationReport report;
    report.samples = config.validation_samples;
    report.guarantee_fraction = double(good) / double(report.samples);
    report.coverage = double(covered) / double(report.samples);
    report.threshold = 1.0 - config.delta - 0.02;
    report.passed = report.guarantee_fraction >= report.threshold;
    return report;
}

double median(numvec values) {
    require(!values.empty(), ErrorCode::InvalidArgument, "median of an empty sample");
    std::sort(values.begin(), values.end());
    const auto n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

ExperimentTable run_experiment(const ExperimentConfig& config) {
    config.validate();
    const auto domains = config.bench_domains.empty() ? std::vector<std::string>{config.domain} : config.bench_domains;
    std::vector<Method> methods;
    if (config.bench_methods.empty()) {
        Method m;
        m.norm = config.norm;
        m.shape = config.shape;
        m.label = std::string(config.shape == ShapeMode::Analytic ? "optimized" : to_string(config.shape)) + "-" +
                  std::string(to_string(config.norm));
        methods.push_back(m);
    } else {
        for (const auto& label : config.bench_methods) methods.push_back(parse_method(label));
    }
    const auto deltas = config.bench_deltas.empty() ? std::vector<double>{config.delta} : config.bench_deltas;

    ExperimentTable table;
    table.seeds = config.seeds;
    for (const auto& domain : domains)
        for (const auto& method : methods)
            for (double delta : deltas) {
                SummaryRow summary;
                summary.domain = domain;
                summary.mode = std::string(to_string(config.mode));
                summary.method = method.label;
                summary.delta = delta;
                numvec robust, nominal, losses;
                for (auto seed : config.seeds) {
                    auto cell = config;
                    cell.domain = domain;
                    cell.norm = method.norm;
                    cell.shape = method.shape;
                    cell.delta = delta;
                    if (config.mode == Mode::Frequentist && config.inequality &&
                        inequality_norm(*config.inequality) != method.norm)
                        cell.inequality.reset();
                    ResultRow row;
                    row.domain = domain;
                    row.mode = summary.mode;
                    row.method = method.label;
                    row.delta = delta;
                    row.seed = seed;
                    try {
                        const auto run = run_single(cell, seed);
                        row.discount = run.domain.mdp.discount();
                        row.robust_return = run.solution.robust_return;
                        row.nominal_return = run.nominal_return;
                        row.loss = run.normalized_loss;
                        row.seconds = run.seconds;
                        if (config.bench_validate && config.mode == Mode::Bayesian && run.posterior)
                            row.guarantee_fraction = validate_guarantee(cell, run).guarantee_fraction;
                        summary.discount = row.discount;
                        robust.push_back(row.robust_return);
                        nominal.push_back(row.nominal_return);
                        losses.push_back(row.loss);
                    } catch (const std::exception& e) {
                        row.error = e.what();
                        ++summary.failures;
                    }
                    table.rows.push_back(std::move(row));
                }
                summary.runs = robust.size();
                if (!robust.empty()) {
                    summary.median_robust_return = median(robust);
                    summary.median_nominal_return = median(nominal);
                    summary.median_loss = median(losses);
                } else {
                    summary.median_robust_return = summary.median_nominal_return = summary.median_loss =
                        std::numeric_limits<double>::quiet_NaN();
                }
                table.summary.push_back(std::move(summary));
            }
    return table;
}

namespace {

std::string csv_field(const std::string& text) {
    if (text.find_first_of(",\"\n") == std::string::npos) return text;
    std::string out = "\"";
    for (char c : text) {
        if (c == '"') out += '"';
        out += c == '\n' ? ' ' : c;
    }
    return out + "\"";
}

} // namespace

std::string table_to_csv(const ExperimentTable& table) {
    std::string out = "domain,mode,method,delta,seed,discount,robust_return,nominal_return,normalized_loss,seconds,"
                      "guarantee_fraction,error\n";
    for (const auto& r : table.rows) {
        out += r.domain + "," + r.mode + "," + r.method + "," + io::format_double(r.delta) + "," +
               std::to_string(r.seed) + "," + io::format_double(r.discount) + "," +
               io::format_double(r.robust_return) + "," + io::format_double(r.nominal_return) + "," +
               io::format_double(r.loss) + "," + io::format_double(r.seconds) + "," +
               (r.guarantee_fraction ? io::format_double(*r.guarantee_fraction) : "") + "," + csv_field(r.error) +
               "\n";
    }
    return out;
}

std::string summary_to_csv(const ExperimentTable& table) {
    std::string out = "domain,mode,method,delta,discount,runs,failures,median_robust_return,median_nominal_return,"
                      "median_normalized_loss\n";
    for (const auto& s : table.summary)
        out += s.domain + "," + s.mode + "," + s.method + "," + io::format_double(s.delta) + "," +
               io::format_double(s.discount) + "," + std::to_string(s.runs) + "," + std::to_string(s.failures) + "," +
               io::format_double(s.median_robust_return) + "," + io::format_double(s.median_nominal_return) + "," +
               io::format_double(s.median_loss) + "\n";
    return out;
}

std::string format_table(const ExperimentTable& table) {
    std::ostringstream out;
    out << "# medians over seeds " << join(table.seeds, [](std::uint64_t s) { return std::to_string(s); })
        << "; rng " << Rng::algorithm << "\n";
    out << std::left << std::setw(22) << "domain" << std::setw(13) << "mode" << std::setw(16) << "method"
        << std::right << std::setw(7) << "delta" << std::setw(7) << "gamma" << std::setw(6) << "runs"
        << std::setw(15) << "robust" << std::setw(15) << "nominal" << std::setw(10) << "loss" << "\n";
    for (const auto& s : table.summary) {
        out << std::left << std::setw(22) << s.domain << std::setw(13) << s.mode << std::setw(16) << s.method
            << std::right << std::setw(7) << std::setprecision(3) << s.delta << std::setw(7) << s.discount
            << std::setw(6) << s.runs << std::setw(15) << std::setprecision(6) << s.median_robust_return
            << std::setw(15) << s.median_nominal_return << std::setw(10) << std::setprecision(3) << s.median_loss;
        if (s.failures > 0) out << "  (" << s.failures << " failed)";
        out << "\n";
    }
    return out.str();
}

std::string ambiguity_to_csv(const TabularMdp& mdp, const AmbiguitySet& amb) {
    std::string out = "idstatefrom,idaction,idstateto,norm,nominal,weight,budget\n";
    const auto norm = std::string(to_string(amb.kind));
    for (std::size_t s = 0; s < mdp.num_states(); ++s)
        for (std::size_t a = 0; a < mdp.num_actions(); ++a) {
            const auto& b = amb.ball(mdp, s, a);
            for (std::size_t next = 0; next < mdp.num_states(); ++next) {
                if (std::isinf(b.weights[next])) continue;
                out += std::to_string(s) + "," + std::to_string(a) + "," + std::to_string(next) + "," + norm + "," +
                       io::format_double(b.nominal[next]) + "," + io::format_double(b.weights[next]) + "," +
                       io::format_double(b.budget) + "\n";
            }
        }
    return out;
}

AmbiguitySet load_ambiguity_csv(const std::string& path, const TabularMdp& mdp) {
    const auto table = io::read_csv(path);
    const auto c_from = table.column("idstatefrom"), c_action = table.column("idaction"),
               c_to = table.column("idstateto"), c_norm = table.column("norm"), c_nominal = table.column("nominal"),
               c_weight = table.column("weight"), c_budget = table.column("budget");
    AmbiguitySet amb;
    amb.balls.resize(mdp.num_pairs());
    std::vector<bool> seen(mdp.num_pairs(), false);
    bool kind_set = false;
    for (auto& b : amb.balls) {
        b.nominal.assign(mdp.num_states(), 0.0);
        b.weights.assign(mdp.num_states(), infinite_weight);
    }
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto context = path + " row " + std::to_string(r + 1);
        const auto& f = table.rows[r];
        const auto s = io::parse_index(f[c_from], context), a = io::parse_index(f[c_action], context),
                   next = io::parse_index(f[c_to], context);
        require(s < mdp.num_states() && a < mdp.num_actions() && next < mdp.num_states(), ErrorCode::Parse,
                context + ": index out of range");
        const auto kind = parse_norm_kind(f[c_norm]);
        require(!kind_set || kind == amb.kind, ErrorCode::Parse, context + ": mixed norms");
        amb.kind = kind;
        kind_set = true;
        const auto pair = mdp.pair_index(s, a);
        auto& b = amb.balls[pair];
        b.kind = kind;
        b.nominal[next] = io::parse_double(f[c_nominal], context);
        b.weights[next] = io::parse_double(f[c_weight], context);
        const double budget = io::parse_double(f[c_budget], context);
        require(!seen[pair] || budget == b.budget, ErrorCode::Parse, context + ": inconsistent budget");
        b.budget = budget;
        seen[pair] = true;
    }
    for (std::size_t pair = 0; pair < mdp.num_pairs(); ++pair)
        require(seen[pair], ErrorCode::Parse, path + ": no rows for pair " + std::to_string(pair));
    amb.validate(mdp);
    return amb;
}

void save_run(const std::string& dir, const ExperimentConfig& config, const RunResult& run) {
    const auto& mdp = run.domain.mdp;
    const auto path = [&](const char* name) { return dir + "/" + name; };
    io::write_file(path("config.txt"), config_to_text(config));
    save_mdp_csv(path("mdp.csv"), mdp, run.build.set.nominal_model(mdp));

    std::string v = "state,value,action\n";
    for (std::size_t s = 0; s < mdp.num_states(); ++s)
        v += std::to_string(s) + "," + io::format_double(run.build.nominal_value[s]) + "," +
             std::to_string(run.build.nominal_policy[s]) + "\n";
    io::write_file(path("nominal_value.csv"), v);

    std::string z = "idstatefrom,idaction,idstateto,z\n";
    std::string psi = "idstatefrom,idaction,budget\n";
    for (std::size_t s = 0; s < mdp.num_states(); ++s)
        for (std::size_t a = 0; a < mdp.num_actions(); ++a) {
            const auto pair = mdp.pair_index(s, a);
            for (auto next : mdp.support(s, a))
                z += std::to_string(s) + "," + std::to_string(a) + "," + std::to_string(next) + "," +
                     io::format_double(run.build.z[pair][next]) + "\n";
            psi += std::to_string(s) + "," + std::to_string(a) + "," + io::format_double(run.build.uniform_budgets[pair]) +
                   "\n";
        }
    io::write_file(path("z.csv"), z);
    io::write_file(path("uniform_budgets.csv"), psi);
    io::write_file(path("ambiguity.csv"), ambiguity_to_csv(mdp, run.build.set));

    std::string sol = "state,value,action\n";
    for (std::size_t s = 0; s < mdp.num_states(); ++s)
        sol += std::to_string(s) + "," + io::format_double(run.solution.value[s]) + "," +
               std::to_string(run.solution.policy[s]) + "\n";
    io::write_file(path("solution.csv"), sol);

    std::ostringstream summary;
    summary << "domain = " << run.domain.name << "\n"
            << "seed = " << run.seed << "\n"
            << "rng = " << Rng::algorithm << "\n"
            << "discount = " << io::format_double(mdp.discount()) << "\n"
            << "robust_return = " << io::format_double(run.solution.robust_return) << "\n"
            << "nominal_return = " << io::format_double(run.nominal_return) << "\n"
            << "normalized_loss = " << io::format_double(run.normalized_loss) << "\n"
            << "iterations = " << run.solution.iterations << "\n"
            << "residual = " << io::format_double(run.solution.residual) << "\n"
            << "seconds = " << io::format_double(run.seconds) << "\n";
    io::write_file(path("summary.txt"), summary.str());
}

} // namespace pcrit
