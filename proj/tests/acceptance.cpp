// Acceptance checks. Prints one PASS or FAIL line per criterion and exits non-zero when any fails.

#include "support/ball_lp.hpp"
#include "support/random_instances.hpp"
#include "support/scalar_oracles.hpp"

#include <pcrit/pipeline.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <vector>

using namespace pcrit;

namespace {

using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool condition, const std::string& what) {
        if (!condition) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

int failures = 0;

void report(int id, const std::string& title, Outcome& outcome) {
    if (!outcome.pass) ++failures;
    std::printf("%s [%d] %s:%s\n", outcome.pass ? "PASS" : "FAIL", id, title.c_str(), outcome.detail.str().c_str());
    std::fflush(stdout);
}

// sup-norm distance between v and one robust Bellman update of v
double fixed_point_residual(const TabularMdp& mdp, const AmbiguitySet& amb, const ValueFunction& v) {
    const auto next = robust_bellman_apply(mdp, amb, v);
    double worst = 0.0;
    for (std::size_t s = 0; s < mdp.num_states(); ++s) worst = std::max(worst, std::abs(next[s] - v[s]));
    return worst;
}

// Bayesian runs feed criterion 4, every robust solve feeds the residual check of criterion 9.
struct Ledger {
    struct Entry {
        std::string label;
        ExperimentConfig config;
        RunResult run;
    };
    std::vector<Entry> bayesian;
    double worst_residual_ratio = 0.0;

    void note_residual(const RunResult& run, double tol) {
        const double r = fixed_point_residual(run.domain.mdp, run.build.set, run.solution.value);
        worst_residual_ratio = std::max(worst_residual_ratio, r / tol);
    }
};

Ledger ledger;

const std::vector<std::string> table_methods{"uniform-l1", "optimized-l1", "uniform-linf", "optimized-linf"};
const std::vector<std::uint64_t> eleven_seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};

ExperimentConfig base_config(const std::string& domain, Mode mode, double delta) {
    ExperimentConfig c;
    c.domain = domain;
    c.mode = mode;
    c.delta = delta;
    c.validation_samples = 1000;
    return c;
}

void criterion1() {
    Outcome out;
    const auto start = Clock::now();
    auto config = base_config("example1", Mode::Bayesian, 0.2);
    config.samples = 10000;
    config.dataset_size = 0;
    config.norm = NormKind::WeightedL1;

    config.shape = ShapeMode::Analytic;
    auto optimized = run_single(config, 1);
    config.shape = ShapeMode::Uniform;
    auto uniform = run_single(config, 1);
    const double seconds = elapsed(start);

    const double opt = optimized.solution.robust_return, std_ = uniform.solution.robust_return;
    out.detail << " rho_opt=" << opt << " rho_std=" << std_ << " gap=" << opt - std_ << " time=" << seconds << "s";
    out.require(opt > std_, "rho_opt > rho_std");
    out.require(opt - std_ >= 0.10, "gap >= 0.10");
    out.require(opt >= 0.05 && opt <= 0.25, "rho_opt in [0.05, 0.25]");
    out.require(seconds < 5.0, "runtime < 5 s");

    ledger.note_residual(optimized, config.tol);
    ledger.note_residual(uniform, config.tol);
    auto opt_config = config;
    opt_config.shape = ShapeMode::Analytic;
    ledger.bayesian.push_back({"example1/optimized-l1/seed1", opt_config, std::move(optimized)});
    ledger.bayesian.push_back({"example1/uniform-l1/seed1", config, std::move(uniform)});
    report(1, "example1 domain, analytic vs uniform L1 weights at delta=0.2", out);
}

// Median normalized loss per (domain, method) over the eleven seeds.
using LossTable = std::map<std::pair<std::string, std::string>, double>;

LossTable run_grid(Mode mode, bool keep_for_validation, double& seconds) {
    LossTable medians;
    const auto start = Clock::now();
    for (const std::string domain : {"riverswim", "inventory"})
        for (const auto& label : table_methods) {
            const auto method = parse_method(label);
            auto config = base_config(domain, mode, 0.05);
            config.norm = method.norm;
            config.shape = method.shape;
            numvec losses;
            for (auto seed : eleven_seeds) {
                auto run = run_single(config, seed);
                losses.push_back(run.normalized_loss);
                ledger.note_residual(run, config.tol);
                if (keep_for_validation)
                    ledger.bayesian.push_back(
                        {domain + "/" + label + "/seed" + std::to_string(seed), config, std::move(run)});
            }
            medians[{domain, label}] = median(losses);
        }
    seconds = elapsed(start);
    return medians;
}

void describe(Outcome& out, const LossTable& medians) {
    for (const auto& [key, loss] : medians) out.detail << " " << key.first << "/" << key.second << "=" << loss;
}

void require_orderings(Outcome& out, const LossTable& m) {
    for (const std::string domain : {"riverswim", "inventory"}) {
        out.require(m.at({domain, "optimized-l1"}) < m.at({domain, "uniform-l1"}),
                    domain + " optimized-l1 < uniform-l1");
        out.require(m.at({domain, "optimized-linf"}) < m.at({domain, "uniform-linf"}),
                    domain + " optimized-linf < uniform-linf");
    }
}

void criterion2() {
    Outcome out;
    double seconds = 0.0;
    const auto medians = run_grid(Mode::Bayesian, true, seconds);
    describe(out, medians);
    out.detail << " time=" << seconds << "s";
    require_orderings(out, medians);
    out.require(medians.at({"riverswim", "optimized-l1"}) <= 0.45, "riverswim optimized-l1 <= 0.45");
    out.require(seconds < 120.0, "runtime < 2 min");
    report(2, "Bayesian median normalized loss orderings, delta=0.05, 11 seeds", out);
}

void criterion3() {
    Outcome out;
    double seconds = 0.0;
    const auto medians = run_grid(Mode::Frequentist, false, seconds);
    describe(out, medians);
    out.detail << " time=" << seconds << "s";
    require_orderings(out, medians);
    out.require(seconds < 120.0, "runtime < 2 min");
    report(3, "Frequentist Hoeffding median normalized loss orderings, delta=0.05, 11 seeds", out);
}

void criterion4() {
    Outcome out;
    double lowest = 2.0;
    std::string lowest_label;
    std::size_t failed = 0;
    for (const auto& entry : ledger.bayesian) {
        const auto r = validate_guarantee(entry.config, entry.run);
        if (r.guarantee_fraction < lowest) {
            lowest = r.guarantee_fraction;
            lowest_label = entry.label;
        }
        if (r.guarantee_fraction < 1.0 - entry.config.delta - 0.02) {
            ++failed;
            out.require(false, entry.label + " fraction " + std::to_string(r.guarantee_fraction));
        }
    }
    out.detail << " runs=" << ledger.bayesian.size() << " below_threshold=" << failed << " lowest=" << lowest << " ("
               << lowest_label << ")";
    out.require(!ledger.bayesian.empty(), "at least one Bayesian run");
    report(4, "Posterior guarantee on 1000 fresh samples for every Bayesian run", out);
}

// weighted distance of a sample row from the nominal row, unreachable entries contribute nothing when zero
double distance(std::span<const double> p, std::span<const double> nominal, std::span<const double> w, NormKind kind) {
    double total = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double d = std::abs(p[i] - nominal[i]);
        if (d == 0.0) continue;
        const double term = w[i] * d;
        total = kind == NormKind::WeightedL1 ? total + term : std::max(total, term);
    }
    return total;
}

void criterion5() {
    Outcome out;
    const double delta = 0.05;
    const std::size_t n = 1000;
    double lowest_coverage = 2.0;
    std::size_t cases = 0;
    for (const std::string name : {"riverswim", "machine-replacement", "example1"})
        for (auto kind : {NormKind::WeightedL1, NormKind::WeightedLInf})
            for (std::uint64_t seed : {1, 2}) {
                ++cases;
                const auto domain = make_domain(name);
                const auto& mdp = domain.mdp;
                const auto prior = domain.prior ? *domain.prior : DirichletPosterior::uniform_prior(mdp, 1.0);
                const auto data = sample_dataset(mdp, domain.truth, name == "example1" ? 0 : 20, seed);
                const auto posterior = dirichlet_posterior(data, prior);
                const auto samples = sample_posterior(posterior, n, derive_seed(seed, posterior_stream));
                BuildOptions options;
                options.kind = kind;
                options.delta = delta;
                const auto build = build_ambiguity_set(mdp, BayesianInput{&samples}, options);

                // exact containment count per pair, no tolerance
                const double pairs = double(mdp.num_pairs());
                const auto needed = std::size_t(std::ceil((1.0 - delta / pairs) * double(n) - 1e-9));
                for (std::size_t s = 0; s < mdp.num_states(); ++s)
                    for (std::size_t a = 0; a < mdp.num_actions(); ++a) {
                        const auto& ball = build.set.balls[mdp.pair_index(s, a)];
                        std::size_t inside = 0;
                        for (const auto& model : samples.models)
                            if (distance(model.row(s, a), ball.nominal, ball.weights, kind) <= ball.budget) ++inside;
                        if (inside < needed)
                            out.require(false, name + " pair (" + std::to_string(s) + "," + std::to_string(a) +
                                                   ") contains " + std::to_string(inside) + " < " +
                                                   std::to_string(needed));
                    }

                // joint coverage on fresh draws from an unrelated stream
                PosteriorSampler fresh(posterior, derive_seed(seed, 999));
                std::size_t covered = 0;
                for (std::size_t i = 0; i < 1000; ++i)
                    if (set_contains(mdp, build.set, fresh.draw(i))) ++covered;
                const double coverage = double(covered) / 1000.0;
                lowest_coverage = std::min(lowest_coverage, coverage);
                if (coverage < 1.0 - delta - 0.02)
                    out.require(false, name + " coverage " + std::to_string(coverage));
            }
    out.detail << " sets=" << cases << " lowest_fresh_coverage=" << lowest_coverage;
    report(5, "Credible sets from 1000 samples: fresh coverage and per-pair containment", out);
}

void criterion6() {
    Outcome out;
    gen::Engine rng(6006);
    double worst = 0.0;
    for (int trial = 0; trial < 500; ++trial) {
        const auto k = gen::index(rng, 1, 6);
        const auto kind = trial % 2 ? NormKind::WeightedL1 : NormKind::WeightedLInf;
        const auto ball = gen::ball(rng, k, kind, true);
        const auto z = gen::values(rng, k);
        const double lo = oracle::ball_optimum(z, ball, false), hi = oracle::ball_optimum(z, ball, true);
        worst = std::max({worst, std::abs(worst_case_expectation(z, ball, Sense::Min).value - lo),
                          std::abs(worst_case_expectation(z, ball, Sense::Max).value - hi),
                          std::abs(ambiguity_span(z, ball) - (hi - lo))});
    }
    out.detail << " instances=500 max_abs_error=" << worst;
    out.require(worst <= 1e-8, "all within 1e-8");
    report(6, "Inner worst-case problems and span against a generic LP", out);
}

void criterion7() {
    Outcome out;
    std::size_t violations[4] = {0, 0, 0, 0};

    gen::Engine rng(7007);
    for (int trial = 0; trial < 200; ++trial) {  // span below the dual-norm bound for any shift
        const auto k = gen::index(rng, 1, 6);
        const auto kind = trial % 2 ? NormKind::WeightedL1 : NormKind::WeightedLInf;
        const auto ball = gen::ball(rng, k, kind, true);
        const auto z = gen::values(rng, k);
        const double span = ambiguity_span(z, ball);
        for (int j = 0; j < 100; ++j)
            if (span > dual_norm_bound(z, ball.weights, ball.budget, gen::uniform(rng, -6, 6), kind) + 1e-10)
                ++violations[0];
    }
    for (int trial = 0; trial < 200; ++trial) {  // weighted L1 / Linf duality by vertex enumeration
        const auto k = gen::index(rng, 1, 8);
        numvec z(k), w(k), inverse(k);
        for (std::size_t i = 0; i < k; ++i) {
            z[i] = gen::uniform(rng, -3, 3);
            w[i] = gen::uniform(rng, 0.1, 3);
            inverse[i] = 1.0 / w[i];
        }
        double best = -1e300;
        for (std::size_t i = 0; i < k; ++i) best = std::max({best, z[i] / w[i], -z[i] / w[i]});
        const double dual = weighted_norm(z, inverse, NormKind::WeightedLInf);
        if (std::abs(best - dual) > 1e-12 * std::max(1.0, std::abs(dual))) ++violations[1];
    }
    for (int trial = 0; trial < 200; ++trial) {  // span monotone in the budget
        const auto k = gen::index(rng, 1, 6);
        auto small = gen::ball(rng, k, trial % 2 ? NormKind::WeightedL1 : NormKind::WeightedLInf, true);
        auto large = small;
        large.budget += gen::uniform(rng, 0, 1);
        const auto z = gen::values(rng, k);
        if (ambiguity_span(z, small) > ambiguity_span(z, large) + 1e-10) ++violations[2];
    }
    for (int trial = 0; trial < 200; ++trial) {  // analytic weights minimize the bound over unit weights
        const auto k = gen::index(rng, 1, 8);
        numvec z(k);
        for (auto& x : z) x = gen::uniform(rng, -5, 5);
        const auto kind = trial % 2 ? NormKind::WeightedL1 : NormKind::WeightedLInf;
        const double lambda = trial % 4 < 2 ? default_lambda(z, kind) : gen::uniform(rng, -6, 6);
        const double psi = gen::uniform(rng, 0.05, 2.0);
        const auto best = optimize_weights_analytic(z, lambda, kind);
        const double optimum = dual_norm_bound(z, best, psi, lambda, kind);
        for (int j = 0; j < 100; ++j)
            if (optimum > dual_norm_bound(z, gen::unit_weights(rng, k), psi, lambda, kind) + 1e-9) ++violations[3];
    }
    out.detail << " violations: dual_bound=" << violations[0] << " duality=" << violations[1]
               << " budget_monotone=" << violations[2] << " weight_optimality=" << violations[3];
    out.require(violations[0] + violations[1] + violations[2] + violations[3] == 0, "no violations");
    report(7, "Dual bound, norm duality, budget monotonicity and weight optimality suites (200 instances each)", out);
}

void criterion8() {
    Outcome out;
    gen::Engine rng(8008);
    std::size_t bad = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto S = gen::index(rng, 2, 10), A = gen::index(rng, 1, 3);
        const auto n = gen::index(rng, 1, 10000);
        const double delta = gen::uniform(rng, 0.01, 0.49);
        auto w = gen::unit_weights(rng, S);
        std::sort(w.rbegin(), w.rend());
        for (auto ineq : {Inequality::HoeffdingLInf, Inequality::HoeffdingL1, Inequality::BernsteinL1}) {
            const double psi = frequentist_budget(ineq, n, w, S, A, delta);
            const bool holds = oracle::rhs_oracle(ineq, psi, double(n), w, double(S), double(A)) <= delta;
            const bool tight = oracle::rhs_oracle(ineq, psi - 1e-6, double(n), w, double(S), double(A)) > delta;
            if (!holds || !tight) ++bad;
        }
    }
    const numvec uniform2{1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)};
    const double linf = hoeffding_linf_budget(100, uniform2, 2, 1, 0.05);
    const double l1 = hoeffding_l1_budget(100, numvec{0.6, 0.8}, 2, 1, 0.05);
    out.detail << " bracket_failures=" << bad << "/300 linf_example=" << linf << " l1_example=" << l1;
    out.require(bad == 0, "every budget brackets the crossing");
    out.require(std::abs(linf - 0.112641) <= 1e-5, "Linf example 0.112641");
    out.require(std::abs(l1 - 0.25488) <= 1e-5, "L1 example 0.25488");
    report(8, "Frequentist bisection budgets and worked examples", out);
}

void criterion9() {
    Outcome out;
    const double tol = default_tolerance;
    double worst_gap = 0.0;
    for (const auto& name : domain_names()) {
        const auto d = make_domain(name);
        for (auto kind : {NormKind::WeightedL1, NormKind::WeightedLInf}) {
            AmbiguitySet amb;
            amb.kind = kind;
            for (std::size_t s = 0; s < d.mdp.num_states(); ++s)
                for (std::size_t a = 0; a < d.mdp.num_actions(); ++a) {
                    BallSpec ball;
                    ball.kind = kind;
                    const auto row = d.truth.row(s, a);
                    ball.nominal.assign(row.begin(), row.end());
                    std::vector<std::uint8_t> reachable(d.mdp.num_states(), 0);
                    for (auto next : d.mdp.support(s, a)) reachable[next] = 1;
                    ball.weights = uniform_weights(d.mdp.num_states(), reachable);
                    ball.budget = 0.0;
                    amb.balls.push_back(std::move(ball));
                }
            const auto robust = robust_value_iteration(d.mdp, amb, tol);
            const auto nominal = solve_nominal(d.mdp, d.truth, tol);
            const double gap = sup_distance(robust.value.values, nominal.value.values);
            worst_gap = std::max(worst_gap, gap);
            if (gap > 2 * tol) out.require(false, name + " values differ by " + std::to_string(gap));
            if (!(robust.policy == nominal.policy)) out.require(false, name + " policies differ");
            const double r = fixed_point_residual(d.mdp, amb, robust.value);
            ledger.worst_residual_ratio = std::max(ledger.worst_residual_ratio, r / tol);
        }
    }
    out.detail << " domains=" << domain_names().size() << " max_value_gap=" << worst_gap
               << " max_residual_over_tol=" << ledger.worst_residual_ratio;
    out.require(ledger.worst_residual_ratio <= 2.0, "fixed-point residual <= 2 tol on every run");
    report(9, "Zero budgets reproduce the nominal solve; residuals of all robust solves", out);
}

void criterion10() {
    Outcome out;
    gen::Engine rng(1010);
    double worst = 0.0;
    std::size_t above = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto k = gen::index(rng, 1, 10);
        numvec z(k);
        for (auto& x : z) x = gen::uniform(rng, -10, 10);
        const double psi = gen::uniform(rng, 0.0, 2.0);
        const auto r = optimize_weights_socp(z, psi);
        worst = std::max(worst, std::abs(r.bound - psi * oracle::grid_ternary_min(z)));
        const double lambda = default_lambda(z, NormKind::WeightedL1);
        const auto w = optimize_weights_analytic(z, lambda, NormKind::WeightedL1);
        if (r.bound > dual_norm_bound(z, w, psi, lambda, NormKind::WeightedL1) + 1e-12) ++above;
    }
    out.detail << " instances=100 max_abs_error=" << worst << " above_analytic=" << above;
    out.require(worst <= 1e-6, "within 1e-6 of grid and ternary search");
    out.require(above == 0, "never above the analytic bound");
    report(10, "SOCP weight optimum against grid and ternary search", out);
}

template <class F>
void guarded(int id, const std::string& title, F&& body) {
    try {
        body();
    } catch (const std::exception& e) {
        Outcome out;
        out.require(false, std::string("exception: ") + e.what());
        report(id, title, out);
    }
}

} // namespace

int main() {
    const auto start = Clock::now();
    guarded(1, "example1 domain", criterion1);
    guarded(2, "Bayesian orderings", criterion2);
    guarded(3, "Frequentist orderings", criterion3);
    guarded(4, "Posterior guarantee", criterion4);
    guarded(5, "Credible set coverage", criterion5);
    guarded(6, "LP oracle equivalence", criterion6);
    guarded(7, "Property suites", criterion7);
    guarded(8, "Frequentist bisection", criterion8);
    guarded(9, "Zero-budget reduction", criterion9);
    guarded(10, "SOCP reduction", criterion10);
    std::printf("%d of 10 criteria failed (%.1f s total)\n", failures, elapsed(start));
    return failures == 0 ? 0 : 1;
}
