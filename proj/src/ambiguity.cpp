#include "pcrit/ambiguity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace pcrit {

std::string_view to_string(ShapeMode mode) {
    switch (mode) {
    case ShapeMode::Uniform: return "uniform";
    case ShapeMode::Analytic: return "analytic";
    case ShapeMode::Socp: return "socp";
    }
    return "?";
}

std::string_view to_string(Inequality inequality) {
    switch (inequality) {
    case Inequality::HoeffdingLInf: return "hoeffding-linf";
    case Inequality::HoeffdingL1: return "hoeffding-l1";
    case Inequality::BernsteinL1: return "bernstein-l1";
    }
    return "?";
}

ShapeMode parse_shape_mode(std::string_view text) {
    if (text == "uniform") return ShapeMode::Uniform;
    if (text == "analytic" || text == "optimized") return ShapeMode::Analytic;
    if (text == "socp") return ShapeMode::Socp;
    fail(ErrorCode::InvalidArgument, "unknown shape mode '" + std::string(text) + "' (uniform, analytic, socp)");
}

Inequality parse_inequality(std::string_view text) {
    if (text == "hoeffding-linf") return Inequality::HoeffdingLInf;
    if (text == "hoeffding-l1") return Inequality::HoeffdingL1;
    if (text == "bernstein-l1") return Inequality::BernsteinL1;
    fail(ErrorCode::InvalidArgument,
         "unknown inequality '" + std::string(text) + "' (hoeffding-linf, hoeffding-l1, bernstein-l1)");
}

NormKind inequality_norm(Inequality inequality) {
    return inequality == Inequality::HoeffdingLInf ? NormKind::WeightedLInf : NormKind::WeightedL1;
}

namespace {

bool is_reachable(std::span<const std::uint8_t> reachable, std::size_t i) {
    return reachable.empty() || reachable[i] != 0;
}

void check_mask(std::size_t size, std::span<const std::uint8_t> reachable) {
    require(reachable.empty() || reachable.size() == size, ErrorCode::InvalidArgument,
            "reachability mask has wrong length");
}

// Unit-normalizes the finite entries, then lifts zeros to the floor and renormalizes.
void normalize_with_floor(numvec& w, std::span<const std::uint8_t> reachable) {
    auto norm = [&] {
        double total = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i)
            if (is_reachable(reachable, i)) total += w[i] * w[i];
        return std::sqrt(total);
    };
    const double first = norm();
    for (std::size_t i = 0; i < w.size(); ++i)
        if (is_reachable(reachable, i)) w[i] = w[i] / first;
    bool lifted = false;
    for (std::size_t i = 0; i < w.size(); ++i)
        if (is_reachable(reachable, i) && w[i] == 0.0) {
            w[i] = weight_floor;
            lifted = true;
        }
    if (lifted) {
        const double second = norm();
        for (std::size_t i = 0; i < w.size(); ++i)
            if (is_reachable(reachable, i)) w[i] /= second;
    }
}

} // namespace

double default_lambda(std::span<const double> z, NormKind kind) {
    require(!z.empty(), ErrorCode::InvalidArgument, "default_lambda needs a nonempty vector");
    if (kind == NormKind::WeightedLInf) {
        const auto [lo, hi] = std::minmax_element(z.begin(), z.end());
        return (*lo + *hi) / 2.0;
    }
    numvec sorted(z.begin(), z.end());
    std::sort(sorted.begin(), sorted.end());
    const auto n = sorted.size();
    return n % 2 == 1 ? sorted[n / 2] : (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0;
}

numvec uniform_weights(std::size_t size, std::span<const std::uint8_t> reachable) {
    check_mask(size, reachable);
    std::size_t count = 0;
    for (std::size_t i = 0; i < size; ++i) count += is_reachable(reachable, i);
    require(count > 0, ErrorCode::InvalidArgument, "no reachable successor");
    numvec w(size, infinite_weight);
    for (std::size_t i = 0; i < size; ++i)
        if (is_reachable(reachable, i)) w[i] = 1.0 / std::sqrt(double(count));
    return w;
}

numvec optimize_weights_analytic(std::span<const double> z, double lambda, NormKind kind,
                                 std::span<const std::uint8_t> reachable) {
    check_mask(z.size(), reachable);
    // An L1 set's span bound is max_i b_i / w_i, minimized on the unit sphere by w ~ b;
    // an Linf set's bound is sum_i b_i / w_i, minimized by w ~ b^(1/3).
    numvec w(z.size(), infinite_weight);
    bool any = false;
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (!is_reachable(reachable, i)) continue;
        const double b = std::abs(z[i] - lambda);
        w[i] = kind == NormKind::WeightedL1 ? b : std::cbrt(b);
        any = any || w[i] > 0.0;
    }
    if (!any) return uniform_weights(z.size(), reachable);
    normalize_with_floor(w, reachable);
    return w;
}

SocpWeights optimize_weights_socp(std::span<const double> z, double psi, std::span<const std::uint8_t> reachable) {
    check_mask(z.size(), reachable);
    require(psi >= 0.0, ErrorCode::InvalidArgument, "budget must be nonnegative");
    double total = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < z.size(); ++i)
        if (is_reachable(reachable, i)) {
            total += z[i];
            ++count;
        }
    require(count > 0, ErrorCode::InvalidArgument, "no reachable successor");
    SocpWeights result;
    result.lambda = total / double(count);
    double squares = 0.0;
    numvec g(z.size(), infinite_weight);
    for (std::size_t i = 0; i < z.size(); ++i)
        if (is_reachable(reachable, i)) {
            g[i] = std::abs(z[i] - result.lambda);
            squares += g[i] * g[i];
        }
    const double c = std::sqrt(squares);
    result.bound = psi * c;
    if (c == 0.0) {
        result.weights = uniform_weights(z.size(), reachable);
        return result;
    }
    normalize_with_floor(g, reachable);
    result.weights = std::move(g);
    return result;
}

std::size_t credible_index(std::size_t samples, double delta, std::size_t pairs) {
    require(samples >= 1, ErrorCode::InvalidArgument, "need at least one sample");
    require(delta > 0.0 && delta < 0.5, ErrorCode::InvalidArgument, "delta must lie in (0, 0.5)");
    require(pairs >= 1, ErrorCode::InvalidArgument, "need at least one state-action pair");
    const double n = double(samples);
    // the guard absorbs rounding in products such as 0.95 * 1000
    const double target = n - n * delta / double(pairs);
    const auto index = std::size_t(std::ceil(target - 1e-9 * n));
    return std::clamp<std::size_t>(index, 1, samples);
}

double bayes_budget(const PosteriorSampleSet& samples, std::size_t s, std::size_t a, std::span<const double> nominal,
                    std::span<const double> weights, NormKind kind, double delta, std::size_t pairs) {
    const auto index = credible_index(samples.size(), delta, pairs);
    numvec distances;
    distances.reserve(samples.size());
    numvec diff(nominal.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto row = samples.models[i].row(s, a);
        for (std::size_t next = 0; next < nominal.size(); ++next) {
            require(!(std::isinf(weights[next]) && row[next] != 0.0), ErrorCode::SupportViolation,
                    "posterior sample " + std::to_string(i) + " puts mass on an unreachable successor");
            diff[next] = row[next] - nominal[next];
        }
        distances.push_back(weighted_norm(diff, weights, kind));
    }
    std::nth_element(distances.begin(), distances.begin() + std::ptrdiff_t(index - 1), distances.end());
    return distances[index - 1];
}

double concentration_rhs(Inequality inequality, double psi, std::uint64_t count, std::span<const double> weights,
                         std::size_t states, std::size_t actions) {
    numvec w;
    for (double x : weights)
        if (!std::isinf(x)) w.push_back(x);
    const double n = double(count);
    const double factor = 2.0 * double(states) * double(actions);
    double total = 0.0;
    if (inequality == Inequality::HoeffdingLInf) {
        for (double wi : w) total += std::exp(-2.0 * psi * psi * n / (wi * wi));
        return factor * total;
    }
    std::sort(w.begin(), w.end(), std::greater<>());
    const auto k = w.size();
    for (std::size_t i = 1; i < k; ++i) {
        const double wi = w[i - 1];
        const double exponent = inequality == Inequality::HoeffdingL1
                                    ? -psi * psi * n / (2.0 * wi * wi)
                                    : -3.0 * psi * psi * n / (6.0 * wi * wi + 4.0 * psi * wi);
        total += std::exp2(double(k - i)) * std::exp(exponent);
    }
    return factor * total;
}

double frequentist_budget(Inequality inequality, std::uint64_t count, std::span<const double> weights,
                          std::size_t states, std::size_t actions, double delta) {
    require(delta > 0.0 && delta < 0.5, ErrorCode::InvalidArgument, "delta must lie in (0, 0.5)");
    double largest = 0.0;
    std::size_t finite = 0;
    for (double x : weights) {
        if (std::isinf(x)) continue;
        require(x > 0.0, ErrorCode::InvalidArgument, "weights must be positive");
        largest = std::max(largest, x);
        ++finite;
    }
    require(finite > 0, ErrorCode::InvalidArgument, "no reachable successor");
    if (finite == 1) return 0.0;
    // any two distributions are within 2 * max weight of each other in both norms
    if (count == 0) return 2.0 * largest;
    auto rhs = [&](double psi) { return concentration_rhs(inequality, psi, count, weights, states, actions); };
    double lo = 0.0, hi = 1.0;
    while (rhs(hi) > delta) {
        lo = hi;
        hi *= 2.0;
    }
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        if (rhs(mid) <= delta) hi = mid;
        else lo = mid;
    }
    return hi;
}

double hoeffding_linf_budget(std::uint64_t count, std::span<const double> weights, std::size_t states,
                             std::size_t actions, double delta) {
    return frequentist_budget(Inequality::HoeffdingLInf, count, weights, states, actions, delta);
}
double hoeffding_l1_budget(std::uint64_t count, std::span<const double> weights, std::size_t states,
                           std::size_t actions, double delta) {
    return frequentist_budget(Inequality::HoeffdingL1, count, weights, states, actions, delta);
}
double bernstein_l1_budget(std::uint64_t count, std::span<const double> weights, std::size_t states,
                           std::size_t actions, double delta) {
    return frequentist_budget(Inequality::BernsteinL1, count, weights, states, actions, delta);
}

NormKind choose_norm(const ValueFunction& v) {
    require(v.size() > 0, ErrorCode::InvalidArgument, "empty value function");
    const double mean = std::accumulate(v.values.begin(), v.values.end(), 0.0) / double(v.size());
    const double median = default_lambda(v.values, NormKind::WeightedL1);
    double spread_l1 = 0.0, spread_linf = 0.0;
    for (double x : v.values) {
        spread_l1 += std::abs(x - mean);
        spread_linf = std::max(spread_linf, std::abs(x - median));
    }
    return spread_l1 > std::sqrt(double(v.size())) * spread_linf ? NormKind::WeightedL1 : NormKind::WeightedLInf;
}

TransitionModel empirical_model(const TabularMdp& mdp, const TransitionDataset& data) {
    require(data.num_states() == mdp.num_states() && data.num_actions() == mdp.num_actions(),
            ErrorCode::InvalidArgument, "dataset dimensions do not match the MDP");
    auto model = TransitionModel::zeros(mdp.num_states(), mdp.num_actions());
    for (std::size_t s = 0; s < mdp.num_states(); ++s)
        for (std::size_t a = 0; a < mdp.num_actions(); ++a) {
            auto row = model.row_mut(s, a);
            const auto total = data.pair_count(s, a);
            for (std::size_t next = 0; next < mdp.num_states(); ++next) {
                const auto c = data.count(s, a, next);
                require(c == 0 || mdp.supported(s, a, next), ErrorCode::SupportViolation,
                        "observed transition from state " + std::to_string(s) + " action " + std::to_string(a) +
                            " leaves the MDP support");
                if (total > 0) row[next] = double(c) / double(total);
            }
            if (total == 0) {
                const auto support = mdp.support(s, a);
                for (auto next : support) row[next] = 1.0 / double(support.size());
            }
        }
    return model;
}

namespace {

std::span<const std::uint8_t> support_row(const TabularMdp& mdp, std::size_t s, std::size_t a) {
    return {mdp.support_mask().data() + mdp.pair_index(s, a) * mdp.num_states(), mdp.num_states()};
}

// Steps shared by both modes; `budgets` maps per-pair weights to per-pair budgets.
template <class BudgetRule>
AmbiguityBuild assemble(const TabularMdp& mdp, const TransitionModel& nominal, const TransitionModel& shape_model,
                        const BuildOptions& options, BudgetRule budgets) {
    require(options.shape != ShapeMode::Socp || options.kind == NormKind::WeightedL1, ErrorCode::Unsupported,
            "the SOCP shape mode is defined for L1 sets only");
    AmbiguityBuild build;
    const auto solution = solve_nominal(mdp, shape_model, options.tol);
    build.nominal_value = solution.value;
    build.nominal_policy = solution.policy;
    build.z = compute_z(mdp, solution.value);

    const auto pairs = mdp.num_pairs();
    std::vector<numvec> uniform(pairs);
    for (std::size_t s = 0; s < mdp.num_states(); ++s)
        for (std::size_t a = 0; a < mdp.num_actions(); ++a)
            uniform[mdp.pair_index(s, a)] = uniform_weights(mdp.num_states(), support_row(mdp, s, a));
    build.uniform_budgets = budgets(uniform);

    if (options.shape == ShapeMode::Uniform) {
        build.weights = std::move(uniform);
        build.budgets = build.uniform_budgets;
    } else {
        build.weights.resize(pairs);
        for (std::size_t s = 0; s < mdp.num_states(); ++s)
            for (std::size_t a = 0; a < mdp.num_actions(); ++a) {
                const auto pair = mdp.pair_index(s, a);
                const auto mask = support_row(mdp, s, a);
                if (options.shape == ShapeMode::Socp) {
                    build.weights[pair] = optimize_weights_socp(build.z[pair], build.uniform_budgets[pair], mask).weights;
                    continue;
                }
                numvec reachable_z;
                for (auto next : mdp.support(s, a)) reachable_z.push_back(build.z[pair][next]);
                const double lambda = default_lambda(reachable_z, options.kind);
                build.weights[pair] = optimize_weights_analytic(build.z[pair], lambda, options.kind, mask);
            }
        build.budgets = budgets(build.weights);
    }

    build.set.kind = options.kind;
    build.set.balls.resize(pairs);
    for (std::size_t s = 0; s < mdp.num_states(); ++s)
        for (std::size_t a = 0; a < mdp.num_actions(); ++a) {
            const auto pair = mdp.pair_index(s, a);
            auto& ball = build.set.balls[pair];
            ball.kind = options.kind;
            const auto row = nominal.row(s, a);
            ball.nominal.assign(row.begin(), row.end());
            ball.weights = build.weights[pair];
            ball.budget = build.budgets[pair];
        }
    build.set.validate(mdp);
    return build;
}

} // namespace

AmbiguityBuild build_ambiguity_set(const TabularMdp& mdp, const BayesianInput& input, const BuildOptions& options) {
    require(input.samples != nullptr && input.samples->size() > 0, ErrorCode::InvalidArgument,
            "Bayesian construction needs posterior samples");
    const auto& samples = *input.samples;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        try {
            samples.models[i].validate(mdp, 1e-9);
        } catch (const Error& e) {
            fail(ErrorCode::SupportViolation, "posterior sample " + std::to_string(i) + ": " + e.what());
        }
    }
    const auto nominal = sample_mean(samples);
    const auto rule = [&](const std::vector<numvec>& weights) {
        numvec budgets(mdp.num_pairs());
        for (std::size_t s = 0; s < mdp.num_states(); ++s)
            for (std::size_t a = 0; a < mdp.num_actions(); ++a) {
                const auto pair = mdp.pair_index(s, a);
                budgets[pair] = bayes_budget(samples, s, a, nominal.row(s, a), weights[pair], options.kind,
                                             options.delta, mdp.num_pairs());
            }
        return budgets;
    };
    return assemble(mdp, nominal, nominal, options, rule);
}

AmbiguityBuild build_ambiguity_set(const TabularMdp& mdp, const FrequentistInput& input, const BuildOptions& options) {
    require(input.data != nullptr, ErrorCode::InvalidArgument, "frequentist construction needs a dataset");
    require(inequality_norm(input.inequality) == options.kind, ErrorCode::InvalidArgument,
            std::string("inequality ") + std::string(to_string(input.inequality)) + " does not bound the " +
                std::string(to_string(options.kind)) + " norm");
    const auto& data = *input.data;
    const auto nominal = empirical_model(mdp, data);
    const auto shape_model = input.shape_data != nullptr ? empirical_model(mdp, *input.shape_data) : nominal;
    const auto rule = [&](const std::vector<numvec>& weights) {
        numvec budgets(mdp.num_pairs());
        for (std::size_t s = 0; s < mdp.num_states(); ++s)
            for (std::size_t a = 0; a < mdp.num_actions(); ++a) {
                const auto pair = mdp.pair_index(s, a);
                budgets[pair] = frequentist_budget(input.inequality, data.pair_count(s, a), weights[pair],
                                                   mdp.num_states(), mdp.num_actions(), options.delta);
            }
        return budgets;
    };
    return assemble(mdp, nominal, shape_model, options, rule);
}

} // namespace pcrit
