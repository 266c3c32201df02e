#include "pcrit/bayes.hpp"

#include "pcrit/io.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace pcrit {

TransitionDataset::TransitionDataset(std::size_t states, std::size_t actions)
    : states_(states), actions_(actions), counts_(states * actions * states, 0) {
    require(states > 0 && actions > 0, ErrorCode::InvalidArgument, "dataset needs states and actions");
}

void TransitionDataset::add(const Transition& t) {
    require(t.state < states_ && t.next < states_ && t.action < actions_, ErrorCode::InvalidArgument,
            "transition index out of range");
    triples_.push_back(t);
    ++counts_[(t.state * actions_ + t.action) * states_ + t.next];
}

std::uint64_t TransitionDataset::pair_count(std::size_t s, std::size_t a) const {
    std::uint64_t total = 0;
    for (std::size_t next = 0; next < states_; ++next) total += count(s, a, next);
    return total;
}

TransitionDataset sample_dataset(const TabularMdp& mdp, const TransitionModel& truth, std::size_t per_pair,
                                 std::uint64_t seed) {
    truth.validate(mdp, 1e-9);
    TransitionDataset data(mdp.num_states(), mdp.num_actions());
    for (std::size_t s = 0; s < mdp.num_states(); ++s)
        for (std::size_t a = 0; a < mdp.num_actions(); ++a) {
            Rng rng(derive_seed(seed, mdp.pair_index(s, a)));
            const auto row = truth.row(s, a);
            const auto support = mdp.support(s, a);
            for (std::size_t draw = 0; draw < per_pair; ++draw) {
                double u = rng.uniform();
                std::size_t chosen = support.back();
                for (auto next : support) {
                    if (row[next] <= 0.0) continue;
                    if (u < row[next]) {
                        chosen = next;
                        break;
                    }
                    u -= row[next];
                    chosen = next;
                }
                data.add(s, a, chosen);
            }
        }
    return data;
}

DirichletPosterior::DirichletPosterior(std::size_t states, std::size_t actions, numvec alpha)
    : states_(states), actions_(actions), alpha_(std::move(alpha)) {
    require(alpha_.size() == states * actions * states, ErrorCode::InvalidArgument,
            "concentration tensor has wrong size");
    for (std::size_t pair = 0; pair < states * actions; ++pair) {
        double total = 0.0;
        for (std::size_t next = 0; next < states; ++next) {
            const double x = alpha_[pair * states + next];
            require(x >= 0.0 && std::isfinite(x), ErrorCode::InvalidArgument, "concentrations must be nonnegative");
            total += x;
        }
        require(total > 0.0, ErrorCode::InvalidArgument, "every state-action pair needs positive concentration");
    }
}

DirichletPosterior DirichletPosterior::uniform_prior(const TabularMdp& mdp, double level) {
    require(level > 0.0, ErrorCode::InvalidArgument, "prior concentration must be positive");
    numvec alpha(mdp.num_pairs() * mdp.num_states(), 0.0);
    for (std::size_t i = 0; i < alpha.size(); ++i)
        if (mdp.support_mask()[i] != 0) alpha[i] = level;
    return DirichletPosterior(mdp.num_states(), mdp.num_actions(), std::move(alpha));
}

TransitionModel DirichletPosterior::mean() const {
    numvec probs(alpha_.size());
    for (std::size_t pair = 0; pair < states_ * actions_; ++pair) {
        double total = 0.0;
        for (std::size_t next = 0; next < states_; ++next) total += alpha_[pair * states_ + next];
        for (std::size_t next = 0; next < states_; ++next)
            probs[pair * states_ + next] = alpha_[pair * states_ + next] / total;
    }
    return TransitionModel(states_, actions_, std::move(probs));
}

void DirichletPosterior::check_support(const TabularMdp& mdp) const {
    require(states_ == mdp.num_states() && actions_ == mdp.num_actions(), ErrorCode::InvalidArgument,
            "posterior dimensions do not match the MDP");
    for (std::size_t i = 0; i < alpha_.size(); ++i)
        require(alpha_[i] == 0.0 || mdp.support_mask()[i] != 0, ErrorCode::SupportViolation,
                "posterior puts mass outside the MDP support");
}

DirichletPosterior dirichlet_posterior(const TransitionDataset& data, const DirichletPosterior& prior) {
    require(data.num_states() == prior.num_states() && data.num_actions() == prior.num_actions(),
            ErrorCode::InvalidArgument, "dataset and prior dimensions differ");
    numvec alpha = prior.alpha_tensor();
    const auto& counts = data.counts();
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        if (counts[i] == 0) continue;
        require(alpha[i] > 0.0, ErrorCode::SupportViolation,
                "observed transition lies outside the prior support");
        alpha[i] += double(counts[i]);
    }
    return DirichletPosterior(prior.num_states(), prior.num_actions(), std::move(alpha));
}

PosteriorSampler::PosteriorSampler(const DirichletPosterior& posterior, std::uint64_t seed)
    : posterior_(posterior), seed_(seed) {}

TransitionModel PosteriorSampler::draw(std::size_t index) const {
    Rng rng(derive_seed(seed_, index));
    auto model = TransitionModel::zeros(posterior_.num_states(), posterior_.num_actions());
    for (std::size_t s = 0; s < posterior_.num_states(); ++s)
        for (std::size_t a = 0; a < posterior_.num_actions(); ++a) rng.dirichlet(posterior_.alpha(s, a), model.row_mut(s, a));
    return model;
}

PosteriorSampleSet sample_posterior(const DirichletPosterior& posterior, std::size_t n, std::uint64_t seed) {
    require(n >= 1, ErrorCode::InvalidArgument, "need at least one posterior sample");
    PosteriorSampler sampler(posterior, seed);
    PosteriorSampleSet set;
    set.seed = seed;
    set.models.reserve(n);
    for (std::size_t i = 0; i < n; ++i) set.models.push_back(sampler.draw(i));
    return set;
}

TransitionModel sample_mean(const PosteriorSampleSet& samples) {
    require(samples.size() > 0, ErrorCode::InvalidArgument, "empty sample set");
    const auto& first = samples.models.front();
    numvec total(first.data().size(), 0.0);
    for (const auto& m : samples.models) {
        require(m.data().size() == total.size(), ErrorCode::InvalidArgument, "samples differ in dimension");
        for (std::size_t i = 0; i < total.size(); ++i) total[i] += m.data()[i];
    }
    const std::size_t states = first.num_states();
    for (std::size_t pair = 0; pair < first.num_states() * first.num_actions(); ++pair) {
        double row = 0.0;
        for (std::size_t next = 0; next < states; ++next) row += total[pair * states + next];
        for (std::size_t next = 0; next < states; ++next) total[pair * states + next] /= row;
    }
    return TransitionModel(first.num_states(), first.num_actions(), std::move(total));
}

double empirical_guarantee_check(const TabularMdp& mdp, const PosteriorSampleSet& samples, const Policy& policy,
                                 double rho_hat) {
    require(samples.size() > 0, ErrorCode::InvalidArgument, "empty sample set");
    std::size_t hits = 0;
    for (const auto& model : samples.models)
        if (return_of(mdp, model, policy) >= rho_hat - 1e-9) ++hits;
    return double(hits) / double(samples.size());
}

bool set_contains(const TabularMdp& mdp, const AmbiguitySet& amb, const TransitionModel& model) {
    numvec diff(mdp.num_states());
    for (std::size_t s = 0; s < mdp.num_states(); ++s)
        for (std::size_t a = 0; a < mdp.num_actions(); ++a) {
            const auto& b = amb.ball(mdp, s, a);
            const auto row = model.row(s, a);
            for (std::size_t next = 0; next < mdp.num_states(); ++next) {
                if (std::isinf(b.weights[next]) && row[next] != 0.0) return false;
                diff[next] = row[next] - b.nominal[next];
            }
            if (weighted_norm(diff, b.weights, b.kind) > b.budget + feasibility_slack) return false;
        }
    return true;
}

double empirical_set_coverage(const TabularMdp& mdp, const PosteriorSampleSet& samples, const AmbiguitySet& amb) {
    require(samples.size() > 0, ErrorCode::InvalidArgument, "empty sample set");
    amb.validate(mdp);
    std::size_t hits = 0;
    for (const auto& model : samples.models)
        if (set_contains(mdp, amb, model)) ++hits;
    return double(hits) / double(samples.size());
}

double lower_quantile(numvec values, double delta) {
    require(!values.empty(), ErrorCode::InvalidArgument, "quantile of an empty sample");
    require(delta >= 0.0 && delta < 1.0, ErrorCode::InvalidArgument, "quantile level must lie in [0, 1)");
    std::sort(values.begin(), values.end());
    const auto position = std::min(values.size() - 1, std::size_t(std::floor(delta * double(values.size()))));
    return values[position];
}

double percentile_of_best_response(const TabularMdp& mdp, const PosteriorSampleSet& samples, double delta) {
    numvec optima;
    optima.reserve(samples.size());
    for (const auto& model : samples.models) {
        const auto solution = solve_nominal(mdp, model);
        optima.push_back(return_of(mdp, model, solution.policy));
    }
    return lower_quantile(std::move(optima), delta);
}

PosteriorSampleSet load_posterior_samples_csv(const std::string& path, const TabularMdp& mdp) {
    const auto table = io::read_csv(path);
    const auto c_id = table.column("sample_id"), c_from = table.column("idstatefrom"),
               c_action = table.column("idaction"), c_to = table.column("idstateto"),
               c_prob = table.column("probability");
    std::map<std::uint64_t, TransitionModel> models;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const auto context = path + " row " + std::to_string(r + 1);
        const auto id = io::parse_uint(row[c_id], context);
        const auto s = io::parse_index(row[c_from], context), a = io::parse_index(row[c_action], context),
                   next = io::parse_index(row[c_to], context);
        const double p = io::parse_double(row[c_prob], context);
        require(s < mdp.num_states() && a < mdp.num_actions() && next < mdp.num_states(), ErrorCode::Parse,
                context + ": index out of range");
        auto [it, inserted] = models.try_emplace(id, TransitionModel::zeros(mdp.num_states(), mdp.num_actions()));
        it->second.row_mut(s, a)[next] += p;
    }
    require(!models.empty(), ErrorCode::Parse, path + ": no samples");
    PosteriorSampleSet set;
    for (auto& [id, model] : models) {
        try {
            model.validate(mdp, 1e-9);
        } catch (const Error& e) {
            fail(e.code() == ErrorCode::InvalidModel ? ErrorCode::SupportViolation : e.code(),
                 path + ": sample " + std::to_string(id) + ": " + e.what());
        }
        set.models.push_back(std::move(model));
    }
    return set;
}

TransitionDataset load_dataset_csv(const std::string& path, std::size_t states, std::size_t actions) {
    const auto table = io::read_csv(path);
    const auto c_from = table.column("idstatefrom"), c_action = table.column("idaction"),
               c_to = table.column("idstateto");
    TransitionDataset data(states, actions);
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto context = path + " row " + std::to_string(r + 1);
        const auto& row = table.rows[r];
        const auto s = io::parse_index(row[c_from], context), a = io::parse_index(row[c_action], context),
                   next = io::parse_index(row[c_to], context);
        require(s < states && a < actions && next < states, ErrorCode::Parse, context + ": index out of range");
        data.add(s, a, next);
    }
    return data;
}

void save_dataset_csv(const std::string& path, const TransitionDataset& data) {
    std::string out = "idstatefrom,idaction,idstateto\n";
    for (const auto& t : data.transitions())
        out += std::to_string(t.state) + "," + std::to_string(t.action) + "," + std::to_string(t.next) + "\n";
    io::write_file(path, out);
}

} // namespace pcrit
