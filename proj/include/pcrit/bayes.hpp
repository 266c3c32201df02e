#pragma once

#include "pcrit/mdp.hpp"
#include "pcrit/robust.hpp"
#include "pcrit/rng.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace pcrit {

struct Transition {
    std::size_t state;
    std::size_t action;
    std::size_t next;
    friend bool operator==(const Transition&, const Transition&) = default;
};

/// Observed transitions together with their per-(s,a,s') tallies.
class TransitionDataset {
public:
    TransitionDataset(std::size_t states, std::size_t actions);

    void add(const Transition& t);
    void add(std::size_t s, std::size_t a, std::size_t next) { add(Transition{s, a, next}); }

    std::size_t num_states() const noexcept { return states_; }
    std::size_t num_actions() const noexcept { return actions_; }
    const std::vector<Transition>& transitions() const noexcept { return triples_; }
    /// Dense count tensor indexed like TransitionModel.
    const std::vector<std::uint64_t>& counts() const noexcept { return counts_; }
    std::uint64_t count(std::size_t s, std::size_t a, std::size_t next) const {
        return counts_[(s * actions_ + a) * states_ + next];
    }
    std::uint64_t pair_count(std::size_t s, std::size_t a) const;

private:
    std::size_t states_, actions_;
    std::vector<Transition> triples_;
    std::vector<std::uint64_t> counts_;
};

/// Draws `per_pair` successors from every (s,a) of the true model.
TransitionDataset sample_dataset(const TabularMdp& mdp, const TransitionModel& truth, std::size_t per_pair,
                                 std::uint64_t seed);

/// Independent Dirichlet rows; concentration zero marks successors outside the support.
class DirichletPosterior {
public:
    DirichletPosterior() = default;
    DirichletPosterior(std::size_t states, std::size_t actions, numvec alpha);

    /// Uniform prior with concentration `level` on every supported successor.
    static DirichletPosterior uniform_prior(const TabularMdp& mdp, double level = 1.0);

    std::size_t num_states() const noexcept { return states_; }
    std::size_t num_actions() const noexcept { return actions_; }
    std::span<const double> alpha(std::size_t s, std::size_t a) const noexcept {
        return {alpha_.data() + (s * actions_ + a) * states_, states_};
    }
    const numvec& alpha_tensor() const noexcept { return alpha_; }

    TransitionModel mean() const;
    /// Throws SupportViolation if positive concentration falls outside the MDP support.
    void check_support(const TabularMdp& mdp) const;

private:
    std::size_t states_ = 0, actions_ = 0;
    numvec alpha_;
};

DirichletPosterior dirichlet_posterior(const TransitionDataset& data, const DirichletPosterior& prior);

struct PosteriorSampleSet {
    std::vector<TransitionModel> models;
    std::uint64_t seed = 0;

    std::size_t size() const noexcept { return models.size(); }
};

/// Stream of posterior draws; sample i depends only on (seed, i).
class PosteriorSampler {
public:
    PosteriorSampler(const DirichletPosterior& posterior, std::uint64_t seed);
    TransitionModel draw(std::size_t index) const;

private:
    const DirichletPosterior& posterior_;
    std::uint64_t seed_;
};

PosteriorSampleSet sample_posterior(const DirichletPosterior& posterior, std::size_t n, std::uint64_t seed);

/// Sample mean of the set, exactly zero where every sample is zero.
TransitionModel sample_mean(const PosteriorSampleSet& samples);

/// Fraction of samples with return_of(policy, P) >= rho_hat - 1e-9.
double empirical_guarantee_check(const TabularMdp& mdp, const PosteriorSampleSet& samples, const Policy& policy,
                                 double rho_hat);

/// Whether the model lies in every ball of the set (norm slack feasibility_slack).
bool set_contains(const TabularMdp& mdp, const AmbiguitySet& amb, const TransitionModel& model);

/// Fraction of samples lying in all balls simultaneously.
double empirical_set_coverage(const TabularMdp& mdp, const PosteriorSampleSet& samples, const AmbiguitySet& amb);

/// delta-quantile of max_pi rho(pi, P_i) over the samples; delta = 0 gives the minimum.
double percentile_of_best_response(const TabularMdp& mdp, const PosteriorSampleSet& samples, double delta);

/// Lower delta-quantile of a sample (order statistic floor(delta*n)+1, clamped).
double lower_quantile(numvec values, double delta);

/// Long-format import: sample_id,idstatefrom,idaction,idstateto,probability.
PosteriorSampleSet load_posterior_samples_csv(const std::string& path, const TabularMdp& mdp);
/// Dataset import: idstatefrom,idaction,idstateto.
TransitionDataset load_dataset_csv(const std::string& path, std::size_t states, std::size_t actions);
void save_dataset_csv(const std::string& path, const TransitionDataset& data);

} // namespace pcrit
