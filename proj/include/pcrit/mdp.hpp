#pragma once

#include "pcrit/error.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace pcrit {

using numvec = std::vector<double>;
using indvec = std::vector<std::size_t>;

/// Default solver tolerance for value iteration (sup-norm distance to the fixed point).
inline constexpr double default_tolerance = 1e-6;
/// Maximum number of value-iteration sweeps before reporting non-convergence.
inline constexpr std::size_t default_iteration_cap = 1'000'000;

/**
 * A finite MDP without its transition probabilities.
 *
 * Rewards are stored per (s, a, s') and the support mask marks which successors
 * are possible at all. Transition probabilities live separately in a
 * TransitionModel so the same MDP can be paired with the true model, a nominal
 * model, or posterior samples.
 */
class TabularMdp {
public:
    TabularMdp() = default;

    /**
     * @param rewards dense tensor of size S*A*S, index (s*A + a)*S + s'
     * @param support dense mask of the same size; every (s,a) needs a successor
     */
    TabularMdp(std::size_t states, std::size_t actions, numvec rewards, double discount,
               numvec initial, std::vector<std::uint8_t> support);

    std::size_t num_states() const noexcept { return states_; }
    std::size_t num_actions() const noexcept { return actions_; }
    std::size_t num_pairs() const noexcept { return states_ * actions_; }
    double discount() const noexcept { return discount_; }
    const numvec& initial() const noexcept { return initial_; }

    std::size_t pair_index(std::size_t s, std::size_t a) const noexcept { return s * actions_ + a; }

    std::span<const double> rewards(std::size_t s, std::size_t a) const noexcept {
        return {rewards_.data() + pair_index(s, a) * states_, states_};
    }
    double reward(std::size_t s, std::size_t a, std::size_t next) const noexcept {
        return rewards_[pair_index(s, a) * states_ + next];
    }
    bool supported(std::size_t s, std::size_t a, std::size_t next) const noexcept {
        return support_mask_[pair_index(s, a) * states_ + next] != 0;
    }
    /// Supported successors of (s, a) in increasing order.
    std::span<const std::size_t> support(std::size_t s, std::size_t a) const noexcept {
        const auto pair = pair_index(s, a);
        return {support_list_.data() + support_offsets_[pair],
                support_offsets_[pair + 1] - support_offsets_[pair]};
    }

    const numvec& reward_tensor() const noexcept { return rewards_; }
    const std::vector<std::uint8_t>& support_mask() const noexcept { return support_mask_; }

    /// Same MDP with a different discount factor.
    TabularMdp with_discount(double discount) const;

private:
    std::size_t states_ = 0;
    std::size_t actions_ = 0;
    numvec rewards_;
    double discount_ = 0.0;
    numvec initial_;
    std::vector<std::uint8_t> support_mask_;
    indvec support_list_;
    indvec support_offsets_;
};

/// One transition function P: (s, a) -> distribution over next states.
class TransitionModel {
public:
    TransitionModel() = default;
    TransitionModel(std::size_t states, std::size_t actions, numvec probabilities);

    /// Model with all-zero rows; fill through row_mut.
    static TransitionModel zeros(std::size_t states, std::size_t actions);

    std::size_t num_states() const noexcept { return states_; }
    std::size_t num_actions() const noexcept { return actions_; }

    std::span<const double> row(std::size_t s, std::size_t a) const noexcept {
        return {probs_.data() + (s * actions_ + a) * states_, states_};
    }
    std::span<double> row_mut(std::size_t s, std::size_t a) noexcept {
        return {probs_.data() + (s * actions_ + a) * states_, states_};
    }
    const numvec& data() const noexcept { return probs_; }

    /// Throws InvalidModel when rows are not distributions or leave the support.
    void validate(const TabularMdp& mdp, double tolerance = 1e-12) const;

    friend bool operator==(const TransitionModel&, const TransitionModel&) = default;

private:
    std::size_t states_ = 0;
    std::size_t actions_ = 0;
    numvec probs_;
};

/// Deterministic policy: one action index per state.
struct Policy {
    indvec actions;

    std::size_t operator[](std::size_t s) const { return actions[s]; }
    std::size_t size() const noexcept { return actions.size(); }
    friend bool operator==(const Policy&, const Policy&) = default;
};

struct ValueFunction {
    numvec values;

    double operator[](std::size_t s) const { return values[s]; }
    std::size_t size() const noexcept { return values.size(); }
};

/// Per-(s,a) vectors over next states, indexed by the MDP's pair index.
using PairVectors = std::vector<numvec>;

ValueFunction policy_evaluate(const TabularMdp& mdp, const TransitionModel& model,
                              const Policy& policy);

/// Discounted return p0' v of the policy under the model.
double return_of(const TabularMdp& mdp, const TransitionModel& model, const Policy& policy);

struct NominalSolution {
    ValueFunction value;
    Policy policy;
    std::size_t iterations = 0;
    double residual = 0.0;
};

/**
 * Value iteration on the Bellman optimality operator from v = 0.
 *
 * Stops once successive iterates are within tol*(1-gamma)/(2*gamma) in
 * sup-norm, which puts the returned values within tol of the optimum.
 */
NominalSolution solve_nominal(const TabularMdp& mdp, const TransitionModel& model,
                              double tol = default_tolerance,
                              std::size_t max_iterations = default_iteration_cap);

/// Greedy policy; ties go to the lowest action index.
Policy greedy_policy(const TabularMdp& mdp, const TransitionModel& model, const ValueFunction& v);

/// z_{s,a} = r_{s,a} + gamma * v for every state-action pair.
PairVectors compute_z(const TabularMdp& mdp, const ValueFunction& v);

/// z_{s,a} restricted to the supported successors of (s,a), in support order.
void compute_z_compact(const TabularMdp& mdp, std::size_t s, std::size_t a,
                       std::span<const double> v, numvec& out);

/// Stopping threshold on successive iterates for a tol-accurate value function.
double value_iteration_threshold(double discount, double tol);

double sup_distance(std::span<const double> a, std::span<const double> b);

} // namespace pcrit
