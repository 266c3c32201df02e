#pragma once

#include "pcrit/mdp.hpp"
#include "pcrit/norms.hpp"

#include <vector>

namespace pcrit {

/**
 * SA-rectangular ambiguity set: one ball per state-action pair, indexed by
 * TabularMdp::pair_index. Ball vectors span all S successors; successors
 * outside the MDP support carry infinite weight.
 */
struct AmbiguitySet {
    NormKind kind = NormKind::WeightedL1;
    std::vector<BallSpec> balls;

    const BallSpec& ball(const TabularMdp& mdp, std::size_t s, std::size_t a) const {
        return balls[mdp.pair_index(s, a)];
    }

    /// Throws InvalidSet or SupportViolation when the set does not fit the MDP.
    void validate(const TabularMdp& mdp) const;

    /// Transition model made of the ball centers.
    TransitionModel nominal_model(const TabularMdp& mdp) const;
};

struct RobustSolution {
    ValueFunction value;
    Policy policy;
    double robust_return = 0.0;
    std::size_t iterations = 0;
    /// Sup-norm change of the last sweep.
    double residual = 0.0;
};

/// One application of the robust Bellman optimality operator.
ValueFunction robust_bellman_apply(const TabularMdp& mdp, const AmbiguitySet& amb, const ValueFunction& v);

/// Robust value iteration from v = 0 with the same stopping rule as solve_nominal.
RobustSolution robust_value_iteration(const TabularMdp& mdp, const AmbiguitySet& amb,
                                      double tol = default_tolerance,
                                      std::size_t max_iterations = default_iteration_cap);

/// Worst-case return of a fixed policy over the set.
double robust_return_of_policy(const TabularMdp& mdp, const AmbiguitySet& amb, const Policy& policy,
                               double tol = default_tolerance,
                               std::size_t max_iterations = default_iteration_cap);

/// Robust action values q[s][a] = min over the (s,a) ball of p'z at v.
PairVectors robust_action_values(const TabularMdp& mdp, const AmbiguitySet& amb, const ValueFunction& v);

} // namespace pcrit
