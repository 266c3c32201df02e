#include "pcrit/robust.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace pcrit {

void AmbiguitySet::validate(const TabularMdp& mdp) const {
    require(balls.size() == mdp.num_pairs(), ErrorCode::InvalidSet,
            "ambiguity set has " + std::to_string(balls.size()) + " balls for " +
                std::to_string(mdp.num_pairs()) + " state-action pairs");
    for (std::size_t s = 0; s < mdp.num_states(); ++s)
        for (std::size_t a = 0; a < mdp.num_actions(); ++a) {
            const auto& b = ball(mdp, s, a);
            require(b.kind == kind, ErrorCode::InvalidSet, "all balls must share the set's norm");
            require(b.nominal.size() == mdp.num_states(), ErrorCode::InvalidSet,
                    "ball dimension does not match the number of states");
            b.validate();
            for (std::size_t next = 0; next < mdp.num_states(); ++next)
                if (!mdp.supported(s, a, next))
                    require(std::isinf(b.weights[next]), ErrorCode::SupportViolation,
                            "ball at state " + std::to_string(s) + " action " + std::to_string(a) +
                                " reaches an unsupported successor");
        }
}

TransitionModel AmbiguitySet::nominal_model(const TabularMdp& mdp) const {
    auto model = TransitionModel::zeros(mdp.num_states(), mdp.num_actions());
    for (std::size_t s = 0; s < mdp.num_states(); ++s)
        for (std::size_t a = 0; a < mdp.num_actions(); ++a) {
            const auto& src = ball(mdp, s, a).nominal;
            auto row = model.row_mut(s, a);
            std::copy(src.begin(), src.end(), row.begin());
        }
    return model;
}

namespace {

// Balls restricted to their finite-weight coordinates, built once per solve.
class CompactSet {
public:
    CompactSet(const TabularMdp& mdp, const AmbiguitySet& amb) : mdp_(mdp), kind_(amb.kind) {
        amb.validate(mdp);
        offsets_.push_back(0);
        for (std::size_t pair = 0; pair < mdp.num_pairs(); ++pair) {
            const auto& b = amb.balls[pair];
            for (std::size_t next = 0; next < mdp.num_states(); ++next) {
                if (std::isinf(b.weights[next])) continue;
                index_.push_back(next);
                nominal_.push_back(b.nominal[next]);
                weights_.push_back(b.weights[next]);
            }
            offsets_.push_back(index_.size());
            budgets_.push_back(b.budget);
        }
    }

    double worst_case(std::size_t s, std::size_t a, std::span<const double> v) {
        const auto pair = mdp_.pair_index(s, a);
        const auto lo = offsets_[pair], count = offsets_[pair + 1] - lo;
        z_.resize(count);
        const auto r = mdp_.rewards(s, a);
        for (std::size_t k = 0; k < count; ++k) {
            const auto next = index_[lo + k];
            z_[k] = r[next] + mdp_.discount() * v[next];
        }
        return solver_.minimize(kind_, z_, {nominal_.data() + lo, count}, {weights_.data() + lo, count},
                                budgets_[pair], witness_);
    }

private:
    const TabularMdp& mdp_;
    NormKind kind_;
    indvec index_, offsets_;
    numvec nominal_, weights_, budgets_;
    numvec z_, witness_;
    detail::InnerSolver solver_;
};

template <class ActionChoice>
RobustSolution iterate(const TabularMdp& mdp, CompactSet& set, ActionChoice actions, double tol,
                       std::size_t max_iterations) {
    require(tol > 0.0, ErrorCode::InvalidArgument, "tolerance must be positive");
    const auto threshold = value_iteration_threshold(mdp.discount(), tol);
    numvec v(mdp.num_states(), 0.0), next(mdp.num_states(), 0.0);
    double change = std::numeric_limits<double>::infinity();
    std::size_t iteration = 0;
    while (iteration < max_iterations) {
        for (std::size_t s = 0; s < mdp.num_states(); ++s) {
            double best = -std::numeric_limits<double>::infinity();
            actions(s, [&](std::size_t a) { best = std::max(best, set.worst_case(s, a, v)); });
            next[s] = best;
        }
        ++iteration;
        change = sup_distance(next, v);
        v.swap(next);
        if (change <= threshold) break;
    }
    if (change > threshold) throw NonConvergenceError("robust value iteration did not converge", change);

    RobustSolution solution;
    solution.policy.actions.assign(mdp.num_states(), 0);
    for (std::size_t s = 0; s < mdp.num_states(); ++s) {
        double best = -std::numeric_limits<double>::infinity();
        actions(s, [&](std::size_t a) {
            const double q = set.worst_case(s, a, v);
            if (q > best) {
                best = q;
                solution.policy.actions[s] = a;
            }
        });
    }
    solution.robust_return = std::inner_product(mdp.initial().begin(), mdp.initial().end(), v.begin(), 0.0);
    solution.value.values = std::move(v);
    solution.iterations = iteration;
    solution.residual = change;
    return solution;
}

} // namespace

ValueFunction robust_bellman_apply(const TabularMdp& mdp, const AmbiguitySet& amb, const ValueFunction& v) {
    require(v.size() == mdp.num_states(), ErrorCode::InvalidArgument, "value function has wrong length");
    CompactSet set(mdp, amb);
    ValueFunction out{numvec(mdp.num_states())};
    for (std::size_t s = 0; s < mdp.num_states(); ++s) {
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < mdp.num_actions(); ++a) best = std::max(best, set.worst_case(s, a, v.values));
        out.values[s] = best;
    }
    return out;
}

PairVectors robust_action_values(const TabularMdp& mdp, const AmbiguitySet& amb, const ValueFunction& v) {
    require(v.size() == mdp.num_states(), ErrorCode::InvalidArgument, "value function has wrong length");
    CompactSet set(mdp, amb);
    PairVectors q(mdp.num_states(), numvec(mdp.num_actions()));
    for (std::size_t s = 0; s < mdp.num_states(); ++s)
        for (std::size_t a = 0; a < mdp.num_actions(); ++a) q[s][a] = set.worst_case(s, a, v.values);
    return q;
}

RobustSolution robust_value_iteration(const TabularMdp& mdp, const AmbiguitySet& amb, double tol,
                                      std::size_t max_iterations) {
    CompactSet set(mdp, amb);
    const auto all = [&](std::size_t, auto&& visit) {
        for (std::size_t a = 0; a < mdp.num_actions(); ++a) visit(a);
    };
    return iterate(mdp, set, all, tol, max_iterations);
}

double robust_return_of_policy(const TabularMdp& mdp, const AmbiguitySet& amb, const Policy& policy, double tol,
                               std::size_t max_iterations) {
    require(policy.size() == mdp.num_states(), ErrorCode::InvalidArgument,
            "policy length does not match the number of states");
    for (auto a : policy.actions)
        require(a < mdp.num_actions(), ErrorCode::InvalidArgument, "policy action out of range");
    CompactSet set(mdp, amb);
    const auto fixed = [&](std::size_t s, auto&& visit) { visit(policy[s]); };
    return iterate(mdp, set, fixed, tol, max_iterations).robust_return;
}

} // namespace pcrit
