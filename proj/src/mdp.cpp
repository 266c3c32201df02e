#include "pcrit/mdp.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace pcrit {

TabularMdp::TabularMdp(std::size_t states, std::size_t actions, numvec rewards, double discount,
                       numvec initial, std::vector<std::uint8_t> support)
    : states_(states), actions_(actions), rewards_(std::move(rewards)), discount_(discount),
      initial_(std::move(initial)), support_mask_(std::move(support)) {
    require(states_ > 0 && actions_ > 0, ErrorCode::InvalidModel, "MDP needs at least one state and action");
    const auto dense = states_ * actions_ * states_;
    require(rewards_.size() == dense, ErrorCode::InvalidModel, "reward tensor has wrong size");
    require(support_mask_.size() == dense, ErrorCode::InvalidModel, "support mask has wrong size");
    require(discount_ >= 0.0 && discount_ < 1.0, ErrorCode::InvalidModel,
            "discount must lie in [0, 1)");
    require(initial_.size() == states_, ErrorCode::InvalidModel,
            "initial distribution has wrong size");
    double total = 0.0;
    for (double p : initial_) {
        require(p >= 0.0 && std::isfinite(p), ErrorCode::InvalidModel,
                "initial distribution has a negative entry");
        total += p;
    }
    require(std::abs(total - 1.0) <= 1e-12, ErrorCode::InvalidModel,
            "initial distribution does not sum to 1");
    for (double r : rewards_)
        require(std::isfinite(r), ErrorCode::InvalidModel, "rewards must be finite");

    support_offsets_.assign(num_pairs() + 1, 0);
    for (std::size_t pair = 0; pair < num_pairs(); ++pair) {
        for (std::size_t next = 0; next < states_; ++next)
            if (support_mask_[pair * states_ + next] != 0) support_list_.push_back(next);
        support_offsets_[pair + 1] = support_list_.size();
        require(support_offsets_[pair + 1] > support_offsets_[pair], ErrorCode::InvalidModel,
                "state " + std::to_string(pair / actions_) + " action " +
                    std::to_string(pair % actions_) + " has no supported successor");
    }
}

TabularMdp TabularMdp::with_discount(double discount) const {
    return TabularMdp(states_, actions_, rewards_, discount, initial_, support_mask_);
}

TransitionModel::TransitionModel(std::size_t states, std::size_t actions, numvec probabilities)
    : states_(states), actions_(actions), probs_(std::move(probabilities)) {
    require(probs_.size() == states_ * actions_ * states_, ErrorCode::InvalidModel,
            "transition tensor has wrong size");
}

TransitionModel TransitionModel::zeros(std::size_t states, std::size_t actions) {
    return TransitionModel(states, actions, numvec(states * actions * states, 0.0));
}

void TransitionModel::validate(const TabularMdp& mdp, double tolerance) const {
    require(states_ == mdp.num_states() && actions_ == mdp.num_actions(), ErrorCode::InvalidModel,
            "transition model dimensions do not match the MDP");
    for (std::size_t s = 0; s < states_; ++s) {
        for (std::size_t a = 0; a < actions_; ++a) {
            const auto p = row(s, a);
            double total = 0.0;
            for (std::size_t next = 0; next < states_; ++next) {
                require(p[next] >= 0.0 && std::isfinite(p[next]), ErrorCode::InvalidModel,
                        "negative transition probability at state " + std::to_string(s));
                if (p[next] > 0.0 && !mdp.supported(s, a, next))
                    fail(ErrorCode::InvalidModel, "transition outside the support mask at state " +
                                                      std::to_string(s) + " action " +
                                                      std::to_string(a));
                total += p[next];
            }
            require(std::abs(total - 1.0) <= tolerance, ErrorCode::InvalidModel,
                    "transition row for state " + std::to_string(s) + " action " +
                        std::to_string(a) + " does not sum to 1");
        }
    }
}

namespace {

void check_policy(const TabularMdp& mdp, const Policy& policy) {
    require(policy.size() == mdp.num_states(), ErrorCode::InvalidArgument,
            "policy length does not match the number of states");
    for (auto a : policy.actions)
        require(a < mdp.num_actions(), ErrorCode::InvalidArgument, "policy action out of range");
}

double backup(const TabularMdp& mdp, std::span<const double> p, std::size_t s, std::size_t a,
              std::span<const double> v) {
    const auto r = mdp.rewards(s, a);
    double total = 0.0;
    for (auto next : mdp.support(s, a)) total += p[next] * (r[next] + mdp.discount() * v[next]);
    return total;
}

} // namespace

ValueFunction policy_evaluate(const TabularMdp& mdp, const TransitionModel& model,
                              const Policy& policy) {
    model.validate(mdp, 1e-9);
    check_policy(mdp, policy);

    const auto n = static_cast<Eigen::Index>(mdp.num_states());
    Eigen::MatrixXd system = Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    for (std::size_t s = 0; s < mdp.num_states(); ++s) {
        const auto a = policy[s];
        const auto p = model.row(s, a);
        const auto r = mdp.rewards(s, a);
        for (auto next : mdp.support(s, a)) {
            system(Eigen::Index(s), Eigen::Index(next)) -= mdp.discount() * p[next];
            rhs(Eigen::Index(s)) += p[next] * r[next];
        }
    }
    const Eigen::VectorXd solution = system.partialPivLu().solve(rhs);

    ValueFunction v{numvec(solution.data(), solution.data() + n)};
    // one refinement step keeps the fixed-point residual at rounding level
    const Eigen::VectorXd residual = rhs - system * solution;
    const Eigen::VectorXd correction = system.partialPivLu().solve(residual);
    for (Eigen::Index i = 0; i < n; ++i) v.values[std::size_t(i)] += correction(i);
    return v;
}

double return_of(const TabularMdp& mdp, const TransitionModel& model, const Policy& policy) {
    const auto v = policy_evaluate(mdp, model, policy);
    return std::inner_product(mdp.initial().begin(), mdp.initial().end(), v.values.begin(), 0.0);
}

double value_iteration_threshold(double discount, double tol) {
    if (discount <= 0.0) return std::numeric_limits<double>::infinity();
    return tol * (1.0 - discount) / (2.0 * discount);
}

double sup_distance(std::span<const double> a, std::span<const double> b) {
    double result = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) result = std::max(result, std::abs(a[i] - b[i]));
    return result;
}

NominalSolution solve_nominal(const TabularMdp& mdp, const TransitionModel& model, double tol,
                              std::size_t max_iterations) {
    require(tol > 0.0, ErrorCode::InvalidArgument, "tolerance must be positive");
    model.validate(mdp, 1e-9);

    const auto threshold = value_iteration_threshold(mdp.discount(), tol);
    numvec v(mdp.num_states(), 0.0), next(mdp.num_states(), 0.0);
    double change = std::numeric_limits<double>::infinity();
    std::size_t iteration = 0;
    while (iteration < max_iterations) {
        for (std::size_t s = 0; s < mdp.num_states(); ++s) {
            double best = -std::numeric_limits<double>::infinity();
            for (std::size_t a = 0; a < mdp.num_actions(); ++a)
                best = std::max(best, backup(mdp, model.row(s, a), s, a, v));
            next[s] = best;
        }
        ++iteration;
        change = sup_distance(next, v);
        v.swap(next);
        if (change <= threshold) break;
    }
    if (change > threshold)
        throw NonConvergenceError("value iteration did not converge", change);

    NominalSolution solution;
    solution.value.values = std::move(v);
    solution.policy = greedy_policy(mdp, model, solution.value);
    solution.iterations = iteration;
    solution.residual = change;
    return solution;
}

Policy greedy_policy(const TabularMdp& mdp, const TransitionModel& model, const ValueFunction& v) {
    Policy policy{indvec(mdp.num_states(), 0)};
    for (std::size_t s = 0; s < mdp.num_states(); ++s) {
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < mdp.num_actions(); ++a) {
            const double q = backup(mdp, model.row(s, a), s, a, v.values);
            if (q > best) {
                best = q;
                policy.actions[s] = a;
            }
        }
    }
    return policy;
}

PairVectors compute_z(const TabularMdp& mdp, const ValueFunction& v) {
    PairVectors z(mdp.num_pairs(), numvec(mdp.num_states()));
    for (std::size_t s = 0; s < mdp.num_states(); ++s)
        for (std::size_t a = 0; a < mdp.num_actions(); ++a) {
            const auto r = mdp.rewards(s, a);
            auto& out = z[mdp.pair_index(s, a)];
            for (std::size_t next = 0; next < mdp.num_states(); ++next)
                out[next] = r[next] + mdp.discount() * v[next];
        }
    return z;
}

void compute_z_compact(const TabularMdp& mdp, std::size_t s, std::size_t a,
                       std::span<const double> v, numvec& out) {
    const auto support = mdp.support(s, a);
    const auto r = mdp.rewards(s, a);
    out.resize(support.size());
    for (std::size_t k = 0; k < support.size(); ++k)
        out[k] = r[support[k]] + mdp.discount() * v[support[k]];
}

} // namespace pcrit
