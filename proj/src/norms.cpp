#include "pcrit/norms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace pcrit {

std::string_view to_string(NormKind kind) {
    return kind == NormKind::WeightedL1 ? "l1" : "linf";
}

NormKind parse_norm_kind(std::string_view text) {
    if (text == "l1" || text == "L1") return NormKind::WeightedL1;
    if (text == "linf" || text == "Linf" || text == "LINF" || text == "inf") return NormKind::WeightedLInf;
    fail(ErrorCode::InvalidArgument, "unknown norm '" + std::string(text) + "' (expected l1 or linf)");
}

void BallSpec::validate() const {
    require(!nominal.empty() && nominal.size() == weights.size(), ErrorCode::InvalidSet,
            "ball nominal and weights must have the same nonzero length");
    require(budget >= 0.0, ErrorCode::InvalidSet, "ball budget must be nonnegative");
    double total = 0.0;
    for (std::size_t i = 0; i < nominal.size(); ++i) {
        require(nominal[i] >= 0.0 && std::isfinite(nominal[i]), ErrorCode::InvalidSet,
                "ball nominal must be nonnegative");
        require(weights[i] > 0.0, ErrorCode::InvalidSet, "ball weights must be positive");
        if (std::isinf(weights[i]))
            require(nominal[i] == 0.0, ErrorCode::InvalidSet,
                    "infinite weight is only allowed where the nominal is zero");
        total += nominal[i];
    }
    require(std::abs(total - 1.0) <= 1e-10, ErrorCode::InvalidSet, "ball nominal is not on the simplex");
}

double weighted_norm(std::span<const double> x, std::span<const double> w, NormKind kind) {
    double result = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0.0) continue;
        const double term = w[i] * std::abs(x[i]);
        result = kind == NormKind::WeightedL1 ? result + term : std::max(result, term);
    }
    return result;
}

WorstCase worst_case_expectation(std::span<const double> z, const BallSpec& ball, Sense sense) {
    ball.validate();
    require(z.size() == ball.nominal.size(), ErrorCode::InvalidArgument,
            "z and the ball have different dimensions");

    numvec zc, pc, wc;
    indvec index;
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (std::isinf(ball.weights[i])) continue;
        index.push_back(i);
        zc.push_back(sense == Sense::Min ? z[i] : -z[i]);
        pc.push_back(ball.nominal[i]);
        wc.push_back(ball.weights[i]);
    }
    require(!index.empty(), ErrorCode::InvalidSet, "ball has no reachable coordinate");

    detail::InnerSolver solver;
    numvec compact;
    const double value = solver.minimize(ball.kind, zc, pc, wc, ball.budget, compact);

    WorstCase result;
    result.value = sense == Sense::Min ? value : -value;
    result.witness.assign(z.size(), 0.0);
    for (std::size_t k = 0; k < index.size(); ++k) result.witness[index[k]] = compact[k];
    return result;
}

double ambiguity_span(std::span<const double> z, const BallSpec& ball) {
    const auto high = worst_case_expectation(z, ball, Sense::Max);
    const auto low = worst_case_expectation(z, ball, Sense::Min);
    return std::max(0.0, high.value - low.value);
}

double dual_norm_bound(std::span<const double> z, std::span<const double> w, double psi,
                       double lambda, NormKind kind) {
    require(z.size() == w.size(), ErrorCode::InvalidArgument, "z and weights differ in length");
    if (psi == 0.0) return 0.0;
    double dual = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (std::isinf(w[i])) continue;
        const double deviation = std::abs(z[i] - lambda);
        if (deviation == 0.0) continue;
        const double term = deviation / w[i];
        // dual of weighted L1 is weighted Linf with inverse weights, and vice versa
        dual = kind == NormKind::WeightedL1 ? std::max(dual, term) : dual + term;
    }
    return 2.0 * psi * dual;
}

namespace detail {

double InnerSolver::minimize(NormKind kind, std::span<const double> z, std::span<const double> nominal,
                             std::span<const double> weights, double budget, numvec& witness) {
    witness.assign(nominal.begin(), nominal.end());
    if (budget <= 0.0 || z.size() == 1)
        return std::inner_product(z.begin(), z.end(), nominal.begin(), 0.0);
    return kind == NormKind::WeightedL1 ? minimize_l1(z, nominal, weights, budget, witness)
                                        : minimize_linf(z, nominal, weights, budget, witness);
}

double InnerSolver::minimize_linf(std::span<const double> z, std::span<const double> nominal,
                                  std::span<const double> weights, double budget, numvec& witness) {
    const auto k = z.size();
    double remaining = 1.0;
    for (std::size_t i = 0; i < k; ++i) {
        witness[i] = std::max(0.0, nominal[i] - budget / weights[i]);
        remaining -= witness[i];
    }
    order_.resize(k);
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::stable_sort(order_.begin(), order_.end(),
                     [&](std::size_t a, std::size_t b) { return z[a] < z[b]; });
    for (auto i : order_) {
        if (remaining <= 0.0) break;
        const double upper = std::min(1.0, nominal[i] + budget / weights[i]);
        const double add = std::min(upper - witness[i], remaining);
        witness[i] += add;
        remaining -= add;
    }
    return std::inner_product(z.begin(), z.end(), witness.begin(), 0.0);
}

/*
 * Weighted L1 ball. Dualizing the budget with a multiplier mu gives a
 * Lagrangian minimized by a simple structure: all mass of every donor i with
 * z_i - mu w_i > min_j (z_j + mu w_j) moves to the receiver attaining that
 * minimum. The receiver follows the lower envelope of the lines z_j + mu w_j
 * and each donor drops out exactly once as mu grows, so the budget used by the
 * Lagrangian minimizer is a nonincreasing step function of mu. The optimum
 * mixes the two minimizers on either side of the step that crosses the budget;
 * both minimize the Lagrangian at the crossing and move mass in the same
 * direction coordinatewise, so the mix is optimal with a tight budget.
 */
double InnerSolver::minimize_l1(std::span<const double> z, std::span<const double> nominal,
                                std::span<const double> weights, double budget, numvec& witness) {
    const auto k = z.size();

    // lower envelope of z_j + mu w_j over mu >= 0
    order_.resize(k);
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
        if (weights[a] != weights[b]) return weights[a] > weights[b];
        if (z[a] != z[b]) return z[a] < z[b];
        return a < b;
    });
    hull_.clear();
    hull_start_.clear();
    for (auto j : order_) {
        if (!hull_.empty() && weights[j] == weights[hull_.back()]) continue;
        double start = -std::numeric_limits<double>::infinity();
        while (!hull_.empty()) {
            const auto top = hull_.back();
            start = (z[j] - z[top]) / (weights[top] - weights[j]);
            if (start <= hull_start_.back()) {
                hull_.pop_back();
                hull_start_.pop_back();
                continue;
            }
            break;
        }
        if (hull_.empty()) start = -std::numeric_limits<double>::infinity();
        hull_.push_back(j);
        hull_start_.push_back(start);
    }
    std::size_t first = 0;
    while (first + 1 < hull_.size() && hull_start_[first + 1] <= 0.0) ++first;
    hull_.erase(hull_.begin(), hull_.begin() + std::ptrdiff_t(first));
    hull_start_.erase(hull_start_.begin(), hull_start_.begin() + std::ptrdiff_t(first));
    hull_start_[0] = 0.0;

    // multiplier at which each donor stops giving away its mass
    const double lowest = z[hull_[0]];
    donors_.clear();
    leave_.assign(k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        if (nominal[i] <= 0.0 || z[i] <= lowest) continue;
        auto gap = [&](std::size_t segment) {
            const double mu = hull_start_[segment];
            const auto r = hull_[segment];
            return z[i] - mu * weights[i] - (z[r] + mu * weights[r]);
        };
        std::size_t lo = 0, hi = hull_.size();
        while (hi - lo > 1) {
            const auto mid = (lo + hi) / 2;
            if (gap(mid) > 0.0) lo = mid;
            else hi = mid;
        }
        const auto r = hull_[lo];
        double tau = (z[i] - z[r]) / (weights[i] + weights[r]);
        tau = std::max(tau, hull_start_[lo]);
        if (lo + 1 < hull_.size()) tau = std::min(tau, hull_start_[lo + 1]);
        leave_[i] = tau;
        donors_.push_back(i);
    }
    std::stable_sort(donors_.begin(), donors_.end(),
                     [&](std::size_t a, std::size_t b) { return leave_[a] < leave_[b]; });

    // Lagrangian minimizer for a hull segment and the donors still active
    auto build = [&](std::size_t segment, std::size_t first_donor, numvec& p) {
        p.assign(nominal.begin(), nominal.end());
        const auto r = hull_[segment];
        double moved = 0.0;
        for (auto d = first_donor; d < donors_.size(); ++d) {
            const auto i = donors_[d];
            if (i == r) continue;
            moved += p[i];
            p[i] = 0.0;
        }
        p[r] += moved;
        double used = 0.0;
        for (std::size_t i = 0; i < k; ++i) used += weights[i] * std::abs(p[i] - nominal[i]);
        return used;
    };

    double mass = 0.0, weighted_mass = 0.0;
    for (auto i : donors_) {
        mass += nominal[i];
        weighted_mass += nominal[i] * weights[i];
    }
    std::size_t segment = 0, next_donor = 0;
    double used = weighted_mass + weights[hull_[segment]] * mass;
    if (used <= budget) {
        build(segment, next_donor, witness);
        return std::inner_product(z.begin(), z.end(), witness.begin(), 0.0);
    }

    std::size_t prev_segment = segment, prev_donor = next_donor;
    while (next_donor < donors_.size() || segment + 1 < hull_.size()) {
        double event = std::numeric_limits<double>::infinity();
        if (next_donor < donors_.size()) event = leave_[donors_[next_donor]];
        if (segment + 1 < hull_.size()) event = std::min(event, hull_start_[segment + 1]);
        while (next_donor < donors_.size() && leave_[donors_[next_donor]] <= event) {
            const auto i = donors_[next_donor++];
            mass -= nominal[i];
            weighted_mass -= nominal[i] * weights[i];
        }
        while (segment + 1 < hull_.size() && hull_start_[segment + 1] <= event) ++segment;
        if (next_donor == donors_.size()) mass = weighted_mass = 0.0;
        used = weighted_mass + weights[hull_[segment]] * mass;
        if (used <= budget) break;
        prev_segment = segment;
        prev_donor = next_donor;
    }

    const double high = build(prev_segment, prev_donor, first_piece_);
    const double low = build(segment, next_donor, witness);
    double theta = high > low ? (budget - low) / (high - low) : 0.0;
    theta = std::clamp(theta, 0.0, 1.0);
    for (std::size_t i = 0; i < k; ++i)
        witness[i] = theta * first_piece_[i] + (1.0 - theta) * witness[i];
    return std::inner_product(z.begin(), z.end(), witness.begin(), 0.0);
}

} // namespace detail

} // namespace pcrit
