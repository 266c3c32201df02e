#pragma once

#include "pcrit/mdp.hpp"

#include <limits>
#include <span>
#include <string_view>

namespace pcrit {

enum class NormKind { WeightedL1, WeightedLInf };

enum class Sense { Min, Max };

std::string_view to_string(NormKind kind);
NormKind parse_norm_kind(std::string_view text);

inline constexpr double infinite_weight = std::numeric_limits<double>::infinity();

/// Slack allowed on the norm constraint when checking witnesses.
inline constexpr double feasibility_slack = 1e-9;

/**
 * Weighted-norm ball intersected with the simplex:
 * { p in simplex : ||p - nominal||_{kind,weights} <= budget }.
 *
 * An infinite weight pins that coordinate to zero (unreachable successor).
 */
struct BallSpec {
    NormKind kind = NormKind::WeightedL1;
    numvec nominal;
    numvec weights;
    double budget = 0.0;

    /// Throws InvalidSet when the invariants do not hold.
    void validate() const;
};

/// sum w_i |x_i| or max w_i |x_i|; +inf when x is nonzero where w is infinite.
double weighted_norm(std::span<const double> x, std::span<const double> w, NormKind kind);

struct WorstCase {
    double value = 0.0;
    numvec witness;
};

/// Exact optimum of p'z over the ball (a linear program) and an optimal p.
WorstCase worst_case_expectation(std::span<const double> z, const BallSpec& ball, Sense sense);

/// Span of the ball along z: max p'z - min p'z over the ball.
double ambiguity_span(std::span<const double> z, const BallSpec& ball);

/**
 * 2 * psi * ||z - lambda 1||_* where the dual of weighted L1 is weighted Linf
 * with inverse weights and vice versa. Infinite weights drop out of the sum.
 */
double dual_norm_bound(std::span<const double> z, std::span<const double> w, double psi,
                       double lambda, NormKind kind);

namespace detail {

/**
 * Minimizes p'z over a ball given only on its supported coordinates (all
 * weights finite). Writes the minimizer into witness and returns the value.
 * Scratch buffers are reused across calls by the robust solver.
 */
class InnerSolver {
public:
    double minimize(NormKind kind, std::span<const double> z, std::span<const double> nominal,
                    std::span<const double> weights, double budget, numvec& witness);

private:
    double minimize_l1(std::span<const double> z, std::span<const double> nominal,
                       std::span<const double> weights, double budget, numvec& witness);
    double minimize_linf(std::span<const double> z, std::span<const double> nominal,
                         std::span<const double> weights, double budget, numvec& witness);

    indvec order_;
    indvec hull_;
    numvec hull_start_;
    indvec donors_;
    numvec leave_;
    numvec first_piece_;
};

} // namespace detail

} // namespace pcrit
