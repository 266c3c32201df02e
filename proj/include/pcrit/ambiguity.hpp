#pragma once

#include "pcrit/bayes.hpp"
#include "pcrit/mdp.hpp"
#include "pcrit/norms.hpp"
#include "pcrit/robust.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace pcrit {

/// Replacement for zero weights before the final normalization.
inline constexpr double weight_floor = 1e-3;

enum class ShapeMode { Uniform, Analytic, Socp };
enum class Inequality { HoeffdingLInf, HoeffdingL1, BernsteinL1 };

std::string_view to_string(ShapeMode mode);
std::string_view to_string(Inequality inequality);
ShapeMode parse_shape_mode(std::string_view text);
Inequality parse_inequality(std::string_view text);

/// Center used for the weight formula: median for L1 sets, midrange for Linf sets.
double default_lambda(std::span<const double> z, NormKind kind);

/**
 * Weights minimizing the dual-norm span bound for a fixed shift lambda.
 *
 * reachable (optional, same length as z) marks successors that get finite
 * weights; the others are set to infinity. Finite weights come back with unit
 * Euclidean norm.
 */
numvec optimize_weights_analytic(std::span<const double> z, double lambda, NormKind kind,
                                 std::span<const std::uint8_t> reachable = {});

struct SocpWeights {
    numvec weights;
    double lambda = 0.0;
    double bound = 0.0;
};

/**
 * Joint minimization over weights and lambda of psi * c subject to
 * g >= |z - lambda|, ||g||_2 <= c, for L1 sets. For fixed lambda the optimum
 * is g = |z - lambda|, so the problem reduces to minimizing ||z - lambda||_2,
 * attained at the mean of the reachable entries.
 */
SocpWeights optimize_weights_socp(std::span<const double> z, double psi,
                                  std::span<const std::uint8_t> reachable = {});

/// Unit-norm uniform weights over the reachable successors.
numvec uniform_weights(std::size_t size, std::span<const std::uint8_t> reachable = {});

/// Index (1-based) of the distance order statistic used as the credible radius.
std::size_t credible_index(std::size_t samples, double delta, std::size_t pairs);

/**
 * Credible-region budget for one pair: the credible_index-th smallest distance
 * ||P_i(s,a) - nominal||_{kind,weights} over the samples.
 */
double bayes_budget(const PosteriorSampleSet& samples, std::size_t s, std::size_t a, std::span<const double> nominal,
                    std::span<const double> weights, NormKind kind, double delta, std::size_t pairs);

/// Right-hand side of the union-bound inequality at budget psi.
double concentration_rhs(Inequality inequality, double psi, std::uint64_t count, std::span<const double> weights,
                         std::size_t states, std::size_t actions);

/**
 * Smallest psi (to 1e-10) whose concentration_rhs is at most delta. Infinite
 * weights are ignored; with one reachable successor the budget is zero, and
 * without data it covers the whole simplex.
 */
double frequentist_budget(Inequality inequality, std::uint64_t count, std::span<const double> weights,
                          std::size_t states, std::size_t actions, double delta);

double hoeffding_linf_budget(std::uint64_t count, std::span<const double> weights, std::size_t states,
                             std::size_t actions, double delta);
double hoeffding_l1_budget(std::uint64_t count, std::span<const double> weights, std::size_t states,
                           std::size_t actions, double delta);
double bernstein_l1_budget(std::uint64_t count, std::span<const double> weights, std::size_t states,
                           std::size_t actions, double delta);

/// L1 when the mean-centered L1 spread of v exceeds sqrt(S) times its median-centered Linf spread.
NormKind choose_norm(const ValueFunction& v);

/// Norm a frequentist inequality bounds.
NormKind inequality_norm(Inequality inequality);

struct BayesianInput {
    const PosteriorSampleSet* samples = nullptr;
};

struct FrequentistInput {
    const TransitionDataset* data = nullptr;
    /// Optional independent dataset used only for the shape step.
    const TransitionDataset* shape_data = nullptr;
    Inequality inequality = Inequality::HoeffdingL1;
};

/// Every intermediate quantity of the construction, kept for auditing.
struct AmbiguityBuild {
    ValueFunction nominal_value;  // v'
    Policy nominal_policy;
    PairVectors z;                 // z' per pair, full length
    numvec uniform_budgets;        // psi' per pair
    std::vector<numvec> weights;   // w per pair
    numvec budgets;                // psi per pair
    AmbiguitySet set;
};

struct BuildOptions {
    NormKind kind = NormKind::WeightedL1;
    ShapeMode shape = ShapeMode::Analytic;
    double delta = 0.05;
    double tol = default_tolerance;
};

/**
 * Shape-then-size construction:
 *  1. solve the nominal model for v' and z'
 *  2. budgets for uniform weights
 *  3. weights minimizing the span bound at those budgets (skipped for Uniform)
 *  4. budgets re-optimized for the new weights
 */
AmbiguityBuild build_ambiguity_set(const TabularMdp& mdp, const BayesianInput& input, const BuildOptions& options);
AmbiguityBuild build_ambiguity_set(const TabularMdp& mdp, const FrequentistInput& input, const BuildOptions& options);

/// Empirical frequencies per pair; pairs without data get uniform rows over the support.
TransitionModel empirical_model(const TabularMdp& mdp, const TransitionDataset& data);

} // namespace pcrit
