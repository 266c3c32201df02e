#include <doctest.h>

#include "support/ball_lp.hpp"
#include "support/random_instances.hpp"

#include <pcrit/norms.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace pcrit;

namespace {

BallSpec make_ball(NormKind kind, numvec nominal, numvec weights, double budget) {
    BallSpec b;
    b.kind = kind;
    b.nominal = std::move(nominal);
    b.weights = std::move(weights);
    b.budget = budget;
    return b;
}

void check_witness(const numvec& z, const BallSpec& ball, const WorstCase& result) {
    double total = 0.0;
    numvec diff(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
        CHECK(result.witness[i] >= -1e-12);
        if (std::isinf(ball.weights[i])) CHECK(result.witness[i] == 0.0);
        total += result.witness[i];
        diff[i] = result.witness[i] - ball.nominal[i];
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(weighted_norm(diff, ball.weights, ball.kind) <= ball.budget + feasibility_slack);
    const double value = std::inner_product(z.begin(), z.end(), result.witness.begin(), 0.0);
    CHECK(value == doctest::Approx(result.value).epsilon(1e-12));
}

} // namespace

TEST_CASE("weighted norms of a small vector") {
    const numvec x{0.1, -0.2, 0.1}, w{1, 2, 1};
    CHECK(weighted_norm(x, w, NormKind::WeightedL1) == doctest::Approx(0.6));
    CHECK(weighted_norm(x, w, NormKind::WeightedLInf) == doctest::Approx(0.4));
    const numvec zero(3, 0.0);
    CHECK(weighted_norm(zero, w, NormKind::WeightedL1) == 0.0);
    CHECK(weighted_norm(zero, w, NormKind::WeightedLInf) == 0.0);
}

TEST_CASE("zero budget returns the nominal point") {
    const numvec z{3, -1, 2};
    const auto ball = make_ball(NormKind::WeightedL1, {0.2, 0.3, 0.5}, {1, 1, 1}, 0.0);
    const auto r = worst_case_expectation(z, ball, Sense::Min);
    CHECK(r.value == doctest::Approx(0.6 - 0.3 + 1.0));
    CHECK(r.witness == ball.nominal);
    CHECK(ambiguity_span(z, ball) == 0.0);
}

TEST_CASE("hand-checked L1 and Linf instances") {
    SUBCASE("L1 moves mass to the cheapest successor") {
        const numvec z{1, 0, 2};
        const auto ball = make_ball(NormKind::WeightedL1, {0.5, 0.5, 0}, {1, 1, 1}, 0.2);
        const auto r = worst_case_expectation(z, ball, Sense::Min);
        CHECK(r.value == doctest::Approx(0.4));
        CHECK(r.value == doctest::Approx(oracle::ball_optimum(z, ball, false)).epsilon(1e-10));
        check_witness(z, ball, r);
    }
    SUBCASE("Linf clamps each coordinate") {
        const numvec z{0, 1};
        const auto ball = make_ball(NormKind::WeightedLInf, {0.5, 0.5}, {1, 1}, 0.1);
        const auto r = worst_case_expectation(z, ball, Sense::Min);
        CHECK(r.value == doctest::Approx(0.4));
        CHECK(r.witness[0] == doctest::Approx(0.6));
        CHECK(r.witness[1] == doctest::Approx(0.4));
        CHECK(ambiguity_span(z, ball) == doctest::Approx(0.2));
    }
}

TEST_CASE("invalid balls are rejected") {
    const numvec z{1, 2};
    CHECK_THROWS_AS(worst_case_expectation(z, make_ball(NormKind::WeightedL1, {0.5, 0.6}, {1, 1}, 0.1), Sense::Min),
                    Error);
    CHECK_THROWS_AS(worst_case_expectation(z, make_ball(NormKind::WeightedL1, {0.5, 0.5}, {0, 1}, 0.1), Sense::Min),
                    Error);
    CHECK_THROWS_AS(
        worst_case_expectation(z, make_ball(NormKind::WeightedL1, {0.5, 0.5}, {infinite_weight, 1}, 0.1), Sense::Min),
        Error);
    CHECK_THROWS_AS(worst_case_expectation(z, make_ball(NormKind::WeightedL1, {0.5, 0.5}, {1, 1}, -1), Sense::Min),
                    Error);
}

TEST_CASE("huge budgets reach the extreme supported vertex") {
    const numvec z{4, -2, 7, -9};
    const auto ball = make_ball(NormKind::WeightedL1, {0.25, 0.25, 0.5, 0.0}, {0.3, 0.7, 1.1, infinite_weight}, 100.0);
    const auto low = worst_case_expectation(z, ball, Sense::Min);
    const auto high = worst_case_expectation(z, ball, Sense::Max);
    CHECK(low.value == doctest::Approx(-2.0));
    CHECK(high.value == doctest::Approx(7.0));
    CHECK(low.witness[3] == 0.0);
}

TEST_CASE("inner problems agree with a generic LP on random instances") {
    gen::Engine rng(20240611);
    for (int trial = 0; trial < 500; ++trial) {
        const auto k = gen::index(rng, 1, 6);
        const auto kind = trial % 2 == 0 ? NormKind::WeightedL1 : NormKind::WeightedLInf;
        const auto ball = gen::ball(rng, k, kind, true);
        const auto z = gen::values(rng, k);
        CAPTURE(trial);
        const auto low = worst_case_expectation(z, ball, Sense::Min);
        const auto high = worst_case_expectation(z, ball, Sense::Max);
        const double lp_low = oracle::ball_optimum(z, ball, false);
        const double lp_high = oracle::ball_optimum(z, ball, true);
        CHECK(std::abs(low.value - lp_low) <= 1e-8);
        CHECK(std::abs(high.value - lp_high) <= 1e-8);
        CHECK(std::abs(ambiguity_span(z, ball) - (lp_high - lp_low)) <= 1e-8);
        check_witness(z, ball, low);
        check_witness(z, ball, high);
        const double center = std::inner_product(z.begin(), z.end(), ball.nominal.begin(), 0.0);
        CHECK(low.value <= center + 1e-12);
        CHECK(center <= high.value + 1e-12);
    }
}

TEST_CASE("span is invariant to shifts and positively homogeneous") {
    gen::Engine rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        const auto k = gen::index(rng, 2, 6);
        const auto ball = gen::ball(rng, k, trial % 2 ? NormKind::WeightedL1 : NormKind::WeightedLInf, false);
        auto z = gen::values(rng, k);
        const double base = ambiguity_span(z, ball);
        const double c = gen::uniform(rng, -3, 3), alpha = gen::uniform(rng, 0, 4);
        numvec shifted = z, scaled = z;
        for (auto& x : shifted) x += c;
        for (auto& x : scaled) x *= alpha;
        CHECK(ambiguity_span(shifted, ball) == doctest::Approx(base).epsilon(1e-9));
        CHECK(ambiguity_span(scaled, ball) == doctest::Approx(alpha * base).epsilon(1e-9));
    }
}

TEST_CASE("rescaling weights and budget together leaves the set unchanged") {
    gen::Engine rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        const auto k = gen::index(rng, 2, 6);
        auto ball = gen::ball(rng, k, trial % 2 ? NormKind::WeightedL1 : NormKind::WeightedLInf, false);
        if (ball.budget == 0.0) ball.budget = 0.3;
        const auto z = gen::values(rng, k);
        auto unit = ball;
        for (auto& w : unit.weights) w /= ball.budget;
        unit.budget = 1.0;
        CHECK(worst_case_expectation(z, ball, Sense::Min).value ==
              doctest::Approx(worst_case_expectation(z, unit, Sense::Min).value).epsilon(1e-10));
    }
}

TEST_CASE("span is bounded by the dual norm for any shift") {
    gen::Engine rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const auto k = gen::index(rng, 1, 6);
        const auto kind = trial % 2 ? NormKind::WeightedL1 : NormKind::WeightedLInf;
        const auto ball = gen::ball(rng, k, kind, true);
        const auto z = gen::values(rng, k);
        const double span = ambiguity_span(z, ball);
        for (int j = 0; j < 100; ++j) {
            const double lambda = gen::uniform(rng, -6, 6);
            CHECK(span <= dual_norm_bound(z, ball.weights, ball.budget, lambda, kind) + 1e-10);
        }
    }
}

TEST_CASE("dual norm bound examples") {
    const numvec z{3, 1}, w{1, 2};
    CHECK(dual_norm_bound(z, w, 0.5, 2.0, NormKind::WeightedL1) == doctest::Approx(1.0));
    CHECK(dual_norm_bound(z, w, 0.5, 2.0, NormKind::WeightedLInf) == doctest::Approx(1.5));
    const numvec flat{2, 2};
    CHECK(dual_norm_bound(flat, w, 0.5, 2.0, NormKind::WeightedL1) == 0.0);
    CHECK(dual_norm_bound(z, w, 1.5, 2.0, NormKind::WeightedL1) == doctest::Approx(3.0));
}

TEST_CASE("weighted L1 and Linf with inverse weights are dual") {
    gen::Engine rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const auto k = gen::index(rng, 1, 8);
        numvec z(k), w(k), inverse(k);
        for (std::size_t i = 0; i < k; ++i) {
            z[i] = gen::uniform(rng, -3, 3);
            w[i] = gen::uniform(rng, 0.1, 3);
            inverse[i] = 1.0 / w[i];
        }
        // vertices of the unit weighted-L1 ball are the points +-e_i / w_i
        double best = -1e300;
        for (std::size_t i = 0; i < k; ++i) best = std::max({best, z[i] / w[i], -z[i] / w[i]});
        CHECK(best == doctest::Approx(weighted_norm(z, inverse, NormKind::WeightedLInf)).epsilon(1e-14));
    }
}

TEST_CASE("span grows with the budget") {
    gen::Engine rng(9);
    for (int trial = 0; trial < 200; ++trial) {
        const auto k = gen::index(rng, 1, 6);
        auto small = gen::ball(rng, k, trial % 2 ? NormKind::WeightedL1 : NormKind::WeightedLInf, true);
        auto large = small;
        large.budget = small.budget + gen::uniform(rng, 0, 1);
        const auto z = gen::values(rng, k);
        CHECK(ambiguity_span(z, small) <= ambiguity_span(z, large) + 1e-10);
    }
}
