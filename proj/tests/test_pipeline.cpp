#include <doctest.h>

#include <pcrit/pipeline.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>

using namespace pcrit;

namespace {

std::string temp_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "pcrit_test_pipeline" / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir.string();
}

ExperimentConfig small_config() {
    ExperimentConfig c;
    c.domain = "riverswim";
    c.samples = 30;
    c.dataset_size = 15;
    c.validation_samples = 200;
    c.seeds = {3};
    return c;
}

} // namespace

TEST_CASE("config text parses, dumps and round-trips") {
    const auto c = parse_config(R"(
        # comment line
        domain = inventory
        domain_size = 11
        mode = frequentist
        norm = linf
        shape = socp
        inequality = hoeffding-linf
        delta = 0.1
        seeds = 1, 2, 5
        bench_methods = uniform-l1, optimized-linf
        bench_deltas = 0.05,0.2
        bench_validate = true
        split_dataset = yes
    )");
    CHECK(c.domain == "inventory");
    CHECK(c.domain_size == 11);
    CHECK(c.mode == Mode::Frequentist);
    CHECK(c.norm == NormKind::WeightedLInf);
    CHECK(c.shape == ShapeMode::Socp);
    CHECK(c.inequality == Inequality::HoeffdingLInf);
    CHECK(c.delta == 0.1);
    CHECK(c.seeds == std::vector<std::uint64_t>{1, 2, 5});
    CHECK(c.bench_methods.size() == 2);
    CHECK(c.bench_deltas == std::vector<double>{0.05, 0.2});
    CHECK(c.bench_validate);
    CHECK(c.split_dataset);

    const auto again = parse_config(config_to_text(c));
    CHECK(config_to_text(again) == config_to_text(c));
    CHECK(again.seeds == c.seeds);
    CHECK(again.inequality == c.inequality);

    // every advertised key appears in the dump in the same order
    const auto text = config_to_text(ExperimentConfig{});
    std::size_t at = 0;
    for (const auto& key : config_keys()) {
        const auto found = text.find(key + " =", at);
        CHECK_MESSAGE(found != std::string::npos, key);
        if (found != std::string::npos) at = found;
    }
}

TEST_CASE("bad config input is rejected") {
    CHECK_THROWS_AS(parse_config("no_such_key = 1"), Error);
    CHECK_THROWS_AS(parse_config("delta = abc"), Error);
    CHECK_THROWS_AS(parse_config("mode = sometimes"), Error);
    CHECK_THROWS_AS(parse_config("domain riverswim"), Error);
    CHECK_THROWS_AS(parse_config("bench_methods = fancy-l2"), Error);
    ExperimentConfig c;
    c.delta = 0.7;
    CHECK_THROWS_AS(c.validate(), Error);
    c.delta = 0.05;
    c.seeds.clear();
    CHECK_THROWS_AS(c.validate(), Error);
    c.seeds = {1};
    c.mode = Mode::Frequentist;
    c.norm = NormKind::WeightedLInf;
    c.inequality = Inequality::HoeffdingL1;
    CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("method labels") {
    const auto m = parse_method("optimized-linf");
    CHECK(m.shape == ShapeMode::Analytic);
    CHECK(m.norm == NormKind::WeightedLInf);
    CHECK(parse_method("uniform-l1").shape == ShapeMode::Uniform);
    CHECK(parse_method("socp-l1").shape == ShapeMode::Socp);
    CHECK_THROWS_AS(parse_method("optimized"), Error);
}

TEST_CASE("normalized loss") {
    CHECK(normalized_loss(10.0, 4.0) == doctest::Approx(0.6));
    CHECK(normalized_loss(-10.0, -12.0) == doctest::Approx(0.2));
    CHECK(normalized_loss(0.0, 0.0) == 0.0);
    CHECK(std::isinf(normalized_loss(0.0, -1.0)));
    CHECK(median({3.0, 1.0, 2.0}) == 2.0);
    CHECK(median({4.0, 1.0, 2.0, 3.0}) == 2.5);
}

TEST_CASE("a Bayesian run is deterministic and internally consistent") {
    const auto config = small_config();
    const auto a = run_single(config, 3);
    const auto b = run_single(config, 3);
    CHECK(a.solution.robust_return == b.solution.robust_return);
    CHECK(a.solution.policy == b.solution.policy);
    CHECK(a.build.budgets == b.build.budgets);
    const auto c = run_single(config, 4);
    CHECK(c.build.budgets != a.build.budgets);

    // the robust return never exceeds the best return under the posterior mean
    CHECK(a.solution.robust_return <= a.nominal_return + 1e-9);
    CHECK(a.normalized_loss == doctest::Approx(normalized_loss(a.nominal_return, a.solution.robust_return)));
    REQUIRE(a.posterior);
    // the set is centered at the mean of the posterior draws of the posterior stream
    const auto draws = sample_posterior(*a.posterior, config.samples, derive_seed(3, posterior_stream));
    const auto center = a.build.set.nominal_model(a.domain.mdp);
    const auto expected = sample_mean(draws);
    for (std::size_t i = 0; i < center.data().size(); ++i)
        CHECK(center.data()[i] == doctest::Approx(expected.data()[i]).epsilon(1e-12));

    const auto report = validate_guarantee(config, a);
    CHECK(report.samples == 200);
    CHECK(report.threshold == doctest::Approx(0.93));
    CHECK(report.passed == (report.guarantee_fraction >= report.threshold));
    CHECK(report.guarantee_fraction >= report.coverage - 1e-12);
}

TEST_CASE("saved artifacts reproduce the robust return") {
    auto config = small_config();
    config.domain = "machine-replacement";
    config.norm = NormKind::WeightedLInf;
    const auto run = run_single(config, 7);
    const auto dir = temp_dir("artifacts");
    save_run(dir, config, run);
    for (const char* file : {"config.txt", "mdp.csv", "nominal_value.csv", "z.csv", "uniform_budgets.csv",
                             "ambiguity.csv", "solution.csv", "summary.txt"})
        CHECK_MESSAGE(std::filesystem::exists(std::filesystem::path(dir) / file), file);

    const auto loaded = load_mdp_csv(dir + "/mdp.csv");
    const auto amb = load_ambiguity_csv(dir + "/ambiguity.csv", loaded.mdp);
    CHECK(amb.kind == run.build.set.kind);
    for (std::size_t i = 0; i < amb.balls.size(); ++i) {
        CHECK(amb.balls[i].budget == doctest::Approx(run.build.set.balls[i].budget).epsilon(1e-12));
        CHECK(amb.balls[i].weights == run.build.set.balls[i].weights);
    }
    const auto resolved = robust_value_iteration(loaded.mdp, amb, config.tol);
    CHECK(std::abs(resolved.robust_return - run.solution.robust_return) <= 1e-8);
    CHECK(resolved.policy == run.solution.policy);
    CHECK(ambiguity_to_csv(loaded.mdp, amb) == ambiguity_to_csv(run.domain.mdp, run.build.set));

    const auto persisted = load_config(dir + "/config.txt");
    CHECK(config_to_text(persisted) == config_to_text(config));
}

TEST_CASE("frequentist runs") {
    auto config = small_config();
    config.mode = Mode::Frequentist;
    config.domain = "inventory";
    config.domain_size = 9;
    config.dataset_size = 40;
    const auto run = run_single(config, 2);
    CHECK(run.solution.robust_return <= run.nominal_return + 1e-9);
    CHECK_FALSE(run.posterior);
    try {
        validate_guarantee(config, run);
        FAIL("expected an exception");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Unsupported);
    }
    // a split dataset keeps the run well defined and budgets non-negative
    config.split_dataset = true;
    const auto split = run_single(config, 2);
    for (double psi : split.build.budgets) CHECK(psi >= 0.0);
}

TEST_CASE("external dataset and posterior files") {
    const auto dir = temp_dir("external");
    const auto domain = make_domain("riverswim");
    const auto data = sample_dataset(domain.mdp, domain.truth, 10, 5);
    save_dataset_csv(dir + "/data.csv", data);
    auto config = small_config();
    config.dataset_file = dir + "/data.csv";
    const auto a = run_single(config, 1);
    const auto b = run_single(config, 2);
    // same data, different posterior draws
    CHECK(a.posterior->mean() == b.posterior->mean());

    config.dataset_file = dir + "/missing.csv";
    CHECK_THROWS_AS(run_single(config, 1), Error);
}

TEST_CASE("experiment grids record failures per cell") {
    auto config = small_config();
    config.seeds = {1, 2, 3};
    config.bench_domains = {"riverswim", "cartpole"};
    config.bench_methods = {"uniform-l1", "optimized-l1"};
    config.bench_validate = true;
    const auto table = run_experiment(config);
    CHECK(table.rows.size() == 12);
    CHECK(table.summary.size() == 4);
    for (const auto& row : table.rows) {
        if (row.domain == "cartpole") {
            CHECK_FALSE(row.error.empty());
        } else {
            CHECK(row.error.empty());
            CHECK(row.guarantee_fraction.has_value());
        }
    }
    for (const auto& s : table.summary) {
        if (s.domain == "cartpole") {
            CHECK(s.failures == 3);
            CHECK(std::isnan(s.median_loss));
        } else {
            CHECK(s.failures == 0);
            numvec losses;
            for (const auto& row : table.rows)
                if (row.domain == s.domain && row.method == s.method) losses.push_back(row.loss);
            CHECK(s.median_loss == median(losses));
        }
    }
    const auto csv = table_to_csv(table);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 13);
    const auto summary = summary_to_csv(table);
    CHECK(std::count(summary.begin(), summary.end(), '\n') == 5);
    CHECK(format_table(table).find("optimized-l1") != std::string::npos);
}
