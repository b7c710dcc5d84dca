#include <catch2/catch.hpp>

#include "fgfrft/bench.hpp"

using namespace fgfrft;

TEST_CASE("accuracy sweep: integer-order control rows and L monotonicity") {
    const std::vector<SweepRecord> records =
        accuracy_sweep({32}, {0.5, 1.0}, {4, 8}, {1, 2});
    REQUIRE(records.size() == 8);

    for (const SweepRecord& r : records) {
        CHECK(r.mse >= 0.0);
        CHECK(r.build_time_fast > 0.0);
        CHECK(r.build_time_exact > 0.0);
        if (r.alpha == 1.0) {
            CHECK(r.nmse <= 1e-10);
            CHECK(r.mae <= 1e-10);
        }
    }

    // doubling L cannot worsen the error for a fixed (n, alpha, seed)
    auto nmse_of = [&](int l, std::uint64_t seed) {
        for (const SweepRecord& r : records)
            if (r.l == l && r.seed == seed && r.alpha == 0.5) return r.nmse;
        FAIL("missing record");
        return 0.0;
    };
    for (std::uint64_t seed : {1ull, 2ull}) CHECK(nmse_of(8, seed) <= nmse_of(4, seed));
}

TEST_CASE("accuracy sweep determinism: error columns reproduce bit-identically") {
    const auto a = accuracy_sweep({24}, {0.35, 0.75}, {6}, {9});
    const auto b = accuracy_sweep({24}, {0.35, 0.75}, {6}, {9});
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].mse == b[i].mse);
        CHECK(a[i].mae == b[i].mae);
        CHECK(a[i].nmse == b[i].nmse);
    }
}

TEST_CASE("accuracy sweep rejects empty lists and tiny budgets") {
    CHECK_THROWS_AS(accuracy_sweep({}, {0.5}, {4}, {1}), parameter_error);
    CHECK_THROWS_AS(accuracy_sweep({64}, {0.5}, {8}, {1}, 1024), capacity_error);
}

TEST_CASE("timing benchmark records medians and the speedup ratio") {
    const std::vector<TimingRecord> records = timing_benchmark({48, 64}, 4, 3, 1, 7);
    REQUIRE(records.size() == 2);
    for (const TimingRecord& r : records) {
        CHECK(r.median_fast_s > 0.0);
        CHECK(r.median_exact_s > 0.0);
        CHECK(r.speedup == Approx(r.median_exact_s / r.median_fast_s));
        CHECK(r.repeats == 3);
    }
}

TEST_CASE("single-repeat timing attaches a measurement-quality warning") {
    std::vector<std::string> captured;
    auto previous = warning_sink();
    warning_sink() = [&](const std::string& msg) { captured.push_back(msg); };
    const std::vector<TimingRecord> records = timing_benchmark({32}, 4, 1, 1, 3);
    warning_sink() = previous;
    REQUIRE(records.size() == 1);
    CHECK(records[0].quality_warning);
    REQUIRE_FALSE(captured.empty());

    CHECK_THROWS_AS(timing_benchmark({32}, 4, 0, 1), parameter_error);
    CHECK_THROWS_AS(timing_benchmark({32}, 4, 3, 0), parameter_error);
}

TEST_CASE("timing benchmark works on Haar draws too") {
    const std::vector<TimingRecord> records = timing_benchmark({40}, 4, 3, 1, 5, true);
    REQUIRE(records.size() == 1);
    CHECK(records[0].median_exact_s > 0.0);
}

TEST_CASE("order-learning experiment emits Table-style rows per backend") {
    const std::vector<OrderLearnSummary> rows =
        order_learning_experiment({1}, 1.2, 40, 0.01, 24, 8, {4});
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].backend == Backend::fast);
    CHECK(rows[1].backend == Backend::exact);
    for (const OrderLearnSummary& r : rows) {
        CHECK(r.k == 1);
        CHECK(r.abs_delta_alpha == Approx(std::fabs(r.sum_alpha - 1.2)));
        CHECK(r.wall_s > 0.0);
    }
    CHECK(rows[0].speedup == Approx(rows[1].wall_s / rows[0].wall_s));

    const std::vector<OrderLearnSummary> again =
        order_learning_experiment({1}, 1.2, 40, 0.01, 24, 8, {4});
    CHECK(rows[0].final_loss == again[0].final_loss);
    CHECK(rows[1].sum_alpha == again[1].sum_alpha);
}
