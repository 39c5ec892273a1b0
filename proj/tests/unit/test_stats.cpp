// Copyright 2026 shortcut-audit contributors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "shortcut_audit/binormal.hpp"
#include "shortcut_audit/errors.hpp"
#include "shortcut_audit/rng.hpp"
#include "shortcut_audit/stats.hpp"

namespace stats = shortcut_audit::stats;
namespace oracle = shortcut_audit::test_oracles;
using shortcut_audit::RngStream;

TEST_CASE("auc on pinned examples") {
    CHECK(stats::auc(std::vector{0.9, 0.8}, std::vector{0.1, 0.2}) == 1.0);
    CHECK(stats::auc(std::vector{0.5}, std::vector{0.5}) == 0.5);
    // Brute force over the 4 pairs: 3 wins + 1 loss.
    CHECK(stats::auc(std::vector{0.8, 0.4}, std::vector{0.6, 0.2}) == 0.75);
    CHECK(!stats::auc({}, std::vector{0.1}).has_value());
    CHECK(!stats::auc(std::vector{0.1}, {}).has_value());
}

TEST_CASE("auc equals the pairwise definition on random instances") {
    RngStream rng(1, 0);
    for (int instance = 0; instance < 400; ++instance) {
        const std::size_t n_pos = 1 + rng.next_below(50);
        const std::size_t n_neg = 1 + rng.next_below(50);
        std::vector<double> pos(n_pos);
        std::vector<double> neg(n_neg);
        // Quantized scores so ties actually happen.
        for (auto& v : pos) v = static_cast<double>(rng.next_below(20)) / 19.0;
        for (auto& v : neg) v = static_cast<double>(rng.next_below(20)) / 19.0;
        const double fast = stats::auc(pos, neg).value();
        const double brute = oracle::pairwise_auc(pos, neg);
        CHECK(std::fabs(fast - brute) <= 1e-12);
        // Complement identity (one division rounding apart at most).
        CHECK(std::fabs(stats::auc(neg, pos).value() + fast - 1.0) <= 1e-15);
    }
}

TEST_CASE("auc is invariant under strictly increasing transforms") {
    RngStream rng(2, 0);
    std::vector<double> pos(40);
    std::vector<double> neg(35);
    for (auto& v : pos) v = rng.next_double();
    for (auto& v : neg) v = rng.next_double();
    const double base = stats::auc(pos, neg).value();

    auto cubed = [](std::vector<double> v) {
        for (auto& x : v) x = x * x * x;
        return v;
    };
    auto exped = [](std::vector<double> v) {
        for (auto& x : v) x = std::exp(3.0 * x - 1.0);
        return v;
    };
    CHECK(stats::auc(cubed(pos), cubed(neg)).value() == base);
    CHECK(stats::auc(exped(pos), exped(neg)).value() == base);
}

TEST_CASE("ks statistic on pinned examples") {
    CHECK(stats::ks_statistic(std::vector{1.0, 2.0, 3.0}, std::vector{1.0, 2.0, 3.0}) == 0.0);
    CHECK(stats::ks_statistic(std::vector{0.0, 0.0}, std::vector{1.0, 1.0}) == 1.0);
    // ECDF scan over the union of {1,2,3,4} and {3,4,5,6} peaks at 0.5.
    CHECK(stats::ks_statistic(std::vector{1.0, 2.0, 3.0, 4.0},
                              std::vector{3.0, 4.0, 5.0, 6.0}) == 0.5);
    CHECK(!stats::ks_statistic({}, std::vector{0.1}).has_value());
}

TEST_CASE("ks equals the brute-force ECDF scan and is symmetric") {
    RngStream rng(3, 0);
    for (int instance = 0; instance < 400; ++instance) {
        const std::size_t na = 1 + rng.next_below(50);
        const std::size_t nb = 1 + rng.next_below(50);
        std::vector<double> a(na);
        std::vector<double> b(nb);
        for (auto& v : a) v = static_cast<double>(rng.next_below(15)) / 7.0;
        for (auto& v : b) v = 0.1 + static_cast<double>(rng.next_below(15)) / 7.0;
        const double fast = stats::ks_statistic(a, b).value();
        CHECK(std::fabs(fast - oracle::ecdf_scan_ks(a, b)) <= 1e-12);
        CHECK(stats::ks_statistic(b, a).value() == fast);
    }
}

TEST_CASE("quartiles use the p*(n-1) interpolation rule") {
    auto q = stats::quartiles(std::vector{1.0, 2.0, 3.0, 4.0, 5.0}).value();
    CHECK(q.q1 == 2.0);
    CHECK(q.median == 3.0);
    CHECK(q.q3 == 4.0);

    q = stats::quartiles(std::vector{7.0}).value();
    CHECK(q.q1 == 7.0);
    CHECK(q.median == 7.0);
    CHECK(q.q3 == 7.0);

    // Hand-applied rule on {1,2,3,4}: positions 0.75, 1.5, 2.25.
    q = stats::quartiles(std::vector{4.0, 2.0, 1.0, 3.0}).value();
    CHECK(q.q1 == doctest::Approx(1.75));
    CHECK(q.median == doctest::Approx(2.5));
    CHECK(q.q3 == doctest::Approx(3.25));

    CHECK(!stats::quartiles({}).has_value());
}

namespace {

struct Synthetic {
    std::vector<double> scores;
    std::vector<std::uint8_t> labels;
};

Synthetic binormal_sample(std::size_t n_pos, std::size_t n_neg, double target_auc,
                          std::uint64_t seed) {
    const double a = shortcut_audit::binormal::separation_from_auc(target_auc);
    RngStream rng(seed, 17, 0, shortcut_audit::rng_domain::kTest);
    Synthetic s;
    for (std::size_t i = 0; i < n_pos; ++i) {
        s.scores.push_back(a + rng.next_normal());
        s.labels.push_back(1);
    }
    for (std::size_t i = 0; i < n_neg; ++i) {
        s.scores.push_back(rng.next_normal());
        s.labels.push_back(0);
    }
    return s;
}

}  // namespace

TEST_CASE("bootstrap of a perfectly separated set is the degenerate interval") {
    std::vector<double> scores{0.9, 0.8, 0.85, 0.1, 0.2, 0.15};
    std::vector<std::uint8_t> labels{1, 1, 1, 0, 0, 0};
    stats::BootstrapOptions options;
    options.replicates = 500;
    options.seed = 9;
    const auto ci =
        stats::bootstrap_ci(6, stats::make_auc_statistic(scores, labels), options);
    CHECK(ci.point == 1.0);
    CHECK(ci.lower == 1.0);
    CHECK(ci.upper == 1.0);
    CHECK(ci.replicates == 500);
}

TEST_CASE("bootstrap with one replicate collapses to that replicate") {
    const Synthetic s = binormal_sample(50, 50, 0.8, 4);
    stats::BootstrapOptions options;
    options.replicates = 1;
    options.seed = 5;
    const auto ci = stats::bootstrap_ci(static_cast<std::uint32_t>(s.scores.size()),
                                        stats::make_auc_statistic(s.scores, s.labels), options);
    CHECK(ci.lower == ci.upper);
}

TEST_CASE("bootstrap is reproducible for a fixed seed") {
    const Synthetic s = binormal_sample(120, 300, 0.8, 6);
    stats::BootstrapOptions options;
    options.replicates = 400;
    options.seed = 31;
    const auto statistic = stats::make_auc_statistic(s.scores, s.labels);
    const auto a = stats::bootstrap_ci(420, statistic, options);
    const auto b = stats::bootstrap_ci(420, statistic, options);
    CHECK(a.point == b.point);
    CHECK(a.lower == b.lower);
    CHECK(a.upper == b.upper);
    CHECK(a.discarded_degenerate == b.discarded_degenerate);
}

TEST_CASE("auc index statistic agrees with direct auc on resamples") {
    const Synthetic s = binormal_sample(30, 45, 0.75, 8);
    const auto statistic = stats::make_auc_statistic(s.scores, s.labels);
    RngStream rng(1, 2, 3, shortcut_audit::rng_domain::kTest);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::uint32_t> picks(s.scores.size());
        for (auto& p : picks) {
            p = static_cast<std::uint32_t>(rng.next_below(s.scores.size()));
        }
        std::vector<double> pos;
        std::vector<double> neg;
        for (std::uint32_t i : picks) {
            (s.labels[i] ? pos : neg).push_back(s.scores[i]);
        }
        const auto direct = stats::auc(pos, neg);
        const auto counted = statistic(picks);
        REQUIRE(direct.has_value() == counted.has_value());
        if (direct) CHECK(*counted == doctest::Approx(*direct).epsilon(1e-14));
    }
}

TEST_CASE("rare positives force degenerate redraws that are counted") {
    Synthetic s = binormal_sample(1, 60, 0.9, 10);
    stats::BootstrapOptions options;
    options.replicates = 300;
    options.seed = 12;
    const auto ci = stats::bootstrap_ci(static_cast<std::uint32_t>(s.scores.size()),
                                        stats::make_auc_statistic(s.scores, s.labels), options);
    // P(replicate keeps the one positive) ~ 1 - 1/e, so many redraws.
    CHECK(ci.discarded_degenerate > 0);
    CHECK(ci.replicates == 300);
}

TEST_CASE("stratified resampling preserves class counts exactly") {
    const Synthetic s = binormal_sample(25, 75, 0.8, 14);
    std::vector<std::uint32_t> strata(s.labels.begin(), s.labels.end());
    // Statistic = positive count; stratified resampling pins it at 25.
    const stats::IndexStatistic positives_count =
        [&s](std::span<const std::uint32_t> picks) -> std::optional<double> {
        double count = 0.0;
        for (std::uint32_t i : picks) count += s.labels[i];
        return count;
    };
    stats::BootstrapOptions options;
    options.replicates = 200;
    options.seed = 3;
    options.stratified = true;
    const auto ci = stats::bootstrap_ci(100, positives_count, options, strata);
    CHECK(ci.lower == 25.0);
    CHECK(ci.upper == 25.0);

    options.stratified = false;
    const auto loose = stats::bootstrap_ci(100, positives_count, options);
    CHECK(loose.lower < loose.upper);  // unstratified counts fluctuate
}

TEST_CASE("bootstrap rejects a statistic undefined on the full set") {
    std::vector<double> scores{0.3, 0.4, 0.5};
    std::vector<std::uint8_t> labels{0, 0, 0};
    stats::BootstrapOptions options;
    options.replicates = 10;
    CHECK_THROWS_AS(
        stats::bootstrap_ci(3, stats::make_auc_statistic(scores, labels), options),
        shortcut_audit::ValidationError);
}

TEST_CASE("record-span statistic adapter matches the index machinery") {
    struct Row {
        double score;
        bool positive;
    };
    std::vector<Row> rows;
    const Synthetic s = binormal_sample(40, 60, 0.85, 21);
    for (std::size_t i = 0; i < s.scores.size(); ++i) {
        rows.push_back({s.scores[i], s.labels[i] == 1});
    }
    const auto by_records = stats::make_record_statistic<Row>(
        rows, [](std::span<const Row> resample) -> std::optional<double> {
            std::vector<double> pos;
            std::vector<double> neg;
            for (const auto& row : resample) (row.positive ? pos : neg).push_back(row.score);
            return stats::auc(pos, neg);
        });
    const auto by_index = stats::make_auc_statistic(s.scores, s.labels);
    stats::BootstrapOptions options;
    options.replicates = 150;
    options.seed = 77;
    const auto a = stats::bootstrap_ci(100, by_records, options);
    const auto b = stats::bootstrap_ci(100, by_index, options);
    CHECK(a.point == doctest::Approx(b.point).epsilon(1e-14));
    CHECK(a.lower == doctest::Approx(b.lower).epsilon(1e-14));
    CHECK(a.upper == doctest::Approx(b.upper).epsilon(1e-14));
}

TEST_CASE("ci width shrinks as the sample grows") {
    stats::BootstrapOptions options;
    options.replicates = 250;
    std::vector<double> median_widths;
    for (std::size_t n : {200u, 2000u, 20000u}) {
        std::vector<double> widths;
        for (int trial = 0; trial < 11; ++trial) {
            const Synthetic s =
                binormal_sample(n / 2, n / 2, 0.8, 1000 + trial * 13 + n);
            options.seed = 500 + trial;
            const auto ci =
                stats::bootstrap_ci(static_cast<std::uint32_t>(n),
                                    stats::make_auc_statistic(s.scores, s.labels), options);
            widths.push_back(ci.upper - ci.lower);
        }
        std::sort(widths.begin(), widths.end());
        median_widths.push_back(widths[widths.size() / 2]);
    }
    CHECK(median_widths[1] < median_widths[0]);
    CHECK(median_widths[2] < median_widths[1]);
}
