// Copyright 2026 shortcut-audit contributors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "shortcut_audit/rng.hpp"

using shortcut_audit::Philox4x64;
using shortcut_audit::RngStream;

// Known-answer blocks generated with numpy.random.Philox (philox4x64-10).
TEST_CASE("philox matches reference blocks") {
    SUBCASE("key 0, counter 0 and 1") {
        Philox4x64 rng(0, 0);
        CHECK(rng.next_u64() == 0x02f4ba6408e4d89bULL);
        CHECK(rng.next_u64() == 0x3dd62b0b9ca8c5b2ULL);
        CHECK(rng.next_u64() == 0x1c8667a55d902e79ULL);
        CHECK(rng.next_u64() == 0x907d7a052fd5b4dcULL);
        CHECK(rng.next_u64() == 0x809bf322883987c3ULL);
        CHECK(rng.next_u64() == 0x471128b9e807f7ddULL);
        CHECK(rng.next_u64() == 0xf250ba0dbec065b7ULL);
        CHECK(rng.next_u64() == 0xfc6ed66767a457bcULL);
    }
    SUBCASE("nonzero key") {
        Philox4x64 rng(0xdeadbeef12345678ULL, 0);
        CHECK(rng.next_u64() == 0x01e08b9944fc9ce9ULL);
        CHECK(rng.next_u64() == 0x4dd35999ef97e4c4ULL);
        CHECK(rng.next_u64() == 0xfb4385fe6262b926ULL);
        CHECK(rng.next_u64() == 0xe8ca5d2e2ace8c50ULL);
    }
    SUBCASE("explicit counter and two-word key") {
        const auto block = Philox4x64::block({1, 2, 3, 4},
                                             {0x243f6a8885a308d3ULL, 0x13198a2e03707344ULL});
        CHECK(block[0] == 0x5d2406e9b0e77f60ULL);
        CHECK(block[1] == 0xf0ec6e0c16437102ULL);
        CHECK(block[2] == 0x9e3103552b514809ULL);
        CHECK(block[3] == 0x0e39b8091e5dc4d4ULL);
    }
}

TEST_CASE("streams and substreams are distinct and reproducible") {
    RngStream a(42, 0);
    RngStream a_again(42, 0);
    RngStream b(42, 1);
    RngStream c(42, 0, 1);
    RngStream d(42, 0, 0, 7);
    const std::uint64_t va = a.next_u64();
    CHECK(va == a_again.next_u64());
    std::set<std::uint64_t> firsts{va, b.next_u64(), c.next_u64(), d.next_u64()};
    CHECK(firsts.size() == 4);
}

TEST_CASE("uniform doubles stay inside their ranges") {
    RngStream rng(7, 0);
    double lo = 1.0;
    double hi = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const double closed = rng.next_double();
        const double open = rng.next_open_double();
        CHECK(closed >= 0.0);
        CHECK(closed < 1.0);
        CHECK(open > 0.0);
        CHECK(open < 1.0);
        lo = std::min(lo, open);
        hi = std::max(hi, open);
    }
    CHECK(lo < 0.01);
    CHECK(hi > 0.99);
}

TEST_CASE("next_below covers [0, bound) roughly uniformly") {
    RngStream rng(3, 5);
    std::vector<int> counts(10, 0);
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
        const std::uint64_t v = rng.next_below(10);
        REQUIRE(v < 10);
        ++counts[v];
    }
    for (int c : counts) {
        CHECK(c > draws / 10 - 600);  // ~6 sigma
        CHECK(c < draws / 10 + 600);
    }
}

TEST_CASE("normal draws have the right first moments") {
    RngStream rng(11, 0);
    const int n = 200000;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = rng.next_normal();
        sum += x;
        sum_sq += x * x;
    }
    const double mean = sum / n;
    const double variance = sum_sq / n - mean * mean;
    CHECK(std::fabs(mean) < 0.01);
    CHECK(std::fabs(variance - 1.0) < 0.02);
}
