// Copyright 2026 shortcut-audit contributors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "shortcut_audit/errors.hpp"
#include "shortcut_audit/normal.hpp"

namespace bn = shortcut_audit::binormal;
namespace oracle = shortcut_audit::test_oracles;

TEST_CASE("normal_cdf matches the series/continued-fraction oracle") {
    for (double x = -8.0; x <= 8.0; x += 0.0625) {
        CHECK(bn::normal_cdf(x) == doctest::Approx(oracle::normal_cdf(x)).epsilon(1e-13));
    }
    CHECK(bn::normal_cdf(0.0) == 0.5);
}

TEST_CASE("normal_cdf is monotone nondecreasing") {
    double previous = 0.0;
    for (double x = -12.0; x <= 12.0; x += 0.01) {
        const double value = bn::normal_cdf(x);
        CHECK(value >= previous);
        previous = value;
    }
}

TEST_CASE("normal_quantile round-trips through the CDF to 1e-12") {
    CHECK(bn::normal_quantile(0.5) == 0.0);
    for (double p = 0.0005; p < 1.0; p += 0.0005) {
        CHECK(std::fabs(bn::normal_cdf(bn::normal_quantile(p)) - p) <= 1e-12);
    }
}

TEST_CASE("normal_quantile agrees with bisection on the oracle CDF") {
    // 0.5244005127080407 is the bisection value for p = 0.7.
    CHECK(bn::normal_quantile(0.7) == doctest::Approx(0.5244005127080407).epsilon(1e-12));
    for (double p : {0.001, 0.02425, 0.1, 0.3, 0.5, 0.7, 0.9, 0.97575, 0.999}) {
        CHECK(bn::normal_quantile(p) ==
              doctest::Approx(oracle::normal_quantile(p)).epsilon(1e-11));
    }
}

TEST_CASE("normal_quantile rejects the boundary") {
    CHECK_THROWS_AS(bn::normal_quantile(0.0), shortcut_audit::InvalidArgument);
    CHECK_THROWS_AS(bn::normal_quantile(1.0), shortcut_audit::InvalidArgument);
    CHECK_THROWS_AS(bn::normal_quantile(-0.1), shortcut_audit::InvalidArgument);
}
