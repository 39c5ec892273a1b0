// Copyright 2026 shortcut-audit contributors
// SPDX-License-Identifier: Apache-2.0

#include "oracles.hpp"

#include <cmath>
#include <cstddef>

namespace shortcut_audit::test_oracles {

namespace {

constexpr long double kTwoOverSqrtPi = 1.1283791670955125738961589031215L;
constexpr long double kSqrt2 = 1.4142135623730950488016887242097L;

// erf by its alternating Taylor series; safe for |x| <= 2 in long double.
long double erf_series(long double x) {
    long double term = x;           // x^(2n+1) / n!
    long double sum = x;            // term / (2n+1), summed
    for (int n = 1; n < 300; ++n) {
        term *= -x * x / n;
        const long double contribution = term / (2 * n + 1);
        sum += contribution;
        if (std::fabs(contribution) < 1e-25L * std::fabs(sum)) break;
    }
    return kTwoOverSqrtPi * sum;
}

// Gauss continued fraction for the upper tail, x >= 2:
// sqrt(pi) e^{x^2} erfc(x) = 1/(x + 1/(2x + 2/(x + 3/(2x + ...)))).
long double erfc_tail(long double x) {
    constexpr long double kInvSqrtPi = 0.5641895835477562869480794515608L;
    const int depth = 200;
    long double f = (depth % 2 == 1) ? 2 * x : x;
    for (int i = depth - 1; i >= 1; --i) {
        f = ((i % 2 == 1) ? 2 * x : x) + (i + 1) / f;
    }
    const long double cf = x + 1 / f;
    return kInvSqrtPi * std::exp(-x * x) / cf;
}

long double erfc_nonnegative(long double x) {
    return x <= 2.0L ? 1.0L - erf_series(x) : erfc_tail(x);
}

}  // namespace

double normal_cdf(double x) {
    const long double z = static_cast<long double>(std::fabs(x)) / kSqrt2;
    const long double tail = 0.5L * erfc_nonnegative(z);
    return static_cast<double>(x >= 0 ? 1.0L - tail : tail);
}

double normal_quantile(double p) {
    long double lo = -40.0L;
    long double hi = 40.0L;
    for (int i = 0; i < 200; ++i) {
        const long double mid = (lo + hi) / 2;
        if (normal_cdf(static_cast<double>(mid)) < p) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return static_cast<double>((lo + hi) / 2);
}

double pairwise_auc(std::span<const double> pos, std::span<const double> neg) {
    double wins = 0.0;
    for (double p : pos) {
        for (double n : neg) {
            if (p > n) {
                wins += 1.0;
            } else if (p == n) {
                wins += 0.5;
            }
        }
    }
    return wins / (static_cast<double>(pos.size()) * static_cast<double>(neg.size()));
}

double ecdf_scan_ks(std::span<const double> a, std::span<const double> b) {
    auto ecdf = [](std::span<const double> sample, double t) {
        std::size_t count = 0;
        for (double v : sample) count += v <= t;
        return static_cast<double>(count) / static_cast<double>(sample.size());
    };
    double d = 0.0;
    for (std::span<const double> side : {a, b}) {
        for (double t : side) {
            d = std::max(d, std::fabs(ecdf(a, t) - ecdf(b, t)));
        }
    }
    return d;
}

}  // namespace shortcut_audit::test_oracles
