// Copyright 2026 shortcut-audit contributors
// SPDX-License-Identifier: Apache-2.0
//
// Test-only reference implementations, independent of the library's code
// paths: an erf-series / continued-fraction normal CDF with a bisection
// quantile, and quadratic-time AUC / KS definitions.

#pragma once

#include <span>

namespace shortcut_audit::test_oracles {

/// Normal CDF via a Taylor erf series (|x| small) and the Gauss
/// continued fraction for the tail, evaluated in long double.
double normal_cdf(double x);

/// Quantile by bisection on the oracle CDF.
double normal_quantile(double p);

/// Pairwise AUC: mean over all (pos, neg) pairs of 1[pos>neg] + 0.5[=].
double pairwise_auc(std::span<const double> pos, std::span<const double> neg);

/// KS by evaluating both ECDFs at every sample point of either side.
double ecdf_scan_ks(std::span<const double> a, std::span<const double> b);

}  // namespace shortcut_audit::test_oracles
