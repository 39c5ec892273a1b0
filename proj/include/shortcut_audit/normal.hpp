// Copyright 2026 shortcut-audit contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace shortcut_audit::binormal {

/// Standard normal CDF. Monotone, |error| well below 1e-12.
double normal_cdf(double x);

/// Standard normal quantile for p strictly inside (0,1).
/// Rational initial guess refined by one Newton step;
/// normal_cdf(normal_quantile(p)) round-trips to 1e-12.
/// Throws InvalidArgument at or outside {0,1}.
double normal_quantile(double p);

/// Standard normal density.
double normal_pdf(double x);

}  // namespace shortcut_audit::binormal
