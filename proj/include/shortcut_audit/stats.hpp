// Copyright 2026 shortcut-audit contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace shortcut_audit::stats {

/// Mann-Whitney AUC: P(pos > neg) + 0.5 P(pos = neg), computed by average
/// ranks in O(n log n); equals the pairwise definition exactly.
/// Empty side -> nullopt (never NaN).
std::optional<double> auc(std::span<const double> pos, std::span<const double> neg);

/// Two-sample Kolmogorov-Smirnov statistic sup_t |ECDF_a(t) - ECDF_b(t)|.
/// Empty side -> nullopt.
std::optional<double> ks_statistic(std::span<const double> a, std::span<const double> b);

struct Quartiles {
    double q1;
    double median;
    double q3;
};

/// Linear-interpolation quantiles at 0.25/0.5/0.75 (position p*(n-1)).
std::optional<Quartiles> quartiles(std::span<const double> values);

/// Interpolated quantile of an ascending-sorted non-empty range.
double quantile_sorted(std::span<const double> sorted, double p);

struct ConfidenceInterval {
    double point = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    int replicates = 0;
    double level = 0.0;
    long discarded_degenerate = 0;
};

struct BootstrapOptions {
    int replicates = 10000;
    double level = 0.95;
    std::uint64_t seed = 0;
    /// Resample within strata (class labels) instead of the whole set.
    bool stratified = false;
    /// Error out when any single replicate redraws this many times.
    long max_redraw_factor = 100;
};

/// A statistic evaluated on a with-replacement resample, given as indices
/// into the caller's records. Returns nullopt when undefined on that
/// resample (e.g. a class vanished). Must be const-callable and
/// thread-safe; replicates may be evaluated concurrently.
using IndexStatistic = std::function<std::optional<double>(std::span<const std::uint32_t>)>;

/// Percentile bootstrap over `n_items` records resampled at full size.
/// Replicate r draws from the stream (seed, r); degenerate replicates are
/// discarded, redrawn from substreams and counted. Results are
/// bit-identical no matter how replicates are scheduled.
///
/// `strata` (one id per item, used only when options.stratified) fixes
/// per-stratum counts in every resample.
///
/// Throws ValidationError if the statistic is undefined on the full set
/// or the redraw budget is exhausted.
ConfidenceInterval bootstrap_ci(std::uint32_t n_items, const IndexStatistic& statistic,
                                const BootstrapOptions& options,
                                std::span<const std::uint32_t> strata = {});

/// AUC-of-a-resample statistic over (score, is_positive) records, O(n)
/// per replicate after one shared ranking pass.
IndexStatistic make_auc_statistic(std::span<const double> scores,
                                  std::span<const std::uint8_t> is_positive);

/// Adapter for statistics written against record spans rather than index
/// spans: materializes each resample. Convenient, not fast.
template <typename Record, typename Fn>
IndexStatistic make_record_statistic(std::span<const Record> records, Fn fn) {
    return [records, fn = std::move(fn)](std::span<const std::uint32_t> picks)
               -> std::optional<double> {
        thread_local std::vector<Record> resample;
        resample.clear();
        resample.reserve(picks.size());
        for (std::uint32_t i : picks) resample.push_back(records[i]);
        return fn(std::span<const Record>(resample));
    };
}

}  // namespace shortcut_audit::stats
