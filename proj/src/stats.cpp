// Copyright 2026 shortcut-audit contributors
// SPDX-License-Identifier: Apache-2.0

#include "shortcut_audit/stats.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <memory>
#include <numeric>

#include "shortcut_audit/errors.hpp"
#include "shortcut_audit/parallel.hpp"
#include "shortcut_audit/rng.hpp"

namespace shortcut_audit::stats {

std::optional<double> auc(std::span<const double> pos, std::span<const double> neg) {
    if (pos.empty() || neg.empty()) return std::nullopt;
    const std::size_t n1 = pos.size();
    const std::size_t n0 = neg.size();
    const std::size_t n = n1 + n0;

    // (score, is_positive) sorted by score; ties get their average rank,
    // which keeps the result identical to the pairwise definition.
    std::vector<std::pair<double, std::uint8_t>> all;
    all.reserve(n);
    for (double s : pos) all.emplace_back(s, 1);
    for (double s : neg) all.emplace_back(s, 0);
    std::sort(all.begin(), all.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    double positive_rank_sum = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && all[j + 1].first == all[i].first) ++j;
        const double average_rank = static_cast<double>(i + j + 2) / 2.0;  // 1-based
        std::size_t positives = 0;
        for (std::size_t k = i; k <= j; ++k) positives += all[k].second;
        positive_rank_sum += static_cast<double>(positives) * average_rank;
        i = j + 1;
    }
    const double u = positive_rank_sum -
                     static_cast<double>(n1) * (static_cast<double>(n1) + 1.0) / 2.0;
    return u / (static_cast<double>(n1) * static_cast<double>(n0));
}

std::optional<double> ks_statistic(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) return std::nullopt;
    std::vector<double> sa(a.begin(), a.end());
    std::vector<double> sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());

    const double na = static_cast<double>(sa.size());
    const double nb = static_cast<double>(sb.size());
    std::size_t ia = 0;
    std::size_t ib = 0;
    double d = 0.0;
    while (ia < sa.size() || ib < sb.size()) {
        const double t = (ib == sb.size() || (ia < sa.size() && sa[ia] <= sb[ib])) ? sa[ia]
                                                                                   : sb[ib];
        while (ia < sa.size() && sa[ia] == t) ++ia;
        while (ib < sb.size() && sb[ib] == t) ++ib;
        d = std::max(d, std::abs(static_cast<double>(ia) / na - static_cast<double>(ib) / nb));
    }
    return d;
}

double quantile_sorted(std::span<const double> sorted, double p) {
    const std::size_t n = sorted.size();
    if (n == 1) return sorted[0];
    const double position = p * static_cast<double>(n - 1);
    const std::size_t lo = static_cast<std::size_t>(position);
    const std::size_t hi = std::min(lo + 1, n - 1);
    const double fraction = position - static_cast<double>(lo);
    return sorted[lo] + fraction * (sorted[hi] - sorted[lo]);
}

std::optional<Quartiles> quartiles(std::span<const double> values) {
    if (values.empty()) return std::nullopt;
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    return Quartiles{quantile_sorted(sorted, 0.25), quantile_sorted(sorted, 0.5),
                     quantile_sorted(sorted, 0.75)};
}

namespace {

void draw_unstratified(Philox4x64& rng, std::uint32_t n, std::vector<std::uint32_t>& picks) {
    picks.resize(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        picks[i] = static_cast<std::uint32_t>(rng.next_below(n));
    }
}

void draw_stratified(Philox4x64& rng, const std::vector<std::vector<std::uint32_t>>& groups,
                     std::vector<std::uint32_t>& picks) {
    picks.clear();
    for (const auto& group : groups) {
        const std::uint64_t size = group.size();
        for (std::uint64_t i = 0; i < size; ++i) {
            picks.push_back(group[rng.next_below(size)]);
        }
    }
}

}  // namespace

ConfidenceInterval bootstrap_ci(std::uint32_t n_items, const IndexStatistic& statistic,
                                const BootstrapOptions& options,
                                std::span<const std::uint32_t> strata) {
    if (n_items == 0) throw ValidationError("bootstrap_ci: empty input set");
    if (options.replicates < 1) throw InvalidArgument("bootstrap_ci: replicates must be >= 1");
    if (!(options.level > 0.0 && options.level < 1.0)) {
        throw InvalidArgument("bootstrap_ci: level must lie inside (0,1)");
    }
    if (options.stratified && strata.size() != n_items) {
        throw InvalidArgument("bootstrap_ci: stratified resampling needs one stratum per item");
    }

    std::vector<std::uint32_t> identity(n_items);
    std::iota(identity.begin(), identity.end(), 0);
    const auto point = statistic(identity);
    if (!point) {
        throw ValidationError("bootstrap_ci: statistic undefined on the full set");
    }

    std::vector<std::vector<std::uint32_t>> groups;
    if (options.stratified) {
        for (std::uint32_t i = 0; i < n_items; ++i) {
            const std::uint32_t id = strata[i];
            if (groups.size() <= id) groups.resize(id + 1);
            groups[id].push_back(i);
        }
    }

    const int replicates = options.replicates;
    std::vector<double> values(static_cast<std::size_t>(replicates));
    std::atomic<long> discarded{0};
    std::atomic<bool> exhausted{false};

    parallel_for(static_cast<std::size_t>(replicates), [&](std::size_t begin, std::size_t end) {
        std::vector<std::uint32_t> picks;
        picks.reserve(n_items);
        for (std::size_t r = begin; r < end; ++r) {
            long attempt = 0;
            for (;; ++attempt) {
                if (attempt > options.max_redraw_factor) {
                    exhausted.store(true, std::memory_order_relaxed);
                    break;
                }
                RngStream rng(options.seed, r, static_cast<std::uint64_t>(attempt),
                              rng_domain::kBootstrap);
                if (options.stratified) {
                    draw_stratified(rng, groups, picks);
                } else {
                    draw_unstratified(rng, n_items, picks);
                }
                if (auto value = statistic(picks)) {
                    values[r] = *value;
                    break;
                }
                discarded.fetch_add(1, std::memory_order_relaxed);
            }
        }
    });
    if (exhausted.load()) {
        throw ValidationError("bootstrap_ci: a replicate stayed degenerate after " +
                              std::to_string(options.max_redraw_factor) + " redraws");
    }

    std::sort(values.begin(), values.end());
    const double alpha = (1.0 - options.level) / 2.0;
    ConfidenceInterval ci;
    ci.point = *point;
    ci.lower = quantile_sorted(values, alpha);
    ci.upper = quantile_sorted(values, 1.0 - alpha);
    ci.replicates = replicates;
    ci.level = options.level;
    ci.discarded_degenerate = discarded.load();
    return ci;
}

namespace {

/// Scores reduced to tie-group ranks once, so each resample's AUC costs
/// O(n + V) counting instead of a sort.
struct RankedScores {
    std::vector<std::uint32_t> value_rank;  // per record, 0..n_values-1
    std::vector<std::uint8_t> is_positive;
    std::uint32_t n_values = 0;
};

}  // namespace

IndexStatistic make_auc_statistic(std::span<const double> scores,
                                  std::span<const std::uint8_t> is_positive) {
    if (scores.size() != is_positive.size()) {
        throw InvalidArgument("make_auc_statistic: scores/labels size mismatch");
    }
    auto state = std::make_shared<RankedScores>();
    const std::size_t n = scores.size();
    state->is_positive.assign(is_positive.begin(), is_positive.end());
    state->value_rank.resize(n);

    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&scores](std::uint32_t a, std::uint32_t b) { return scores[a] < scores[b]; });
    std::uint32_t rank = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0 && scores[order[i]] != scores[order[i - 1]]) ++rank;
        state->value_rank[order[i]] = rank;
    }
    state->n_values = n == 0 ? 0 : rank + 1;

    return [state](std::span<const std::uint32_t> picks) -> std::optional<double> {
        thread_local std::vector<std::uint32_t> pos_count;
        thread_local std::vector<std::uint32_t> neg_count;
        pos_count.assign(state->n_values, 0);
        neg_count.assign(state->n_values, 0);
        std::uint64_t positives = 0;
        for (std::uint32_t index : picks) {
            const std::uint32_t v = state->value_rank[index];
            if (state->is_positive[index]) {
                ++pos_count[v];
                ++positives;
            } else {
                ++neg_count[v];
            }
        }
        const std::uint64_t negatives = picks.size() - positives;
        if (positives == 0 || negatives == 0) return std::nullopt;
        double numerator = 0.0;
        std::uint64_t negatives_below = 0;
        for (std::uint32_t v = 0; v < state->n_values; ++v) {
            numerator += static_cast<double>(pos_count[v]) *
                         (static_cast<double>(negatives_below) + 0.5 * neg_count[v]);
            negatives_below += neg_count[v];
        }
        return numerator / (static_cast<double>(positives) * static_cast<double>(negatives));
    };
}

}  // namespace shortcut_audit::stats
