// Copyright 2026 shortcut-audit contributors
// SPDX-License-Identifier: Apache-2.0

#include "shortcut_audit/binormal.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "shortcut_audit/errors.hpp"
#include "shortcut_audit/parallel.hpp"
#include "shortcut_audit/stats.hpp"

namespace shortcut_audit::binormal {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;

std::uint32_t rounded_count(double fraction, std::uint32_t total) {
    return static_cast<std::uint32_t>(std::llround(fraction * static_cast<double>(total)));
}

double mean_of(std::span<const double> values) {
    double total = 0.0;
    for (double v : values) total += v;
    return total / static_cast<double>(values.size());
}

double std_of(std::span<const double> values, double mean) {
    if (values.size() < 2) return 0.0;
    double total = 0.0;
    for (double v : values) total += (v - mean) * (v - mean);
    return std::sqrt(total / static_cast<double>(values.size() - 1));
}

}  // namespace

double separation_from_auc(double target_auc) {
    if (!(target_auc > 0.0 && target_auc < 1.0)) {
        throw InvalidArgument("separation_from_auc: target AUC must lie inside (0,1), got " +
                              std::to_string(target_auc));
    }
    return kSqrt2 * normal_quantile(target_auc);
}

double analytic_auc(double mu0, double sigma0, double mu1, double sigma1) {
    if (!(sigma0 > 0.0) || !(sigma1 > 0.0)) {
        throw InvalidArgument("analytic_auc: sigmas must be positive");
    }
    return normal_cdf((mu1 - mu0) / std::sqrt(sigma0 * sigma0 + sigma1 * sigma1));
}

double combined_auc_delta(double target_auc, double m, SamplingMix mix) {
    const double a = separation_from_auc(target_auc);
    const double base = normal_cdf(a / kSqrt2);
    const double aligned_term = normal_cdf((a + m) / kSqrt2) - base;
    const double conflicting_term = normal_cdf((a - m) / kSqrt2) - base;
    return aligned_term * (1.0 - mix.p0) * mix.p1 + conflicting_term * mix.p0 * (1.0 - mix.p1);
}

void BinormalSpec::validate() const {
    if (!(target_auc > 0.0 && target_auc < 1.0)) {
        throw InvalidArgument("BinormalSpec: target AUC must lie inside (0,1)");
    }
    if (!(prevalence_set0 > 0.0 && prevalence_set0 < 1.0) ||
        !(prevalence_set1 > 0.0 && prevalence_set1 < 1.0)) {
        throw InvalidArgument("BinormalSpec: prevalences must lie strictly inside (0,1)");
    }
    if (n_set0 == 0 || n_set1 == 0) {
        throw InvalidArgument("BinormalSpec: set sizes must be positive");
    }
    const std::uint32_t sizes[2] = {n_set0, n_set1};
    const double prevalences[2] = {prevalence_set0, prevalence_set1};
    for (int set = 0; set < 2; ++set) {
        const std::uint32_t positives = rounded_count(prevalences[set], sizes[set]);
        if (positives == 0 || positives >= sizes[set]) {
            throw InvalidArgument("BinormalSpec: set " + std::to_string(set) + " prevalence " +
                                  std::to_string(prevalences[set]) + " rounds to an empty class");
        }
    }
}

SamplingMix CombinedSample::realized_mix() const {
    std::uint64_t pos1 = 0;
    for (std::uint8_t s : pos_set) pos1 += s;
    std::uint64_t neg1 = 0;
    for (std::uint8_t s : neg_set) neg1 += s;
    return {static_cast<double>(neg1) / static_cast<double>(neg_set.size()),
            static_cast<double>(pos1) / static_cast<double>(pos_set.size())};
}

CombinedSample sample_combined(const BinormalSpec& spec, Philox4x64& rng) {
    spec.validate();
    const double a = spec.separation_a();
    CombinedSample sample;

    const std::uint32_t sizes[2] = {spec.n_set0, spec.n_set1};
    const double prevalences[2] = {spec.prevalence_set0, spec.prevalence_set1};
    const double biases[2] = {0.0, spec.bias_m};
    for (int set = 0; set < 2; ++set) {
        const std::uint32_t positives = rounded_count(prevalences[set], sizes[set]);
        const std::uint32_t negatives = sizes[set] - positives;
        for (std::uint32_t i = 0; i < positives; ++i) {
            sample.pos.push_back(a + biases[set] + rng.next_normal());
            sample.pos_set.push_back(static_cast<std::uint8_t>(set));
        }
        for (std::uint32_t i = 0; i < negatives; ++i) {
            sample.neg.push_back(biases[set] + rng.next_normal());
            sample.neg_set.push_back(static_cast<std::uint8_t>(set));
        }
    }
    return sample;
}

CombinedSample sample_combined(const BinormalSpec& spec) {
    RngStream rng(spec.seed, 0, 0, rng_domain::kBinormal);
    return sample_combined(spec, rng);
}

std::vector<double> Linspace::values() const {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) out.push_back(at(i));
    return out;
}

namespace {

double empirical_delta(const CombinedSample& sample, double target) {
    const auto combined = stats::auc(sample.pos, sample.neg);
    return combined.value() - target;
}

/// Runs `repetitions` sims per cell in parallel; per-(cell, repetition)
/// streams keep the result independent of scheduling.
void fill_grid(SweepGrid& grid, int repetitions,
               const std::function<double(std::size_t i1, std::size_t i2, int rep,
                                          Philox4x64& rng)>& simulate,
               std::uint64_t seed, std::uint64_t plane_index) {
    const std::size_t n1 = grid.axis1.size();
    const std::size_t n2 = grid.axis2.size();
    const std::size_t cells = n1 * n2;
    grid.cells.assign(cells, SweepCell{});
    std::vector<double> deltas(cells * static_cast<std::size_t>(repetitions));

    parallel_for(cells * static_cast<std::size_t>(repetitions),
                 [&](std::size_t begin, std::size_t end) {
                     for (std::size_t task = begin; task < end; ++task) {
                         const std::size_t cell = task / repetitions;
                         const int rep = static_cast<int>(task % repetitions);
                         const std::size_t i1 = cell / n2;
                         const std::size_t i2 = cell % n2;
                         RngStream rng(seed, (plane_index << 32) | cell,
                                       static_cast<std::uint64_t>(rep), rng_domain::kSweep);
                         deltas[task] = simulate(i1, i2, rep, rng);
                     }
                 });

    for (std::size_t cell = 0; cell < cells; ++cell) {
        std::span<const double> reps(deltas.data() + cell * repetitions,
                                     static_cast<std::size_t>(repetitions));
        const double mean = mean_of(reps);
        grid.cells[cell].mean_delta = mean;
        grid.cells[cell].std_delta = std_of(reps, mean);
        grid.cells[cell].repetitions = repetitions;
    }
}

}  // namespace

std::vector<SweepGrid> run_prevalence_bias_sweep(std::span<const double> target_aucs,
                                                 const Linspace& prevalence_axis,
                                                 const Linspace& bias_axis,
                                                 const SweepConfig& config) {
    if (target_aucs.empty() || prevalence_axis.count < 1 || bias_axis.count < 1) {
        throw InvalidArgument("run_prevalence_bias_sweep: empty axis");
    }
    if (config.repetitions < 1) {
        throw InvalidArgument("run_prevalence_bias_sweep: repetitions must be >= 1");
    }
    if (config.size_lo == 0 || config.size_hi < config.size_lo) {
        throw InvalidArgument("run_prevalence_bias_sweep: bad size range");
    }
    std::vector<SweepGrid> grids;
    for (std::size_t t = 0; t < target_aucs.size(); ++t) {
        const double target = target_aucs[t];
        SweepGrid grid;
        grid.plane_name = "target_auc";
        grid.plane_value = target;
        grid.axis1_name = "m";
        grid.axis1 = bias_axis.values();
        grid.axis2_name = "prevalence_set1";
        grid.axis2 = prevalence_axis.values();
        fill_grid(
            grid, config.repetitions,
            [&](std::size_t i1, std::size_t i2, int, Philox4x64& rng) {
                BinormalSpec spec;
                spec.target_auc = target;
                spec.bias_m = grid.axis1[i1];
                spec.prevalence_set0 = 0.2;  // unaugmented Set 0
                spec.prevalence_set1 = grid.axis2[i2];
                const std::uint64_t span = config.size_hi - config.size_lo + 1;
                spec.n_set0 = config.size_lo + static_cast<std::uint32_t>(rng.next_below(span));
                spec.n_set1 = config.size_lo + static_cast<std::uint32_t>(rng.next_below(span));
                const CombinedSample sample = sample_combined(spec, rng);
                return empirical_delta(sample, target);
            },
            config.seed, t);
        grids.push_back(std::move(grid));
    }
    return grids;
}

std::vector<SweepGrid> run_p0p1_sweep(double target_auc, std::span<const double> m_values,
                                      const Linspace& p_axis, const SweepConfig& config) {
    if (m_values.empty() || p_axis.count < 1) {
        throw InvalidArgument("run_p0p1_sweep: empty axis");
    }
    if (config.repetitions < 1) {
        throw InvalidArgument("run_p0p1_sweep: repetitions must be >= 1");
    }
    if (config.size_lo == 0 || config.size_hi < config.size_lo) {
        throw InvalidArgument("run_p0p1_sweep: bad size range");
    }
    const double a = separation_from_auc(target_auc);
    std::vector<SweepGrid> grids;
    for (std::size_t mi = 0; mi < m_values.size(); ++mi) {
        const double m = m_values[mi];
        SweepGrid grid;
        grid.plane_name = "m";
        grid.plane_value = m;
        grid.axis1_name = "p0";
        grid.axis1 = p_axis.values();
        grid.axis2_name = "p1";
        grid.axis2 = p_axis.values();
        fill_grid(
            grid, config.repetitions,
            [&, a, m](std::size_t i1, std::size_t i2, int, Philox4x64& rng) {
                const double p0 = grid.axis1[i1];
                const double p1 = grid.axis2[i2];
                const std::uint64_t span = config.size_hi - config.size_lo + 1;
                const std::uint32_t n_pos =
                    config.size_lo + static_cast<std::uint32_t>(rng.next_below(span));
                const std::uint32_t n_neg =
                    config.size_lo + static_cast<std::uint32_t>(rng.next_below(span));
                std::vector<double> pos(n_pos);
                std::vector<double> neg(n_neg);
                // Each case picks its set with a Bernoulli draw.
                for (std::uint32_t i = 0; i < n_pos; ++i) {
                    const bool biased = rng.next_double() < p1;
                    pos[i] = a + (biased ? m : 0.0) + rng.next_normal();
                }
                for (std::uint32_t i = 0; i < n_neg; ++i) {
                    const bool biased = rng.next_double() < p0;
                    neg[i] = (biased ? m : 0.0) + rng.next_normal();
                }
                return stats::auc(pos, neg).value() - target_auc;
            },
            config.seed, mi);
        grids.push_back(std::move(grid));
    }
    return grids;
}

std::vector<ZeroCrossing> find_zero_crossings(const SweepGrid& grid) {
    std::vector<ZeroCrossing> crossings;
    for (std::size_t i1 = 0; i1 < grid.axis1.size(); ++i1) {
        for (std::size_t i2 = 0; i2 < grid.axis2.size(); ++i2) {
            const double here = grid.cell(i1, i2).mean_delta;
            if (here == 0.0) {
                crossings.push_back({grid.plane_value, grid.axis1[i1], grid.axis2[i2]});
                continue;
            }
            if (i2 + 1 == grid.axis2.size()) continue;
            const double next = grid.cell(i1, i2 + 1).mean_delta;
            if (here * next < 0.0) {
                const double x0 = grid.axis2[i2];
                const double x1 = grid.axis2[i2 + 1];
                crossings.push_back(
                    {grid.plane_value, grid.axis1[i1], x0 + (0.0 - here) * (x1 - x0) / (next - here)});
            }
        }
    }
    return crossings;
}

}  // namespace shortcut_audit::binormal
