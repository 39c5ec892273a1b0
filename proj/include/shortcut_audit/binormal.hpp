// Copyright 2026 shortcut-audit contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "shortcut_audit/normal.hpp"
#include "shortcut_audit/rng.hpp"

namespace shortcut_audit::binormal {

/// Class separation a with per-set AUC = Phi(a / sqrt(2)):
/// a = sqrt(2) * Phi^-1(target). Requires target in (0,1).
double separation_from_auc(double target_auc);

/// AUC of N(mu1, sigma1^2) scores against N(mu0, sigma0^2) scores:
/// Phi((mu1 - mu0) / sqrt(sigma1^2 + sigma0^2)).
double analytic_auc(double mu0, double sigma0, double mu1, double sigma1);

/// Probability that a negative (p0) or positive (p1) example comes from
/// the biased set.
struct SamplingMix {
    double p0 = 0.0;
    double p1 = 0.0;
};

/// Closed-form difference between combined and target AUC:
///   [Phi((a+m)/sqrt2) - Phi(a/sqrt2)] (1-p0) p1
/// + [Phi((a-m)/sqrt2) - Phi(a/sqrt2)] p0 (1-p1),  a = separation(target).
double combined_auc_delta(double target_auc, double m, SamplingMix mix);

/// Two-set score model. Set 0: negatives N(0,1), positives N(a,1).
/// Set 1 adds bias m to both class means.
struct BinormalSpec {
    double target_auc = 0.7;
    double bias_m = 0.0;
    double prevalence_set0 = 0.2;
    double prevalence_set1 = 0.8;
    std::uint32_t n_set0 = 0;
    std::uint32_t n_set1 = 0;
    std::uint64_t seed = 0;

    double separation_a() const { return separation_from_auc(target_auc); }
    /// Throws InvalidArgument when out of range or a class count rounds to 0.
    void validate() const;
};

struct CombinedSample {
    std::vector<double> pos;
    std::vector<double> neg;
    std::vector<std::uint8_t> pos_set;  // 0 or 1 per score
    std::vector<std::uint8_t> neg_set;

    /// Realized mix from the integer counts actually sampled.
    SamplingMix realized_mix() const;
};

/// Draws both sets; per-set class counts are the prevalences rounded to
/// the nearest integer (each class >= 1 or the spec is invalid).
/// Deterministic given spec.seed.
CombinedSample sample_combined(const BinormalSpec& spec);
CombinedSample sample_combined(const BinormalSpec& spec, Philox4x64& rng);

struct Linspace {
    double lo = 0.0;
    double hi = 1.0;
    int count = 2;

    double at(int i) const {
        return count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (count - 1);
    }
    std::vector<double> values() const;
};

struct SweepCell {
    double mean_delta = 0.0;
    double std_delta = 0.0;
    int repetitions = 0;
};

/// One plane of a sweep: mean (combined - target) AUC per cell, with
/// cells stored axis1-major. axis2 is the scan axis for zero crossings.
struct SweepGrid {
    std::string plane_name;   // "target_auc" or "m"
    double plane_value = 0.0;
    std::string axis1_name;   // "m" or "p0"
    std::vector<double> axis1;
    std::string axis2_name;   // "prevalence_set1" or "p1"
    std::vector<double> axis2;
    std::vector<SweepCell> cells;

    const SweepCell& cell(std::size_t i1, std::size_t i2) const {
        return cells[i1 * axis2.size() + i2];
    }
    SweepCell& cell(std::size_t i1, std::size_t i2) {
        return cells[i1 * axis2.size() + i2];
    }
};

struct SweepConfig {
    int repetitions = 100;
    std::uint32_t size_lo = 10000;
    std::uint32_t size_hi = 40000;
    std::uint64_t seed = 0;
};

/// Fig. 5b-style sweep: Set 0 fixed at 20% prevalence and zero bias; Set 1
/// prevalence and bias vary along the axes; both set sizes are drawn
/// uniformly from [size_lo, size_hi] per repetition. One grid per target.
std::vector<SweepGrid> run_prevalence_bias_sweep(std::span<const double> target_aucs,
                                                 const Linspace& prevalence_axis,
                                                 const Linspace& bias_axis,
                                                 const SweepConfig& config);

/// Mix-space sweep: per-class counts are drawn uniformly from
/// [size_lo, size_hi] and each case picks its set by a Bernoulli draw
/// (p0 for negatives, p1 for positives). One grid per m value.
std::vector<SweepGrid> run_p0p1_sweep(double target_auc, std::span<const double> m_values,
                                      const Linspace& p_axis, const SweepConfig& config);

struct ZeroCrossing {
    double plane_value = 0.0;
    double axis1_value = 0.0;
    double axis2_value = 0.0;  // interpolated crossing position
};

/// Sign changes of mean delta along axis2, one scan per axis1 value,
/// linearly interpolated between adjacent cell centers. Rows without a
/// sign change contribute nothing.
std::vector<ZeroCrossing> find_zero_crossings(const SweepGrid& grid);

}  // namespace shortcut_audit::binormal
