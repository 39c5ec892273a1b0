// Copyright 2026 shortcut-audit contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "shortcut_audit/records.hpp"
#include "shortcut_audit/stats.hpp"

namespace shortcut_audit::audit {

// All operations here expect labeled exams only (no Unknown); callers go
// through ingest::labeled_only first. Scores are exam-level.

struct PrevalenceRow {
    std::string value;
    double prevalence = 0.0;  // positive_count / total_count exactly
    long positive_count = 0;
    long total_count = 0;
};

struct PrevalenceTable {
    std::string attribute;
    std::vector<PrevalenceRow> rows;            // only values with >= 1 exam
    std::vector<std::string> empty_values;      // declared but absent
};

PrevalenceTable prevalence_table(std::span<const ExamRecord> exams,
                                 const AttributeSchema& schema, const std::string& attribute);

struct ClassSummary {
    long count = 0;
    std::optional<stats::Quartiles> quartiles;  // absent when the cell is empty
};

struct ValueDistribution {
    std::string value;
    ClassSummary positives;
    ClassSummary negatives;
};

struct KsEntry {
    std::string value_a;
    std::string value_b;
    std::optional<double> positives_ks;  // absent when either cell is empty
    std::optional<double> negatives_ks;
};

/// Score-distribution comparison across attribute values: per-(value,
/// class) quartiles plus the KS statistic for every unordered value pair,
/// computed separately per class.
struct DistributionComparison {
    std::string attribute;
    std::vector<ValueDistribution> per_value;
    std::vector<KsEntry> pairwise_ks;
};

DistributionComparison distribution_comparison(std::span<const ExamRecord> exams,
                                               const AttributeSchema& schema,
                                               const std::string& attribute);

/// The high-prevalence value used for two-sided splits: the schema's
/// declared one, else the value with the larger empirical prevalence.
std::string default_high_value(std::span<const ExamRecord> exams,
                               const AttributeSchema& schema, const std::string& attribute);

/// Bias-aligned subset: positives with value == high_value plus negatives
/// with value != high_value. Conflicting subset: the complement. The two
/// partition the labeled exams.
std::pair<std::vector<ExamRecord>, std::vector<ExamRecord>> bias_subsets(
    std::span<const ExamRecord> exams, const AttributeSchema& schema,
    const std::string& attribute, const std::string& high_value);

struct BiasGapReport {
    std::string attribute;
    std::string high_value;
    std::optional<stats::ConfidenceInterval> aligned_auc;      // absent: side degenerate
    std::optional<stats::ConfidenceInterval> conflicting_auc;
    std::optional<double> gap;  // aligned point - conflicting point
};

BiasGapReport bias_gap(std::span<const ExamRecord> exams, const AttributeSchema& schema,
                       const std::string& attribute, const std::string& high_value,
                       const stats::BootstrapOptions& bootstrap);

struct StratumAuc {
    std::string value;
    long positives = 0;
    long negatives = 0;
    std::optional<stats::ConfidenceInterval> auc;  // absent when a class is missing
};

struct StratifiedAucReport {
    std::string attribute;
    std::vector<StratumAuc> strata;
    stats::ConfidenceInterval combined;
    /// combined point > max over the defined stratum points, exactly; the
    /// CI fields convey the uncertainty.
    bool paradox_flag = false;
};

/// Requires >= 2 strata present and a defined combined AUC.
StratifiedAucReport stratified_auc_report(std::span<const ExamRecord> exams,
                                          const AttributeSchema& schema,
                                          const std::string& attribute,
                                          const stats::BootstrapOptions& bootstrap);

struct CompositionPoint {
    double fraction = 0.0;    // share of exams drawn from the high side
    std::optional<double> mean_auc;
    std::optional<double> std_auc;
    int subsets = 0;
};

struct CompositionCurve {
    std::string attribute;
    std::string high_value;
    long evaluation_size = 0;  // fixed to the input set's size
    std::vector<CompositionPoint> points;
};

/// Supp.-Fig.-6-style composition sweep: at fraction f, draw
/// ceil(f*N) exams with replacement from the high side and N-ceil(f*N)
/// from the rest, keeping each side's own prevalence; report mean/std of
/// the AUC over subsets_per_point draws. Points whose required side is
/// empty are marked undefined.
CompositionCurve composition_sweep(std::span<const ExamRecord> exams,
                                   const AttributeSchema& schema, const std::string& attribute,
                                   const std::string& high_value,
                                   std::span<const double> fractions, int subsets_per_point,
                                   std::uint64_t seed);

/// AUC of a set of labeled exams (nullopt when a class is missing).
std::optional<double> exam_auc(std::span<const ExamRecord> exams);

}  // namespace shortcut_audit::audit
