// Copyright 2026 shortcut-audit contributors
// SPDX-License-Identifier: Apache-2.0

#include "shortcut_audit/audit.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "shortcut_audit/errors.hpp"
#include "shortcut_audit/rng.hpp"

namespace shortcut_audit::audit {

namespace {

const AttributeDef& require_attribute(const AttributeSchema& schema, const std::string& name) {
    const AttributeDef* def = schema.find(name);
    if (def == nullptr) {
        throw ValidationError("attribute \"" + name + "\" is not declared in the schema");
    }
    return *def;
}

const std::string& require_value(const ExamRecord& exam, const std::string& attribute) {
    const std::string* value = exam.attribute(attribute);
    if (value == nullptr) {
        throw ValidationError("exam " + exam.exam_id + ": missing attribute \"" + attribute +
                              "\"");
    }
    return *value;
}

struct ScoreLabelView {
    std::vector<double> scores;
    std::vector<std::uint8_t> is_positive;
    long positives = 0;
    long negatives = 0;
};

ScoreLabelView view_of(std::span<const ExamRecord> exams) {
    ScoreLabelView view;
    view.scores.reserve(exams.size());
    view.is_positive.reserve(exams.size());
    for (const auto& exam : exams) {
        view.scores.push_back(exam.score);
        const bool positive = exam.label == Label::kCancer;
        view.is_positive.push_back(positive ? 1 : 0);
        (positive ? view.positives : view.negatives) += 1;
    }
    return view;
}

std::optional<stats::ConfidenceInterval> bootstrap_auc(std::span<const ExamRecord> exams,
                                                       const stats::BootstrapOptions& options) {
    const ScoreLabelView view = view_of(exams);
    if (view.positives == 0 || view.negatives == 0) return std::nullopt;
    stats::BootstrapOptions opts = options;
    std::vector<std::uint32_t> strata;
    if (opts.stratified) {
        strata.assign(view.is_positive.begin(), view.is_positive.end());
    }
    return stats::bootstrap_ci(static_cast<std::uint32_t>(exams.size()),
                               stats::make_auc_statistic(view.scores, view.is_positive), opts,
                               strata);
}

}  // namespace

std::optional<double> exam_auc(std::span<const ExamRecord> exams) {
    std::vector<double> pos;
    std::vector<double> neg;
    for (const auto& exam : exams) {
        (exam.label == Label::kCancer ? pos : neg).push_back(exam.score);
    }
    return stats::auc(pos, neg);
}

PrevalenceTable prevalence_table(std::span<const ExamRecord> exams,
                                 const AttributeSchema& schema, const std::string& attribute) {
    const AttributeDef& def = require_attribute(schema, attribute);
    PrevalenceTable table;
    table.attribute = attribute;
    std::map<std::string, std::pair<long, long>> counts;  // value -> (positives, total)
    for (const auto& exam : exams) {
        const std::string& value = require_value(exam, attribute);
        auto& cell = counts[value];
        cell.second += 1;
        if (exam.label == Label::kCancer) cell.first += 1;
    }
    for (const auto& value : def.values) {
        auto it = counts.find(value);
        if (it == counts.end()) {
            table.empty_values.push_back(value);
            continue;
        }
        PrevalenceRow row;
        row.value = value;
        row.positive_count = it->second.first;
        row.total_count = it->second.second;
        row.prevalence = static_cast<double>(row.positive_count) /
                         static_cast<double>(row.total_count);
        table.rows.push_back(std::move(row));
    }
    return table;
}

DistributionComparison distribution_comparison(std::span<const ExamRecord> exams,
                                               const AttributeSchema& schema,
                                               const std::string& attribute) {
    const AttributeDef& def = require_attribute(schema, attribute);
    DistributionComparison cmp;
    cmp.attribute = attribute;

    std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> cells;
    for (const auto& exam : exams) {
        const std::string& value = require_value(exam, attribute);
        auto& cell = cells[value];
        (exam.label == Label::kCancer ? cell.first : cell.second).push_back(exam.score);
    }

    std::vector<std::string> present;
    for (const auto& value : def.values) {
        auto it = cells.find(value);
        if (it == cells.end()) continue;
        present.push_back(value);
        ValueDistribution dist;
        dist.value = value;
        dist.positives.count = static_cast<long>(it->second.first.size());
        dist.positives.quartiles = stats::quartiles(it->second.first);
        dist.negatives.count = static_cast<long>(it->second.second.size());
        dist.negatives.quartiles = stats::quartiles(it->second.second);
        cmp.per_value.push_back(std::move(dist));
    }

    for (std::size_t i = 0; i < present.size(); ++i) {
        for (std::size_t j = i + 1; j < present.size(); ++j) {
            const auto& a = cells.at(present[i]);
            const auto& b = cells.at(present[j]);
            KsEntry entry;
            entry.value_a = present[i];
            entry.value_b = present[j];
            entry.positives_ks = stats::ks_statistic(a.first, b.first);
            entry.negatives_ks = stats::ks_statistic(a.second, b.second);
            cmp.pairwise_ks.push_back(std::move(entry));
        }
    }
    return cmp;
}

std::string default_high_value(std::span<const ExamRecord> exams,
                               const AttributeSchema& schema, const std::string& attribute) {
    const AttributeDef& def = require_attribute(schema, attribute);
    if (def.high_prevalence_value) return *def.high_prevalence_value;
    const PrevalenceTable table = prevalence_table(exams, schema, attribute);
    if (table.rows.empty()) {
        throw ValidationError("attribute \"" + attribute + "\" has no populated values");
    }
    const PrevalenceRow* best = &table.rows.front();
    for (const auto& row : table.rows) {
        if (row.prevalence > best->prevalence) best = &row;
    }
    return best->value;
}

std::pair<std::vector<ExamRecord>, std::vector<ExamRecord>> bias_subsets(
    std::span<const ExamRecord> exams, const AttributeSchema& schema,
    const std::string& attribute, const std::string& high_value) {
    const AttributeDef& def = require_attribute(schema, attribute);
    if (!def.has_value(high_value)) {
        throw ValidationError("attribute \"" + attribute + "\": value \"" + high_value +
                              "\" is not declared in the schema");
    }
    std::vector<ExamRecord> aligned;
    std::vector<ExamRecord> conflicting;
    for (const auto& exam : exams) {
        const bool high = require_value(exam, attribute) == high_value;
        const bool positive = exam.label == Label::kCancer;
        // Aligned: positives from the high-prevalence side, negatives from
        // the other side; conflicting is the complement.
        if (positive == high) {
            aligned.push_back(exam);
        } else {
            conflicting.push_back(exam);
        }
    }
    return {std::move(aligned), std::move(conflicting)};
}

BiasGapReport bias_gap(std::span<const ExamRecord> exams, const AttributeSchema& schema,
                       const std::string& attribute, const std::string& high_value,
                       const stats::BootstrapOptions& bootstrap) {
    auto [aligned, conflicting] = bias_subsets(exams, schema, attribute, high_value);
    BiasGapReport report;
    report.attribute = attribute;
    report.high_value = high_value;

    stats::BootstrapOptions aligned_opts = bootstrap;
    aligned_opts.seed = derive_seed(bootstrap.seed, 1);
    stats::BootstrapOptions conflicting_opts = bootstrap;
    conflicting_opts.seed = derive_seed(bootstrap.seed, 2);

    report.aligned_auc = bootstrap_auc(aligned, aligned_opts);
    report.conflicting_auc = bootstrap_auc(conflicting, conflicting_opts);
    if (report.aligned_auc && report.conflicting_auc) {
        report.gap = report.aligned_auc->point - report.conflicting_auc->point;
    }
    return report;
}

StratifiedAucReport stratified_auc_report(std::span<const ExamRecord> exams,
                                          const AttributeSchema& schema,
                                          const std::string& attribute,
                                          const stats::BootstrapOptions& bootstrap) {
    const AttributeDef& def = require_attribute(schema, attribute);
    StratifiedAucReport report;
    report.attribute = attribute;

    std::map<std::string, std::vector<ExamRecord>> strata;
    for (const auto& exam : exams) {
        strata[require_value(exam, attribute)].push_back(exam);
    }
    if (strata.size() < 2) {
        throw ValidationError("stratified_auc_report: attribute \"" + attribute +
                              "\" has fewer than 2 strata present");
    }

    std::uint64_t stratum_index = 0;
    for (const auto& value : def.values) {
        auto it = strata.find(value);
        if (it == strata.end()) continue;
        StratumAuc stratum;
        stratum.value = value;
        for (const auto& exam : it->second) {
            (exam.label == Label::kCancer ? stratum.positives : stratum.negatives) += 1;
        }
        stats::BootstrapOptions opts = bootstrap;
        opts.seed = derive_seed(bootstrap.seed, 100 + stratum_index);
        stratum.auc = bootstrap_auc(it->second, opts);
        report.strata.push_back(std::move(stratum));
        ++stratum_index;
    }

    const auto combined = bootstrap_auc(exams, bootstrap);
    if (!combined) {
        throw ValidationError("stratified_auc_report: combined AUC undefined (a class is empty)");
    }
    report.combined = *combined;

    bool any_defined = false;
    double best_stratum = 0.0;
    for (const auto& stratum : report.strata) {
        if (!stratum.auc) continue;
        best_stratum = any_defined ? std::max(best_stratum, stratum.auc->point)
                                   : stratum.auc->point;
        any_defined = true;
    }
    report.paradox_flag = any_defined && report.combined.point > best_stratum;
    return report;
}

CompositionCurve composition_sweep(std::span<const ExamRecord> exams,
                                   const AttributeSchema& schema, const std::string& attribute,
                                   const std::string& high_value,
                                   std::span<const double> fractions, int subsets_per_point,
                                   std::uint64_t seed) {
    const AttributeDef& def = require_attribute(schema, attribute);
    if (!def.has_value(high_value)) {
        throw ValidationError("attribute \"" + attribute + "\": value \"" + high_value +
                              "\" is not declared in the schema");
    }
    if (subsets_per_point < 1) {
        throw InvalidArgument("composition_sweep: subsets_per_point must be >= 1");
    }
    for (double f : fractions) {
        if (!(f >= 0.0 && f <= 1.0)) {
            throw InvalidArgument("composition_sweep: fractions must lie in [0,1]");
        }
    }

    // The evaluation size stays fixed to the input set's size.
    const std::size_t total = exams.size();
    if (total == 0) throw ValidationError("composition_sweep: empty exam set");

    std::vector<double> high_scores;
    std::vector<std::uint8_t> high_labels;
    std::vector<double> rest_scores;
    std::vector<std::uint8_t> rest_labels;
    for (const auto& exam : exams) {
        const bool high = require_value(exam, attribute) == high_value;
        const bool positive = exam.label == Label::kCancer;
        if (high) {
            high_scores.push_back(exam.score);
            high_labels.push_back(positive ? 1 : 0);
        } else {
            rest_scores.push_back(exam.score);
            rest_labels.push_back(positive ? 1 : 0);
        }
    }

    CompositionCurve curve;
    curve.attribute = attribute;
    curve.high_value = high_value;
    curve.evaluation_size = static_cast<long>(total);

    constexpr int kMaxRedraws = 100;
    for (std::size_t fi = 0; fi < fractions.size(); ++fi) {
        const double f = fractions[fi];
        const std::size_t from_high =
            static_cast<std::size_t>(std::ceil(f * static_cast<double>(total)));
        const std::size_t from_rest = total - from_high;
        CompositionPoint point;
        point.fraction = f;
        point.subsets = subsets_per_point;

        if ((from_high > 0 && high_scores.empty()) || (from_rest > 0 && rest_scores.empty())) {
            curve.points.push_back(point);  // required side empty: undefined
            continue;
        }

        std::vector<double> aucs;
        aucs.reserve(static_cast<std::size_t>(subsets_per_point));
        std::vector<double> pos;
        std::vector<double> neg;
        for (int s = 0; s < subsets_per_point; ++s) {
            for (int attempt = 0; attempt <= kMaxRedraws; ++attempt) {
                RngStream rng(seed, (static_cast<std::uint64_t>(fi) << 32) | static_cast<std::uint64_t>(s),
                              static_cast<std::uint64_t>(attempt), rng_domain::kComposition);
                pos.clear();
                neg.clear();
                // With-replacement draws within each side keep that side's
                // own prevalence in expectation.
                for (std::size_t i = 0; i < from_high; ++i) {
                    const std::size_t pick = rng.next_below(high_scores.size());
                    (high_labels[pick] ? pos : neg).push_back(high_scores[pick]);
                }
                for (std::size_t i = 0; i < from_rest; ++i) {
                    const std::size_t pick = rng.next_below(rest_scores.size());
                    (rest_labels[pick] ? pos : neg).push_back(rest_scores[pick]);
                }
                const auto value = stats::auc(pos, neg);
                if (value) {
                    aucs.push_back(*value);
                    break;
                }
            }
        }
        if (aucs.size() == static_cast<std::size_t>(subsets_per_point)) {
            double mean = 0.0;
            for (double v : aucs) mean += v;
            mean /= static_cast<double>(aucs.size());
            double var = 0.0;
            for (double v : aucs) var += (v - mean) * (v - mean);
            point.mean_auc = mean;
            point.std_auc = aucs.size() > 1
                                ? std::sqrt(var / static_cast<double>(aucs.size() - 1))
                                : 0.0;
        }
        curve.points.push_back(point);
    }
    return curve;
}

}  // namespace shortcut_audit::audit
