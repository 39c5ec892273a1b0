// Copyright 2026 shortcut-audit contributors
// SPDX-License-Identifier: Apache-2.0

#include "shortcut_audit/mitigation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include "shortcut_audit/errors.hpp"
#include "shortcut_audit/rng.hpp"

namespace shortcut_audit::mitigation {

namespace {

const std::string& require_value(const ExamRecord& exam, const std::string& attribute) {
    const std::string* value = exam.attribute(attribute);
    if (value == nullptr) {
        throw ValidationError("exam " + exam.exam_id + ": missing attribute \"" + attribute +
                              "\"");
    }
    return *value;
}

/// Seeded partial Fisher-Yates: the first `keep` entries of a shuffle.
std::vector<std::uint32_t> draw_without_replacement(std::uint32_t pool, std::uint32_t keep,
                                                    Philox4x64& rng) {
    std::vector<std::uint32_t> indices(pool);
    for (std::uint32_t i = 0; i < pool; ++i) indices[i] = i;
    for (std::uint32_t i = 0; i < keep; ++i) {
        const std::uint32_t j = i + static_cast<std::uint32_t>(rng.next_below(pool - i));
        std::swap(indices[i], indices[j]);
    }
    indices.resize(keep);
    return indices;
}

}  // namespace

SamplingWeightTable balanced_weights(std::span<const ExamRecord> exams,
                                     const AttributeSchema& schema,
                                     const std::string& attribute) {
    const AttributeDef* def = schema.find(attribute);
    if (def == nullptr) {
        throw ValidationError("attribute \"" + attribute + "\" is not declared in the schema");
    }

    // (value, label) -> exam indices; Unknown never receives mass.
    std::map<std::string, std::array<std::vector<std::size_t>, 2>> cells;
    for (std::size_t i = 0; i < exams.size(); ++i) {
        if (exams[i].label == Label::kUnknown) continue;
        const std::string& value = require_value(exams[i], attribute);
        cells[value][exams[i].label == Label::kCancer ? 0 : 1].push_back(i);
    }
    if (cells.empty()) throw ValidationError("balanced_weights: no labeled exams");

    const double n_values = static_cast<double>(cells.size());
    const double cell_mass = 1.0 / (2.0 * n_values);

    SamplingWeightTable table;
    table.attribute = attribute;
    table.rows.resize(exams.size());
    std::vector<bool> weighted(exams.size(), false);

    for (const auto& [value, by_label] : cells) {
        for (int li = 0; li < 2; ++li) {
            const Label label = li == 0 ? Label::kCancer : Label::kNonCancer;
            const auto& members = by_label[li];
            if (members.empty()) {
                throw ValidationError("balanced_weights: cell (" + value + ", " +
                                      to_string(label) + ") is empty");
            }
            const double weight = cell_mass / static_cast<double>(members.size());
            for (std::size_t index : members) {
                table.rows[index] = {exams[index].exam_id, weight};
                weighted[index] = true;
            }
            table.cells.push_back({value, label, static_cast<long>(members.size()), cell_mass,
                                   weight});
        }
    }

    // Drop rows for Unknown-labeled exams while keeping input order.
    std::vector<WeightRow> rows;
    rows.reserve(table.rows.size());
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        if (weighted[i]) rows.push_back(std::move(table.rows[i]));
    }
    table.rows = std::move(rows);
    return table;
}

FilterResult filter_by_attribute(std::span<const ExamRecord> exams, const std::string& attribute,
                                 const std::string& keep_value) {
    FilterResult result;
    for (const auto& exam : exams) {
        if (require_value(exam, attribute) == keep_value) {
            result.kept.push_back(exam);
        } else {
            ++result.removed;
        }
    }
    return result;
}

std::vector<ExamRecord> prevalence_matched_eval(std::span<const ExamRecord> exams,
                                                const AttributeSchema& schema,
                                                const std::string& attribute,
                                                double target_prevalence, std::uint64_t seed) {
    if (!(target_prevalence > 0.0 && target_prevalence < 1.0)) {
        throw InvalidArgument("prevalence_matched_eval: target prevalence must lie strictly "
                              "inside (0,1), got " + std::to_string(target_prevalence));
    }
    if (schema.find(attribute) == nullptr) {
        throw ValidationError("attribute \"" + attribute + "\" is not declared in the schema");
    }
    const double t = target_prevalence;

    struct ValuePool {
        std::vector<std::size_t> positives;
        std::vector<std::size_t> negatives;
    };
    std::map<std::string, ValuePool> pools;
    for (std::size_t i = 0; i < exams.size(); ++i) {
        if (exams[i].label == Label::kUnknown) continue;
        auto& pool = pools[require_value(exams[i], attribute)];
        (exams[i].label == Label::kCancer ? pool.positives : pool.negatives).push_back(i);
    }
    if (pools.empty()) throw ValidationError("prevalence_matched_eval: no labeled exams");

    // Largest per-value size reaching prevalence t by downsampling only.
    double alpha = 1.0;
    for (const auto& [value, pool] : pools) {
        const double positives = static_cast<double>(pool.positives.size());
        const double negatives = static_cast<double>(pool.negatives.size());
        if (pool.positives.empty() || pool.negatives.empty()) {
            throw ValidationError("prevalence_matched_eval: value \"" + value + "\" has " +
                                  (pool.positives.empty() ? "no positives" : "no negatives") +
                                  "; only prevalence " +
                                  (pool.positives.empty() ? "0" : "1") +
                                  " is reachable by downsampling");
        }
        const double size = positives + negatives;
        const double prevalence = positives / size;
        const double max_size = prevalence >= t ? negatives / (1.0 - t) : positives / t;
        alpha = std::min(alpha, max_size / size);
    }

    std::vector<std::size_t> selected;
    std::uint64_t value_index = 0;
    for (const auto& [value, pool] : pools) {
        const std::size_t original =
            pool.positives.size() + pool.negatives.size();
        // Value sizes keep their original ratios via the shared scale.
        const long long size = std::llround(alpha * static_cast<double>(original));
        long long keep_pos = std::llround(t * static_cast<double>(size));
        if (size < 2 || keep_pos < 1 || keep_pos > size - 1) {
            throw ValidationError(
                "prevalence_matched_eval: value \"" + value + "\": target " +
                std::to_string(t) + " is unreachable at matched size " + std::to_string(size) +
                "; feasible prevalences there lie in [" +
                std::to_string(1.0 / static_cast<double>(std::max<long long>(size, 2))) + ", " +
                std::to_string(static_cast<double>(size - 1) /
                               static_cast<double>(std::max<long long>(size, 2))) + "]");
        }
        const long long keep_neg = size - keep_pos;
        if (keep_pos > static_cast<long long>(pool.positives.size()) ||
            keep_neg > static_cast<long long>(pool.negatives.size())) {
            throw Error("prevalence_matched_eval: internal rounding overflow for value \"" +
                        value + "\"");
        }

        RngStream pos_rng(seed, value_index * 2, 0, rng_domain::kMitigation);
        RngStream neg_rng(seed, value_index * 2 + 1, 0, rng_domain::kMitigation);
        for (std::uint32_t i : draw_without_replacement(
                 static_cast<std::uint32_t>(pool.positives.size()),
                 static_cast<std::uint32_t>(keep_pos), pos_rng)) {
            selected.push_back(pool.positives[i]);
        }
        for (std::uint32_t i : draw_without_replacement(
                 static_cast<std::uint32_t>(pool.negatives.size()),
                 static_cast<std::uint32_t>(keep_neg), neg_rng)) {
            selected.push_back(pool.negatives[i]);
        }
        ++value_index;
    }

    std::sort(selected.begin(), selected.end());
    std::vector<ExamRecord> result;
    result.reserve(selected.size());
    for (std::size_t i : selected) result.push_back(exams[i]);
    return result;
}

}  // namespace shortcut_audit::mitigation
