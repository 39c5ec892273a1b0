// Copyright 2026 shortcut-audit contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "shortcut_audit/records.hpp"

namespace shortcut_audit::mitigation {

struct WeightRow {
    std::string exam_id;
    double weight = 0.0;
};

struct CellMass {
    std::string value;
    Label label = Label::kCancer;
    long count = 0;
    double cell_mass = 0.0;          // 1 / (2 * value count)
    double per_record_weight = 0.0;  // cell_mass / count
};

/// Per-draw multinomial masses balancing every (attribute value, label)
/// cell: with V values each of the 2V cells gets total mass 1/(2V),
/// split uniformly within the cell. Weights sum to 1.
struct SamplingWeightTable {
    std::string attribute;
    std::vector<WeightRow> rows;
    std::vector<CellMass> cells;
};

/// Throws ValidationError naming any empty (value, label) cell.
SamplingWeightTable balanced_weights(std::span<const ExamRecord> exams,
                                     const AttributeSchema& schema, const std::string& attribute);

struct FilterResult {
    std::vector<ExamRecord> kept;
    long removed = 0;
};

/// Keeps exams whose attribute equals keep_value. Idempotent.
FilterResult filter_by_attribute(std::span<const ExamRecord> exams, const std::string& attribute,
                                 const std::string& keep_value);

/// Downsamples (never duplicates) the majority class within each
/// attribute value until every value's prevalence is target within
/// 1/(2 * value size); value sizes keep their original ratios as closely
/// as integer rounding allows. Seeded draw without replacement.
///
/// Throws ValidationError naming the value and its feasible range when
/// the target cannot be reached.
std::vector<ExamRecord> prevalence_matched_eval(std::span<const ExamRecord> exams,
                                                const AttributeSchema& schema,
                                                const std::string& attribute,
                                                double target_prevalence, std::uint64_t seed);

}  // namespace shortcut_audit::mitigation
