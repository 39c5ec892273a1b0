// Copyright 2026 shortcut-audit contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace shortcut_audit {

enum class Laterality : std::uint8_t { kLeft, kRight };

enum class Label : std::uint8_t { kCancer, kNonCancer, kUnknown };

const char* to_string(Label label);
const char* to_string(Laterality laterality);

/// One prediction row of an image-score file.
struct ImageScoreRecord {
    std::string image_id;
    std::string exam_id;
    Laterality laterality = Laterality::kLeft;
    std::string view;
    double score = 0.0;  // in [0,1], enforced at parse time
};

/// Exam-level score plus ground-truth label and categorical attributes.
///
/// Attributes are stored in file order; the set of keys must match the
/// active AttributeSchema (checked by validate_against_schema).
struct ExamRecord {
    std::string exam_id;
    std::string patient_id;
    double score = 0.0;
    Label label = Label::kUnknown;
    std::vector<std::pair<std::string, std::string>> attributes;

    const std::string* attribute(const std::string& name) const {
        for (const auto& [key, value] : attributes) {
            if (key == name) return &value;
        }
        return nullptr;
    }
};

using Date = std::chrono::sys_days;

enum class BiopsyOutcome : std::uint8_t { kMalignant, kBenignOrHighRisk };

/// Follow-up record used to derive the ground-truth label of one exam.
/// Only events dated on or after exam_date are considered.
struct ExamHistory {
    Date exam_date{};
    std::vector<std::pair<Date, BiopsyOutcome>> biopsy_events;
    std::vector<std::pair<Date, int>> followup_assessments;  // BI-RADS 0..6
};

struct AttributeDef {
    std::string name;
    std::vector<std::string> values;
    std::optional<std::string> high_prevalence_value;

    bool has_value(const std::string& v) const {
        for (const auto& x : values) {
            if (x == v) return true;
        }
        return false;
    }
};

/// Declared categorical attributes of a dataset.
struct AttributeSchema {
    std::vector<AttributeDef> attributes;

    const AttributeDef* find(const std::string& name) const {
        for (const auto& def : attributes) {
            if (def.name == name) return &def;
        }
        return nullptr;
    }
};

}  // namespace shortcut_audit
