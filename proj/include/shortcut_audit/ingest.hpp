// Copyright 2026 shortcut-audit contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "shortcut_audit/records.hpp"

namespace shortcut_audit::ingest {

/// Reads an image-score CSV (`image_id,exam_id,laterality,view,score`).
/// Rejects malformed rows, duplicate image ids, missing lateralities and
/// scores outside [0,1], naming the offending line.
std::vector<ImageScoreRecord> parse_image_scores(const std::filesystem::path& path);

/// Reads an exam CSV (`exam_id,patient_id,score,label,<attr>...`); every
/// column after `label` becomes an attribute.
std::vector<ExamRecord> parse_exam_csv(const std::filesystem::path& path);

/// Writes exams back out in the same format. Attribute columns follow the
/// first record's key order.
void write_exam_csv(const std::filesystem::path& path, std::span<const ExamRecord> exams);

/// Exam score for one exam's images: per-laterality mean, then the
/// maximum over the lateralities present. Throws on an empty list.
double aggregate_exam_score(std::span<const ImageScoreRecord> images);

/// Groups image records by exam_id (first-appearance order) and
/// aggregates each group.
std::vector<std::pair<std::string, double>> aggregate_exams(
    std::span<const ImageScoreRecord> images);

/// Ground-truth labeling. Windows are 365/730 days, boundaries inclusive;
/// only events dated on or after the exam date are considered.
///   Cancer:    malignant biopsy within 365 days, or exam BI-RADS 6.
///   NonCancer: no biopsy of any kind after 365 days, every considered
///              assessment BI-RADS <= 3, and follow-up reaching 730 days.
///   Unknown:   everything else.
Label label_exam(const ExamHistory& history, int exam_birads);

struct HistoryEntry {
    std::string exam_id;
    int exam_birads = 0;
    ExamHistory history;
};

/// Reads one JSON object per line: exam_id, exam_date, exam_birads,
/// biopsies:[{date,outcome}], followups:[{date,birads}].
std::vector<HistoryEntry> parse_history_jsonl(const std::filesystem::path& path);

/// Loads and checks an attribute schema JSON file.
AttributeSchema load_schema(const std::filesystem::path& path);

/// ISO-8601 calendar date (YYYY-MM-DD); throws ParseError when invalid.
Date parse_date(const std::string& text, const std::string& context);

struct Violation {
    enum class Kind { kMissingAttribute, kUndeclaredValue };
    std::string exam_id;
    Kind kind;
    std::string attribute;
    std::string value;  // empty for kMissingAttribute
    std::string describe() const;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool valid() const { return violations.empty(); }
};

/// Lists every exam whose attributes are missing a declared key or carry
/// an undeclared value.
ValidationReport validate_against_schema(std::span<const ExamRecord> exams,
                                         const AttributeSchema& schema);

/// Cancer/NonCancer exams only; Unknown never reaches a metric.
std::vector<ExamRecord> labeled_only(std::span<const ExamRecord> exams);

}  // namespace shortcut_audit::ingest
