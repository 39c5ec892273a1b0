// Copyright 2026 shortcut-audit contributors
// SPDX-License-Identifier: Apache-2.0

#include "shortcut_audit/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "shortcut_audit/csv.hpp"
#include "shortcut_audit/errors.hpp"

namespace shortcut_audit {

const char* to_string(Label label) {
    switch (label) {
        case Label::kCancer: return "cancer";
        case Label::kNonCancer: return "non_cancer";
        case Label::kUnknown: return "unknown";
    }
    return "unknown";
}

const char* to_string(Laterality laterality) {
    return laterality == Laterality::kLeft ? "L" : "R";
}

}  // namespace shortcut_audit

namespace shortcut_audit::ingest {

namespace {

using nlohmann::json;

std::string location(const std::filesystem::path& path, std::size_t line) {
    return path.string() + ":" + std::to_string(line);
}

Laterality parse_laterality(const std::string& text, const std::string& where) {
    std::string lower;
    lower.reserve(text.size());
    for (char c : text) lower.push_back(static_cast<char>(std::tolower(c)));
    if (lower == "l" || lower == "left") return Laterality::kLeft;
    if (lower == "r" || lower == "right") return Laterality::kRight;
    throw ParseError(where + ": column laterality: expected L/R/left/right, got \"" + text +
                     "\" (images without a laterality cannot be aggregated per breast)");
}

Label parse_label(const std::string& text, const std::string& where) {
    if (text == "cancer") return Label::kCancer;
    if (text == "non_cancer") return Label::kNonCancer;
    if (text == "unknown") return Label::kUnknown;
    throw ParseError(where + ": column label: expected cancer/non_cancer/unknown, got \"" +
                     text + "\"");
}

double parse_unit_score(const std::string& text, const std::string& where) {
    double score;
    try {
        score = csv::parse_double(text, where + ": column score");
    } catch (const ParseError&) {
        throw;
    }
    if (!(score >= 0.0 && score <= 1.0)) {
        throw ParseError(where + ": column score: value " + text + " outside [0,1]");
    }
    return score;
}

}  // namespace

std::vector<ImageScoreRecord> parse_image_scores(const std::filesystem::path& path) {
    static const std::vector<std::string> kHeader = {"image_id", "exam_id", "laterality",
                                                     "view", "score"};
    std::vector<ImageScoreRecord> records;
    std::unordered_set<std::string> seen_ids;
    bool header_seen = false;
    csv::for_each_row(path, [&](std::size_t line, const std::vector<std::string>& fields) {
        const std::string where = location(path, line);
        if (!header_seen) {
            if (fields != kHeader) {
                throw ParseError(where +
                                 ": expected header image_id,exam_id,laterality,view,score");
            }
            header_seen = true;
            return;
        }
        if (fields.size() != kHeader.size()) {
            throw ParseError(where + ": expected " + std::to_string(kHeader.size()) +
                             " columns, got " + std::to_string(fields.size()));
        }
        ImageScoreRecord record;
        record.image_id = fields[0];
        record.exam_id = fields[1];
        record.laterality = parse_laterality(fields[2], where);
        record.view = fields[3];
        record.score = parse_unit_score(fields[4], where);
        if (record.image_id.empty()) throw ParseError(where + ": empty image_id");
        if (!seen_ids.insert(record.image_id).second) {
            throw ParseError(where + ": duplicate image_id \"" + record.image_id + "\"");
        }
        records.push_back(std::move(record));
    });
    if (!header_seen) throw ParseError(path.string() + ": missing header row");
    return records;
}

std::vector<ExamRecord> parse_exam_csv(const std::filesystem::path& path) {
    std::vector<ExamRecord> exams;
    std::vector<std::string> attr_names;
    std::unordered_set<std::string> seen_ids;
    bool header_seen = false;
    csv::for_each_row(path, [&](std::size_t line, const std::vector<std::string>& fields) {
        const std::string where = location(path, line);
        if (!header_seen) {
            if (fields.size() < 4 || fields[0] != "exam_id" || fields[1] != "patient_id" ||
                fields[2] != "score" || fields[3] != "label") {
                throw ParseError(where +
                                 ": expected header exam_id,patient_id,score,label,<attributes>");
            }
            attr_names.assign(fields.begin() + 4, fields.end());
            header_seen = true;
            return;
        }
        if (fields.size() != attr_names.size() + 4) {
            throw ParseError(where + ": expected " + std::to_string(attr_names.size() + 4) +
                             " columns, got " + std::to_string(fields.size()));
        }
        ExamRecord exam;
        exam.exam_id = fields[0];
        exam.patient_id = fields[1];
        exam.score = parse_unit_score(fields[2], where);
        exam.label = parse_label(fields[3], where);
        for (std::size_t a = 0; a < attr_names.size(); ++a) {
            exam.attributes.emplace_back(attr_names[a], fields[4 + a]);
        }
        if (exam.exam_id.empty()) throw ParseError(where + ": empty exam_id");
        if (!seen_ids.insert(exam.exam_id).second) {
            throw ParseError(where + ": duplicate exam_id \"" + exam.exam_id + "\"");
        }
        exams.push_back(std::move(exam));
    });
    if (!header_seen) throw ParseError(path.string() + ": missing header row");
    return exams;
}

void write_exam_csv(const std::filesystem::path& path, std::span<const ExamRecord> exams) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << "exam_id,patient_id,score,label";
    if (!exams.empty()) {
        for (const auto& [name, value] : exams.front().attributes) {
            out << ',' << csv::escape(name);
        }
    }
    out << '\n';
    for (const auto& exam : exams) {
        out << csv::escape(exam.exam_id) << ',' << csv::escape(exam.patient_id) << ','
            << csv::format_double(exam.score) << ',' << to_string(exam.label);
        for (const auto& [name, value] : exam.attributes) {
            out << ',' << csv::escape(value);
        }
        out << '\n';
    }
}

double aggregate_exam_score(std::span<const ImageScoreRecord> images) {
    if (images.empty()) throw ValidationError("no images for exam");
    double sums[2] = {0.0, 0.0};
    std::size_t counts[2] = {0, 0};
    for (const auto& image : images) {
        const int side = image.laterality == Laterality::kLeft ? 0 : 1;
        sums[side] += image.score;
        ++counts[side];
    }
    double best = 0.0;
    bool any = false;
    for (int side = 0; side < 2; ++side) {
        if (counts[side] == 0) continue;
        const double mean = sums[side] / static_cast<double>(counts[side]);
        best = any ? std::max(best, mean) : mean;
        any = true;
    }
    return best;
}

std::vector<std::pair<std::string, double>> aggregate_exams(
    std::span<const ImageScoreRecord> images) {
    std::vector<std::string> order;
    std::unordered_map<std::string, std::vector<ImageScoreRecord>> grouped;
    for (const auto& image : images) {
        auto [it, inserted] = grouped.try_emplace(image.exam_id);
        if (inserted) order.push_back(image.exam_id);
        it->second.push_back(image);
    }
    std::vector<std::pair<std::string, double>> result;
    result.reserve(order.size());
    for (const auto& exam_id : order) {
        result.emplace_back(exam_id, aggregate_exam_score(grouped.at(exam_id)));
    }
    return result;
}

Label label_exam(const ExamHistory& history, int exam_birads) {
    using days = std::chrono::days;
    const Date exam = history.exam_date;
    const Date biopsy_window_end = exam + days(365);
    const Date followup_goal = exam + days(730);

    if (exam_birads == 6) return Label::kCancer;

    bool biopsy_after_window = false;
    for (const auto& [date, outcome] : history.biopsy_events) {
        if (date < exam) continue;
        if (date <= biopsy_window_end) {
            if (outcome == BiopsyOutcome::kMalignant) return Label::kCancer;
        } else {
            biopsy_after_window = true;
        }
    }
    if (biopsy_after_window) return Label::kUnknown;

    bool followup_long_enough = false;
    for (const auto& [date, birads] : history.followup_assessments) {
        if (date < exam) continue;
        if (birads > 3) return Label::kUnknown;
        if (date >= followup_goal) followup_long_enough = true;
    }
    return followup_long_enough ? Label::kNonCancer : Label::kUnknown;
}

Date parse_date(const std::string& text, const std::string& context) {
    int year = 0;
    unsigned month = 0;
    unsigned day = 0;
    const char* p = text.data();
    const char* end = p + text.size();
    auto take = [&](auto& out, const char* stop) {
        auto [ptr, ec] = std::from_chars(p, end, out);
        if (ec != std::errc() || (stop != nullptr && (ptr == end || *ptr != *stop))) {
            throw ParseError(context + ": invalid ISO-8601 date \"" + text + "\"");
        }
        p = stop != nullptr ? ptr + 1 : ptr;
    };
    take(year, "-");
    take(month, "-");
    take(day, nullptr);
    if (p != end) throw ParseError(context + ": invalid ISO-8601 date \"" + text + "\"");
    const std::chrono::year_month_day ymd{std::chrono::year{year}, std::chrono::month{month},
                                          std::chrono::day{day}};
    if (!ymd.ok()) throw ParseError(context + ": not a calendar date: \"" + text + "\"");
    return std::chrono::sys_days{ymd};
}

std::vector<HistoryEntry> parse_history_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    std::vector<HistoryEntry> entries;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const std::string where = location(path, line_no);
        json row = json::parse(line, nullptr, false);
        if (row.is_discarded() || !row.is_object()) {
            throw ParseError(where + ": not a JSON object");
        }
        try {
            HistoryEntry entry;
            entry.exam_id = row.at("exam_id").get<std::string>();
            entry.exam_birads = row.at("exam_birads").get<int>();
            if (entry.exam_birads < 0 || entry.exam_birads > 6) {
                throw ParseError(where + ": exam_birads must be 0..6");
            }
            entry.history.exam_date =
                parse_date(row.at("exam_date").get<std::string>(), where + ": exam_date");
            for (const auto& biopsy : row.value("biopsies", json::array())) {
                const std::string outcome = biopsy.at("outcome").get<std::string>();
                BiopsyOutcome parsed;
                if (outcome == "malignant") {
                    parsed = BiopsyOutcome::kMalignant;
                } else if (outcome == "benign_or_high_risk") {
                    parsed = BiopsyOutcome::kBenignOrHighRisk;
                } else {
                    throw ParseError(where + ": biopsy outcome must be malignant or "
                                             "benign_or_high_risk, got \"" + outcome + "\"");
                }
                entry.history.biopsy_events.emplace_back(
                    parse_date(biopsy.at("date").get<std::string>(), where + ": biopsy date"),
                    parsed);
            }
            for (const auto& followup : row.value("followups", json::array())) {
                const int birads = followup.at("birads").get<int>();
                if (birads < 0 || birads > 6) {
                    throw ParseError(where + ": follow-up birads must be 0..6");
                }
                entry.history.followup_assessments.emplace_back(
                    parse_date(followup.at("date").get<std::string>(), where + ": followup date"),
                    birads);
            }
            entries.push_back(std::move(entry));
        } catch (const json::exception& e) {
            throw ParseError(where + ": " + e.what());
        }
    }
    return entries;
}

AttributeSchema load_schema(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded()) throw ParseError(path.string() + ": invalid JSON");
    AttributeSchema schema;
    try {
        for (const auto& attr : doc.at("attributes")) {
            AttributeDef def;
            def.name = attr.at("name").get<std::string>();
            for (const auto& value : attr.at("values")) {
                def.values.push_back(value.get<std::string>());
            }
            if (attr.contains("high_prevalence_value") &&
                !attr["high_prevalence_value"].is_null()) {
                def.high_prevalence_value = attr["high_prevalence_value"].get<std::string>();
            }
            std::vector<std::string> unique = def.values;
            std::sort(unique.begin(), unique.end());
            unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
            if (unique.size() < 2) {
                throw ValidationError(path.string() + ": attribute \"" + def.name +
                                      "\" needs at least 2 distinct values");
            }
            if (unique.size() != def.values.size()) {
                throw ValidationError(path.string() + ": attribute \"" + def.name +
                                      "\" lists duplicate values");
            }
            if (def.high_prevalence_value && !def.has_value(*def.high_prevalence_value)) {
                throw ValidationError(path.string() + ": attribute \"" + def.name +
                                      "\": high_prevalence_value \"" +
                                      *def.high_prevalence_value + "\" not among values");
            }
            if (schema.find(def.name) != nullptr) {
                throw ValidationError(path.string() + ": duplicate attribute \"" + def.name +
                                      "\"");
            }
            schema.attributes.push_back(std::move(def));
        }
    } catch (const json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    if (schema.attributes.empty()) {
        throw ValidationError(path.string() + ": schema declares no attributes");
    }
    return schema;
}

std::string Violation::describe() const {
    if (kind == Kind::kMissingAttribute) {
        return "exam " + exam_id + ": missing attribute \"" + attribute + "\"";
    }
    return "exam " + exam_id + ": attribute \"" + attribute + "\" has undeclared value \"" +
           value + "\"";
}

ValidationReport validate_against_schema(std::span<const ExamRecord> exams,
                                         const AttributeSchema& schema) {
    ValidationReport report;
    for (const auto& exam : exams) {
        for (const auto& def : schema.attributes) {
            const std::string* value = exam.attribute(def.name);
            if (value == nullptr) {
                report.violations.push_back(
                    {exam.exam_id, Violation::Kind::kMissingAttribute, def.name, ""});
            } else if (!def.has_value(*value)) {
                report.violations.push_back(
                    {exam.exam_id, Violation::Kind::kUndeclaredValue, def.name, *value});
            }
        }
    }
    return report;
}

std::vector<ExamRecord> labeled_only(std::span<const ExamRecord> exams) {
    std::vector<ExamRecord> result;
    result.reserve(exams.size());
    for (const auto& exam : exams) {
        if (exam.label != Label::kUnknown) result.push_back(exam);
    }
    return result;
}

}  // namespace shortcut_audit::ingest
