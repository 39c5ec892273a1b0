// Copyright 2026 shortcut-audit contributors
// SPDX-License-Identifier: Apache-2.0

#include "shortcut_audit/report.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "shortcut_audit/csv.hpp"
#include "shortcut_audit/errors.hpp"
#include "shortcut_audit/version.hpp"

namespace shortcut_audit::report {

std::string sha256_file_hex(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string() + " for digesting");
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (ctx == nullptr || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
        EVP_MD_CTX_free(ctx);
        throw Error("sha256 init failed");
    }
    char buffer[1 << 16];
    while (in) {
        in.read(buffer, sizeof(buffer));
        const std::streamsize got = in.gcount();
        if (got > 0) EVP_DigestUpdate(ctx, buffer, static_cast<std::size_t>(got));
    }
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    EVP_DigestFinal_ex(ctx, digest, &length);
    EVP_MD_CTX_free(ctx);
    std::string hex;
    hex.reserve(length * 2);
    for (unsigned int i = 0; i < length; ++i) {
        char byte[3];
        std::snprintf(byte, sizeof(byte), "%02x", digest[i]);
        hex.append(byte, 2);
    }
    return hex;
}

json manifest_json(const Manifest& manifest) {
    json inputs = json::array();
    for (const auto& [path, digest] : manifest.input_digests) {
        inputs.push_back({{"path", path}, {"sha256", digest}});
    }
    return json{{"command", manifest.command},
                {"tool_version", manifest.tool_version.empty() ? kVersion
                                                               : manifest.tool_version},
                {"seed", manifest.seed},
                {"inputs", inputs},
                {"parameters", manifest.parameters}};
}

json manifest_sidecar_json(const Manifest& manifest) {
    json doc = manifest_json(manifest);
    const auto now = std::chrono::system_clock::now();
    const auto seconds = std::chrono::floor<std::chrono::seconds>(now);
    const std::time_t time = std::chrono::system_clock::to_time_t(seconds);
    std::tm utc{};
    gmtime_r(&time, &utc);
    char stamp[32];
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &utc);
    doc["timestamp"] = stamp;
    return doc;
}

json to_json(const stats::ConfidenceInterval& ci) {
    return json{{"point", ci.point},
                {"lower", ci.lower},
                {"upper", ci.upper},
                {"replicates", ci.replicates},
                {"level", ci.level},
                {"discarded_degenerate", ci.discarded_degenerate}};
}

namespace {

json optional_ci(const std::optional<stats::ConfidenceInterval>& ci) {
    return ci ? to_json(*ci) : json(nullptr);
}

json quartiles_json(const std::optional<stats::Quartiles>& q) {
    if (!q) return json(nullptr);
    return json{{"q1", q->q1}, {"median", q->median}, {"q3", q->q3}};
}

}  // namespace

json to_json(const audit::PrevalenceTable& table) {
    json rows = json::array();
    for (const auto& row : table.rows) {
        rows.push_back({{"value", row.value},
                        {"prevalence", row.prevalence},
                        {"positive_count", row.positive_count},
                        {"total_count", row.total_count}});
    }
    return json{{"attribute", table.attribute},
                {"rows", rows},
                {"empty_values", table.empty_values}};
}

json to_json(const audit::DistributionComparison& cmp) {
    json values = json::array();
    for (const auto& value : cmp.per_value) {
        values.push_back({{"value", value.value},
                          {"positives",
                           {{"count", value.positives.count},
                            {"quartiles", quartiles_json(value.positives.quartiles)}}},
                          {"negatives",
                           {{"count", value.negatives.count},
                            {"quartiles", quartiles_json(value.negatives.quartiles)}}}});
    }
    json pairs = json::array();
    for (const auto& entry : cmp.pairwise_ks) {
        pairs.push_back({{"value_a", entry.value_a},
                         {"value_b", entry.value_b},
                         {"positives_ks",
                          entry.positives_ks ? json(*entry.positives_ks) : json(nullptr)},
                         {"negatives_ks",
                          entry.negatives_ks ? json(*entry.negatives_ks) : json(nullptr)}});
    }
    return json{{"attribute", cmp.attribute}, {"per_value", values}, {"pairwise_ks", pairs}};
}

json to_json(const audit::BiasGapReport& gap) {
    return json{{"attribute", gap.attribute},
                {"high_value", gap.high_value},
                {"aligned_auc", optional_ci(gap.aligned_auc)},
                {"conflicting_auc", optional_ci(gap.conflicting_auc)},
                {"gap", gap.gap ? json(*gap.gap) : json(nullptr)}};
}

json to_json(const audit::StratifiedAucReport& strat) {
    json strata = json::array();
    for (const auto& stratum : strat.strata) {
        strata.push_back({{"value", stratum.value},
                          {"positives", stratum.positives},
                          {"negatives", stratum.negatives},
                          {"auc", optional_ci(stratum.auc)}});
    }
    return json{{"attribute", strat.attribute},
                {"strata", strata},
                {"combined", to_json(strat.combined)},
                {"paradox_flag", strat.paradox_flag}};
}

json to_json(const audit::CompositionCurve& curve) {
    json points = json::array();
    for (const auto& point : curve.points) {
        points.push_back({{"fraction", point.fraction},
                          {"mean_auc", point.mean_auc ? json(*point.mean_auc) : json(nullptr)},
                          {"std_auc", point.std_auc ? json(*point.std_auc) : json(nullptr)},
                          {"subsets", point.subsets}});
    }
    return json{{"attribute", curve.attribute},
                {"high_value", curve.high_value},
                {"evaluation_size", curve.evaluation_size},
                {"points", points}};
}

json audit_report_json(const Manifest& manifest, const std::vector<AttributeAudit>& audits) {
    json attributes = json::array();
    for (const auto& a : audits) {
        attributes.push_back({{"attribute", a.prevalence.attribute},
                              {"prevalence", to_json(a.prevalence)},
                              {"distribution", to_json(a.distribution)},
                              {"bias_gap", to_json(a.bias_gap)},
                              {"stratified", to_json(a.stratified)},
                              {"composition", to_json(a.composition)}});
    }
    return json{{"manifest", manifest_json(manifest)}, {"attributes", attributes}};
}

namespace {

std::string round3(const json& number) {
    if (number.is_null()) return "-";
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.3f", number.get<double>());
    return buffer;
}

std::string ci_cell(const json& ci) {
    if (ci.is_null()) return "undefined";
    return round3(ci["point"]) + " [" + round3(ci["lower"]) + ", " + round3(ci["upper"]) + "]";
}

}  // namespace

std::string audit_report_markdown(const json& report) {
    std::ostringstream md;
    md << "# Bias audit report\n\n";
    md << "Seed " << report["manifest"]["seed"] << ", tool version "
       << report["manifest"]["tool_version"].get<std::string>() << ".\n";
    for (const auto& attribute : report["attributes"]) {
        const std::string name = attribute["attribute"].get<std::string>();
        md << "\n## Attribute `" << name << "`\n";

        md << "\n### Prevalence\n\n";
        md << "| value | prevalence | positives | total |\n";
        md << "|---|---|---|---|\n";
        for (const auto& row : attribute["prevalence"]["rows"]) {
            md << "| " << row["value"].get<std::string>() << " | "
               << round3(row["prevalence"]) << " | " << row["positive_count"] << " | "
               << row["total_count"] << " |\n";
        }

        md << "\n### Score distributions (KS per class)\n\n";
        md << "| pair | KS positives | KS negatives |\n";
        md << "|---|---|---|\n";
        for (const auto& pair : attribute["distribution"]["pairwise_ks"]) {
            md << "| " << pair["value_a"].get<std::string>() << " vs "
               << pair["value_b"].get<std::string>() << " | " << round3(pair["positives_ks"])
               << " | " << round3(pair["negatives_ks"]) << " |\n";
        }

        const auto& gap = attribute["bias_gap"];
        md << "\n### Bias-aligned vs bias-conflicting (high value `"
           << gap["high_value"].get<std::string>() << "`)\n\n";
        md << "| subset | AUC [CI] |\n|---|---|\n";
        md << "| aligned | " << ci_cell(gap["aligned_auc"]) << " |\n";
        md << "| conflicting | " << ci_cell(gap["conflicting_auc"]) << " |\n";
        md << "| gap | " << round3(gap["gap"]) << " |\n";

        const auto& strat = attribute["stratified"];
        md << "\n### Stratified AUC\n\n";
        md << "| stratum | positives | negatives | AUC [CI] |\n|---|---|---|---|\n";
        for (const auto& stratum : strat["strata"]) {
            md << "| " << stratum["value"].get<std::string>() << " | " << stratum["positives"]
               << " | " << stratum["negatives"] << " | " << ci_cell(stratum["auc"]) << " |\n";
        }
        md << "| combined | | | " << ci_cell(strat["combined"]) << " |\n";
        md << "\nAUC paradox flag: **" << (strat["paradox_flag"].get<bool>() ? "yes" : "no")
           << "**\n";
    }
    return md.str();
}

void write_text(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << content;
}

std::string prevalence_csv(const audit::PrevalenceTable& table) {
    std::ostringstream out;
    out << "attribute,value,positive_count,total_count,prevalence\n";
    for (const auto& row : table.rows) {
        out << csv::escape(table.attribute) << ',' << csv::escape(row.value) << ','
            << row.positive_count << ',' << row.total_count << ','
            << csv::format_double(row.prevalence) << '\n';
    }
    return out.str();
}

std::string distribution_csv(const audit::DistributionComparison& cmp) {
    std::ostringstream out;
    out << "attribute,value,class,count,q1,median,q3\n";
    auto emit = [&](const std::string& value, const char* cls,
                    const audit::ClassSummary& summary) {
        out << csv::escape(cmp.attribute) << ',' << csv::escape(value) << ',' << cls << ','
            << summary.count << ',';
        if (summary.quartiles) {
            out << csv::format_double(summary.quartiles->q1) << ','
                << csv::format_double(summary.quartiles->median) << ','
                << csv::format_double(summary.quartiles->q3);
        } else {
            out << ",,";
        }
        out << '\n';
    };
    for (const auto& value : cmp.per_value) {
        emit(value.value, "positive", value.positives);
        emit(value.value, "negative", value.negatives);
    }
    return out.str();
}

std::string ks_csv(const audit::DistributionComparison& cmp) {
    std::ostringstream out;
    out << "attribute,value_a,value_b,class,ks\n";
    for (const auto& entry : cmp.pairwise_ks) {
        out << csv::escape(cmp.attribute) << ',' << csv::escape(entry.value_a) << ','
            << csv::escape(entry.value_b) << ",positive,"
            << (entry.positives_ks ? csv::format_double(*entry.positives_ks) : "") << '\n';
        out << csv::escape(cmp.attribute) << ',' << csv::escape(entry.value_a) << ','
            << csv::escape(entry.value_b) << ",negative,"
            << (entry.negatives_ks ? csv::format_double(*entry.negatives_ks) : "") << '\n';
    }
    return out.str();
}

std::string composition_csv(const audit::CompositionCurve& curve) {
    std::ostringstream out;
    out << "attribute,high_value,fraction,mean_auc,std_auc,subsets\n";
    for (const auto& point : curve.points) {
        out << csv::escape(curve.attribute) << ',' << csv::escape(curve.high_value) << ','
            << csv::format_double(point.fraction) << ','
            << (point.mean_auc ? csv::format_double(*point.mean_auc) : "") << ','
            << (point.std_auc ? csv::format_double(*point.std_auc) : "") << ','
            << point.subsets << '\n';
    }
    return out.str();
}

std::string sweep_grid_csv(std::span<const binormal::SweepGrid> grids) {
    std::ostringstream out;
    if (grids.empty()) return "";
    const auto& first = grids.front();
    out << first.plane_name << ',' << first.axis1_name << ',' << first.axis2_name
        << ",mean_delta,std_delta,repetitions\n";
    for (const auto& grid : grids) {
        for (std::size_t i1 = 0; i1 < grid.axis1.size(); ++i1) {
            for (std::size_t i2 = 0; i2 < grid.axis2.size(); ++i2) {
                const auto& cell = grid.cell(i1, i2);
                out << csv::format_double(grid.plane_value) << ','
                    << csv::format_double(grid.axis1[i1]) << ','
                    << csv::format_double(grid.axis2[i2]) << ','
                    << csv::format_double(cell.mean_delta) << ','
                    << csv::format_double(cell.std_delta) << ',' << cell.repetitions << '\n';
            }
        }
    }
    return out.str();
}

std::string zero_crossings_csv(std::span<const binormal::ZeroCrossing> crossings,
                               const binormal::SweepGrid& grid) {
    std::ostringstream out;
    out << grid.plane_name << ',' << grid.axis1_name << ',' << grid.axis2_name << "_crossing\n";
    for (const auto& crossing : crossings) {
        out << csv::format_double(crossing.plane_value) << ','
            << csv::format_double(crossing.axis1_value) << ','
            << csv::format_double(crossing.axis2_value) << '\n';
    }
    return out.str();
}

std::string weight_table_csv(const mitigation::SamplingWeightTable& table) {
    std::ostringstream out;
    out << "exam_id,weight\n";
    for (const auto& row : table.rows) {
        out << csv::escape(row.exam_id) << ',' << csv::format_double(row.weight) << '\n';
    }
    return out.str();
}

json weight_sidecar_json(const Manifest& manifest, const mitigation::SamplingWeightTable& table) {
    json cells = json::array();
    for (const auto& cell : table.cells) {
        cells.push_back({{"value", cell.value},
                         {"label", to_string(cell.label)},
                         {"count", cell.count},
                         {"cell_mass", cell.cell_mass},
                         {"per_record_weight", cell.per_record_weight}});
    }
    return json{{"manifest", manifest_json(manifest)},
                {"grouping", {{"attribute", table.attribute}, {"labels", {"cancer", "non_cancer"}}}},
                {"semantics",
                 "per-draw multinomial mass: sampling exams with these probabilities draws "
                 "each (value,label) cell equally often in expectation"},
                {"cells", cells}};
}

json probe_report_json(const Manifest& manifest, const probe::TrainResult& result,
                       double train_auc, std::optional<double> test_auc, std::size_t train_size,
                       std::size_t test_size) {
    return json{{"manifest", manifest_json(manifest)},
                {"dimension", result.model.weights.size()},
                {"train_size", train_size},
                {"test_size", test_size},
                {"l2_penalty", result.model.l2_penalty},
                {"iterations_run", result.model.iterations_run},
                {"final_loss", result.loss_trace.back()},
                {"loss_trace", result.loss_trace},
                {"train_auc", train_auc},
                {"test_auc", test_auc ? json(*test_auc) : json(nullptr)}};
}

}  // namespace shortcut_audit::report
