// Copyright 2026 shortcut-audit contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "shortcut_audit/audit.hpp"
#include "shortcut_audit/binormal.hpp"
#include "shortcut_audit/mitigation.hpp"
#include "shortcut_audit/probe.hpp"

namespace shortcut_audit::report {

using json = nlohmann::ordered_json;

/// Everything needed to reproduce a run. Serialized into every report;
/// the timestamp lives only in the sidecar manifest.json so numeric
/// payloads stay byte-identical across reruns.
struct Manifest {
    std::string command;
    std::string tool_version;
    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, std::string>> input_digests;  // (path, sha256)
    json parameters = json::object();
};

std::string sha256_file_hex(const std::filesystem::path& path);

/// Deterministic manifest fields (no timestamp).
json manifest_json(const Manifest& manifest);
/// manifest_json plus an ISO-8601 UTC timestamp, for the sidecar file.
json manifest_sidecar_json(const Manifest& manifest);

json to_json(const stats::ConfidenceInterval& ci);
json to_json(const audit::PrevalenceTable& table);
json to_json(const audit::DistributionComparison& cmp);
json to_json(const audit::BiasGapReport& gap);
json to_json(const audit::StratifiedAucReport& strat);
json to_json(const audit::CompositionCurve& curve);

/// Full audit battery for one attribute.
struct AttributeAudit {
    audit::PrevalenceTable prevalence;
    audit::DistributionComparison distribution;
    audit::BiasGapReport bias_gap;
    audit::StratifiedAucReport stratified;
    audit::CompositionCurve composition;
};

json audit_report_json(const Manifest& manifest, const std::vector<AttributeAudit>& audits);

/// Markdown summary rendered from the report JSON (never computed
/// independently of it).
std::string audit_report_markdown(const json& report);

void write_text(const std::filesystem::path& path, const std::string& content);

// Plot-ready CSV emitters.
std::string prevalence_csv(const audit::PrevalenceTable& table);
std::string distribution_csv(const audit::DistributionComparison& cmp);
std::string ks_csv(const audit::DistributionComparison& cmp);
std::string composition_csv(const audit::CompositionCurve& curve);
std::string sweep_grid_csv(std::span<const binormal::SweepGrid> grids);
std::string zero_crossings_csv(std::span<const binormal::ZeroCrossing> crossings,
                               const binormal::SweepGrid& grid);
std::string weight_table_csv(const mitigation::SamplingWeightTable& table);
json weight_sidecar_json(const Manifest& manifest, const mitigation::SamplingWeightTable& table);

json probe_report_json(const Manifest& manifest, const probe::TrainResult& result,
                       double train_auc, std::optional<double> test_auc, std::size_t train_size,
                       std::size_t test_size);

}  // namespace shortcut_audit::report
