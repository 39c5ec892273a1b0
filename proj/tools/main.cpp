// Copyright 2026 shortcut-audit contributors
// SPDX-License-Identifier: Apache-2.0
//
// shortcut-audit: score-level bias audit for binary classifiers.
// Exit codes: 0 success, 2 invalid input or parameters, 1 internal error.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "shortcut_audit/audit.hpp"
#include "shortcut_audit/binormal.hpp"
#include "shortcut_audit/csv.hpp"
#include "shortcut_audit/errors.hpp"
#include "shortcut_audit/ingest.hpp"
#include "shortcut_audit/mitigation.hpp"
#include "shortcut_audit/probe.hpp"
#include "shortcut_audit/report.hpp"
#include "shortcut_audit/rng.hpp"
#include "shortcut_audit/version.hpp"

namespace sa = shortcut_audit;
namespace fs = std::filesystem;
using sa::report::json;

namespace {

std::string join_command(int argc, char** argv) {
    std::string command;
    for (int i = 0; i < argc; ++i) {
        if (i > 0) command.push_back(' ');
        command += argv[i];
    }
    return command;
}

sa::report::Manifest make_manifest(const std::string& command, std::uint64_t seed,
                                   const std::vector<fs::path>& inputs, json parameters) {
    sa::report::Manifest manifest;
    manifest.command = command;
    manifest.tool_version = sa::kVersion;
    manifest.seed = seed;
    for (const auto& path : inputs) {
        manifest.input_digests.emplace_back(path.string(), sa::report::sha256_file_hex(path));
    }
    manifest.parameters = std::move(parameters);
    return manifest;
}

void write_json(const fs::path& path, const json& doc) {
    sa::report::write_text(path, doc.dump(2) + "\n");
}

std::vector<sa::ExamRecord> load_validated_exams(const fs::path& predictions,
                                                 const fs::path& schema_path,
                                                 sa::AttributeSchema& schema) {
    schema = sa::ingest::load_schema(schema_path);
    std::vector<sa::ExamRecord> exams = sa::ingest::parse_exam_csv(predictions);
    const auto report = sa::ingest::validate_against_schema(exams, schema);
    if (!report.valid()) {
        std::size_t shown = 0;
        for (const auto& violation : report.violations) {
            if (shown++ == 20) {
                std::cerr << "... and " << report.violations.size() - 20 << " more\n";
                break;
            }
            std::cerr << "validation: " << violation.describe() << '\n';
        }
        throw sa::ValidationError(predictions.string() + ": " +
                                  std::to_string(report.violations.size()) +
                                  " schema violation(s)");
    }
    return exams;
}

struct AuditArgs {
    std::string predictions;
    std::string schema;
    std::string attribute = "all";
    int bootstrap = 10000;
    double level = 0.95;
    bool stratified = false;
    std::uint64_t seed = 0;
    int composition_points = 11;
    int subsets_per_point = 10;
    std::string out;
};

int run_audit(const AuditArgs& args, const std::string& command) {
    sa::AttributeSchema schema;
    const auto exams = load_validated_exams(args.predictions, args.schema, schema);
    const auto labeled = sa::ingest::labeled_only(exams);
    if (labeled.empty()) {
        throw sa::ValidationError("no labeled (cancer/non_cancer) exams in " + args.predictions);
    }

    std::vector<std::string> attributes;
    if (args.attribute == "all") {
        for (const auto& def : schema.attributes) attributes.push_back(def.name);
    } else {
        attributes.push_back(args.attribute);
    }

    sa::stats::BootstrapOptions bootstrap;
    bootstrap.replicates = args.bootstrap;
    bootstrap.level = args.level;
    bootstrap.stratified = args.stratified;

    std::vector<double> fractions;
    for (int i = 0; i < args.composition_points; ++i) {
        fractions.push_back(args.composition_points == 1
                                ? 0.0
                                : static_cast<double>(i) / (args.composition_points - 1));
    }

    const fs::path out_dir(args.out);
    fs::create_directories(out_dir);

    std::vector<sa::report::AttributeAudit> audits;
    for (std::size_t ai = 0; ai < attributes.size(); ++ai) {
        const std::string& attribute = attributes[ai];
        const std::string high = sa::audit::default_high_value(labeled, schema, attribute);
        sa::stats::BootstrapOptions attr_bootstrap = bootstrap;
        attr_bootstrap.seed = sa::derive_seed(args.seed, 1000 + ai);

        sa::report::AttributeAudit audit;
        audit.prevalence = sa::audit::prevalence_table(labeled, schema, attribute);
        audit.distribution = sa::audit::distribution_comparison(labeled, schema, attribute);
        audit.bias_gap = sa::audit::bias_gap(labeled, schema, attribute, high, attr_bootstrap);
        audit.stratified =
            sa::audit::stratified_auc_report(labeled, schema, attribute, attr_bootstrap);
        audit.composition = sa::audit::composition_sweep(
            labeled, schema, attribute, high, fractions, args.subsets_per_point,
            sa::derive_seed(args.seed, 2000 + ai));
        audits.push_back(std::move(audit));

        sa::report::write_text(out_dir / ("prevalence_" + attribute + ".csv"),
                               sa::report::prevalence_csv(audits.back().prevalence));
        sa::report::write_text(out_dir / ("distribution_" + attribute + ".csv"),
                               sa::report::distribution_csv(audits.back().distribution));
        sa::report::write_text(out_dir / ("ks_" + attribute + ".csv"),
                               sa::report::ks_csv(audits.back().distribution));
        sa::report::write_text(out_dir / ("composition_" + attribute + ".csv"),
                               sa::report::composition_csv(audits.back().composition));
    }

    const auto manifest = make_manifest(
        command, args.seed, {args.predictions, args.schema},
        json{{"attribute", args.attribute},
             {"bootstrap", args.bootstrap},
             {"level", args.level},
             {"stratified", args.stratified},
             {"composition_points", args.composition_points},
             {"subsets_per_point", args.subsets_per_point},
             {"evaluation_size_convention", "composition subsets match the input set size"}});
    const json report = sa::report::audit_report_json(manifest, audits);
    write_json(out_dir / "report.json", report);
    sa::report::write_text(out_dir / "report.md", sa::report::audit_report_markdown(report));
    write_json(out_dir / "manifest.json", sa::report::manifest_sidecar_json(manifest));
    return 0;
}

struct SimulateArgs {
    std::string mode = "prevalence-bias";
    std::string preset = "desk";
    std::vector<double> target_aucs;
    std::vector<double> m_values;
    std::optional<int> repetitions;
    std::optional<std::uint32_t> size_lo;
    std::optional<std::uint32_t> size_hi;
    std::optional<int> prevalence_count;
    std::optional<int> bias_count;
    std::optional<int> p_count;
    std::uint64_t seed = 0;
    std::string out;
};

int run_simulate(const SimulateArgs& args, const std::string& command) {
    sa::binormal::SweepConfig config;
    sa::binormal::Linspace prevalence_axis{0.10, 0.99, 19};
    sa::binormal::Linspace bias_axis{0.0, 4.0, 21};
    sa::binormal::Linspace p_axis{0.0, 1.0, 21};
    std::vector<double> targets = {0.7};
    std::vector<double> m_values = {0.0, 0.1, 0.5, 1.0, 2.0};
    config.repetitions = 20;
    config.size_lo = 1000;
    config.size_hi = 4000;

    if (args.preset == "paper-fig5b") {
        prevalence_axis = {0.10, 0.99, 90};
        bias_axis = {0.0, 4.0, 101};
        config.repetitions = 100;
        config.size_lo = 10000;
        config.size_hi = 40000;
        targets = {0.7, 0.8, 0.9};
    } else if (args.preset == "paper-supp5") {
        p_axis = {0.0, 1.0, 101};
        config.repetitions = 100;
        config.size_lo = 100;
        config.size_hi = 10000;
    } else if (args.preset != "desk") {
        throw sa::InvalidArgument("unknown preset \"" + args.preset +
                                  "\"; expected desk, paper-fig5b or paper-supp5");
    }

    if (!args.target_aucs.empty()) targets = args.target_aucs;
    if (!args.m_values.empty()) m_values = args.m_values;
    if (args.repetitions) config.repetitions = *args.repetitions;
    if (args.size_lo) config.size_lo = *args.size_lo;
    if (args.size_hi) config.size_hi = *args.size_hi;
    if (args.prevalence_count) prevalence_axis.count = *args.prevalence_count;
    if (args.bias_count) bias_axis.count = *args.bias_count;
    if (args.p_count) p_axis.count = *args.p_count;
    config.seed = args.seed;

    for (double target : targets) {
        if (!(target > 0.0 && target < 1.0)) {
            throw sa::InvalidArgument("--target-auc must lie strictly inside (0,1), got " +
                                      std::to_string(target));
        }
    }

    std::vector<sa::binormal::SweepGrid> grids;
    if (args.mode == "prevalence-bias") {
        grids = sa::binormal::run_prevalence_bias_sweep(targets, prevalence_axis, bias_axis,
                                                        config);
    } else if (args.mode == "p0p1") {
        if (targets.size() != 1) {
            throw sa::InvalidArgument("p0p1 mode sweeps a single --target-auc");
        }
        grids = sa::binormal::run_p0p1_sweep(targets.front(), m_values, p_axis, config);
    } else {
        throw sa::InvalidArgument("unknown --mode \"" + args.mode +
                                  "\"; expected prevalence-bias or p0p1");
    }

    const fs::path out_dir(args.out);
    fs::create_directories(out_dir);
    sa::report::write_text(out_dir / "grid.csv", sa::report::sweep_grid_csv(grids));

    std::vector<sa::binormal::ZeroCrossing> crossings;
    for (const auto& grid : grids) {
        const auto grid_crossings = sa::binormal::find_zero_crossings(grid);
        crossings.insert(crossings.end(), grid_crossings.begin(), grid_crossings.end());
    }
    sa::report::write_text(out_dir / "zero_crossings.csv",
                           sa::report::zero_crossings_csv(crossings, grids.front()));

    const auto manifest = make_manifest(
        command, args.seed, {},
        json{{"mode", args.mode},
             {"preset", args.preset},
             {"target_aucs", targets},
             {"m_values", args.mode == "p0p1" ? json(m_values) : json(nullptr)},
             {"repetitions", config.repetitions},
             {"size_lo", config.size_lo},
             {"size_hi", config.size_hi},
             {"prevalence_axis", {{"lo", prevalence_axis.lo},
                                  {"hi", prevalence_axis.hi},
                                  {"count", prevalence_axis.count}}},
             {"bias_axis",
              {{"lo", bias_axis.lo}, {"hi", bias_axis.hi}, {"count", bias_axis.count}}},
             {"p_axis", {{"lo", p_axis.lo}, {"hi", p_axis.hi}, {"count", p_axis.count}}}});
    write_json(out_dir / "manifest.json", sa::report::manifest_sidecar_json(manifest));
    return 0;
}

struct ProbeArgs {
    std::string train;
    std::string test;
    double l2 = 1.0;
    int iterations = 500;
    std::uint64_t seed = 0;
    std::string out;
};

int run_probe(const ProbeArgs& args, const std::string& command) {
    const auto train = sa::probe::parse_features(args.train);
    const auto test = sa::probe::parse_features(args.test);

    sa::probe::TrainOptions options;
    options.l2 = args.l2;
    options.iterations = args.iterations;
    options.seed = args.seed;
    const auto result = sa::probe::train_probe(train, options);

    const auto train_auc = sa::probe::eval_probe(result.model, train);
    const auto test_auc = sa::probe::eval_probe(result.model, test);

    const fs::path out_dir(args.out);
    fs::create_directories(out_dir);
    const auto manifest = make_manifest(command, args.seed, {args.train, args.test},
                                        json{{"l2", args.l2}, {"iterations", args.iterations}});
    write_json(out_dir / "probe_report.json",
               sa::report::probe_report_json(manifest, result, train_auc.value_or(0.5), test_auc,
                                             train.size(), test.size()));
    write_json(out_dir / "manifest.json", sa::report::manifest_sidecar_json(manifest));
    if (test_auc) {
        std::cout << "probe test AUC: " << *test_auc << '\n';
    } else {
        std::cout << "probe test AUC: undefined (single-class test set)\n";
    }
    return 0;
}

int run_balance(const std::string& predictions, const std::string& schema_path,
                const std::string& attribute, const std::string& out,
                const std::string& command) {
    sa::AttributeSchema schema;
    const auto exams = load_validated_exams(predictions, schema_path, schema);
    const auto table = sa::mitigation::balanced_weights(exams, schema, attribute);

    const fs::path out_path(out);
    if (out_path.has_parent_path()) fs::create_directories(out_path.parent_path());
    sa::report::write_text(out_path, sa::report::weight_table_csv(table));
    const auto manifest = make_manifest(command, 0, {predictions, schema_path},
                                        json{{"attribute", attribute}});
    fs::path sidecar = out_path;
    sidecar.replace_extension(".json");
    write_json(sidecar, sa::report::weight_sidecar_json(manifest, table));
    return 0;
}

int run_label(const std::string& history_path, const std::string& out,
              const std::string& command) {
    const auto entries = sa::ingest::parse_history_jsonl(history_path);
    std::string csv = "exam_id,label\n";
    for (const auto& entry : entries) {
        csv += entry.exam_id;
        csv += ',';
        csv += sa::to_string(sa::ingest::label_exam(entry.history, entry.exam_birads));
        csv += '\n';
    }
    const fs::path out_path(out);
    if (out_path.has_parent_path()) fs::create_directories(out_path.parent_path());
    sa::report::write_text(out_path, csv);
    const auto manifest = make_manifest(command, 0, {history_path}, json::object());
    write_json(fs::path(out + ".manifest.json"), sa::report::manifest_sidecar_json(manifest));
    return 0;
}

int run_aggregate(const std::string& images_path, const std::string& out,
                  const std::string& command) {
    const auto images = sa::ingest::parse_image_scores(images_path);
    const auto scores = sa::ingest::aggregate_exams(images);
    std::string csv = "exam_id,score\n";
    for (const auto& [exam_id, score] : scores) {
        csv += exam_id;
        csv += ',';
        csv += sa::csv::format_double(score);
        csv += '\n';
    }
    const fs::path out_path(out);
    if (out_path.has_parent_path()) fs::create_directories(out_path.parent_path());
    sa::report::write_text(out_path, csv);
    const auto manifest = make_manifest(command, 0, {images_path}, json::object());
    write_json(fs::path(out + ".manifest.json"), sa::report::manifest_sidecar_json(manifest));
    return 0;
}

int run_filter(const std::string& predictions, const std::string& schema_path,
               const std::string& attribute, const std::string& keep, const std::string& out,
               const std::string& command) {
    sa::AttributeSchema schema;
    const auto exams = load_validated_exams(predictions, schema_path, schema);
    if (schema.find(attribute) == nullptr) {
        throw sa::ValidationError("attribute \"" + attribute +
                                  "\" is not declared in the schema");
    }
    const auto result = sa::mitigation::filter_by_attribute(exams, attribute, keep);
    const fs::path out_path(out);
    if (out_path.has_parent_path()) fs::create_directories(out_path.parent_path());
    sa::ingest::write_exam_csv(out_path, result.kept);
    const auto manifest =
        make_manifest(command, 0, {predictions, schema_path},
                      json{{"attribute", attribute},
                           {"keep", keep},
                           {"kept", result.kept.size()},
                           {"removed", result.removed}});
    write_json(fs::path(out + ".manifest.json"), sa::report::manifest_sidecar_json(manifest));
    std::cout << "kept " << result.kept.size() << ", removed " << result.removed << '\n';
    return 0;
}

int run_match_prevalence(const std::string& predictions, const std::string& schema_path,
                         const std::string& attribute, double target, std::uint64_t seed,
                         const std::string& out, const std::string& command) {
    sa::AttributeSchema schema;
    const auto exams = load_validated_exams(predictions, schema_path, schema);
    const auto labeled = sa::ingest::labeled_only(exams);
    const auto matched =
        sa::mitigation::prevalence_matched_eval(labeled, schema, attribute, target, seed);
    const fs::path out_path(out);
    if (out_path.has_parent_path()) fs::create_directories(out_path.parent_path());
    sa::ingest::write_exam_csv(out_path, matched);
    const auto manifest = make_manifest(command, seed, {predictions, schema_path},
                                        json{{"attribute", attribute},
                                             {"target_prevalence", target},
                                             {"kept", matched.size()}});
    write_json(fs::path(out + ".manifest.json"), sa::report::manifest_sidecar_json(manifest));
    std::cout << "kept " << matched.size() << " of " << labeled.size() << " labeled exams\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    const std::string command = join_command(argc, argv);
    CLI::App app{"shortcut-audit: score-level bias audit for binary classifiers"};
    app.set_version_flag("--version", sa::kVersion);
    app.require_subcommand(1);

    AuditArgs audit_args;
    auto* cmd_audit = app.add_subcommand("audit", "Run the shortcut-detection battery");
    cmd_audit->add_option("--predictions", audit_args.predictions, "Exam CSV")->required();
    cmd_audit->add_option("--schema", audit_args.schema, "Attribute schema JSON")->required();
    cmd_audit->add_option("--attribute", audit_args.attribute,
                          "Attribute name, or 'all' for every declared attribute");
    cmd_audit->add_option("--bootstrap", audit_args.bootstrap, "Bootstrap replicates")
        ->check(CLI::PositiveNumber);
    cmd_audit->add_option("--level", audit_args.level, "Confidence level");
    cmd_audit->add_flag("--stratified-bootstrap", audit_args.stratified,
                        "Resample within classes instead of the pooled set");
    cmd_audit->add_option("--seed", audit_args.seed, "RNG seed");
    cmd_audit->add_option("--composition-points", audit_args.composition_points,
                          "Points on the composition sweep")
        ->check(CLI::PositiveNumber);
    cmd_audit->add_option("--subsets-per-point", audit_args.subsets_per_point,
                          "Random subsets per composition point")
        ->check(CLI::PositiveNumber);
    cmd_audit->add_option("--out", audit_args.out, "Output directory")->required();

    SimulateArgs sim_args;
    auto* cmd_simulate = app.add_subcommand("simulate", "Binormal AUC-paradox sweeps");
    cmd_simulate->add_option("--mode", sim_args.mode, "prevalence-bias or p0p1");
    cmd_simulate->add_option("--preset", sim_args.preset, "desk, paper-fig5b or paper-supp5");
    cmd_simulate->add_option("--target-auc", sim_args.target_aucs, "Target AUC(s)")
        ->delimiter(',');
    cmd_simulate->add_option("--m", sim_args.m_values, "Model bias values (p0p1 mode)")
        ->delimiter(',');
    cmd_simulate->add_option("--repetitions", sim_args.repetitions, "Simulations per cell");
    cmd_simulate->add_option("--size-lo", sim_args.size_lo, "Lower bound of random sizes");
    cmd_simulate->add_option("--size-hi", sim_args.size_hi, "Upper bound of random sizes");
    cmd_simulate->add_option("--prevalence-count", sim_args.prevalence_count,
                             "Prevalence axis length");
    cmd_simulate->add_option("--bias-count", sim_args.bias_count, "Bias axis length");
    cmd_simulate->add_option("--p-count", sim_args.p_count, "p0/p1 axis length");
    cmd_simulate->add_option("--seed", sim_args.seed, "RNG seed");
    cmd_simulate->add_option("--out", sim_args.out, "Output directory")->required();

    ProbeArgs probe_args;
    auto* cmd_probe = app.add_subcommand("probe", "Logistic-regression attribute probe");
    cmd_probe->add_option("--train", probe_args.train, "Training feature file")->required();
    cmd_probe->add_option("--test", probe_args.test, "Evaluation feature file")->required();
    cmd_probe->add_option("--l2", probe_args.l2, "L2 penalty");
    cmd_probe->add_option("--iterations", probe_args.iterations, "Gradient-descent iterations");
    cmd_probe->add_option("--seed", probe_args.seed, "RNG seed (recorded)");
    cmd_probe->add_option("--out", probe_args.out, "Output directory")->required();

    std::string balance_predictions, balance_schema, balance_attribute, balance_out;
    auto* cmd_balance = app.add_subcommand("balance", "Balanced sampling-weight table");
    cmd_balance->add_option("--predictions", balance_predictions, "Exam CSV")->required();
    cmd_balance->add_option("--schema", balance_schema, "Attribute schema JSON")->required();
    cmd_balance->add_option("--attribute", balance_attribute, "Attribute to balance")
        ->required();
    cmd_balance->add_option("--out", balance_out, "Output weights CSV")->required();

    std::string label_history, label_out;
    auto* cmd_label = app.add_subcommand("label", "Ground-truth labels from exam histories");
    cmd_label->add_option("--history", label_history, "History JSONL")->required();
    cmd_label->add_option("--out", label_out, "Output labels CSV")->required();

    std::string aggregate_images, aggregate_out;
    auto* cmd_aggregate =
        app.add_subcommand("aggregate", "Exam scores from per-image predictions");
    cmd_aggregate->add_option("--images", aggregate_images, "Image-score CSV")->required();
    cmd_aggregate->add_option("--out", aggregate_out, "Output exam-score CSV")->required();

    std::string filter_predictions, filter_schema, filter_attribute, filter_keep, filter_out;
    auto* cmd_filter = app.add_subcommand("filter", "Keep exams with one attribute value");
    cmd_filter->add_option("--predictions", filter_predictions, "Exam CSV")->required();
    cmd_filter->add_option("--schema", filter_schema, "Attribute schema JSON")->required();
    cmd_filter->add_option("--attribute", filter_attribute, "Attribute name")->required();
    cmd_filter->add_option("--keep", filter_keep, "Value to keep")->required();
    cmd_filter->add_option("--out", filter_out, "Output exam CSV")->required();

    std::string match_predictions, match_schema, match_attribute, match_out;
    double match_target = 0.2;
    std::uint64_t match_seed = 0;
    auto* cmd_match =
        app.add_subcommand("match-prevalence", "Prevalence-matched evaluation set");
    cmd_match->add_option("--predictions", match_predictions, "Exam CSV")->required();
    cmd_match->add_option("--schema", match_schema, "Attribute schema JSON")->required();
    cmd_match->add_option("--attribute", match_attribute, "Attribute name")->required();
    cmd_match->add_option("--target-prevalence", match_target, "Per-value target prevalence")
        ->required();
    cmd_match->add_option("--seed", match_seed, "RNG seed");
    cmd_match->add_option("--out", match_out, "Output exam CSV")->required();

    try {
        app.parse(argc, argv);
        if (*cmd_audit) return run_audit(audit_args, command);
        if (*cmd_simulate) return run_simulate(sim_args, command);
        if (*cmd_probe) return run_probe(probe_args, command);
        if (*cmd_balance) {
            return run_balance(balance_predictions, balance_schema, balance_attribute,
                               balance_out, command);
        }
        if (*cmd_label) return run_label(label_history, label_out, command);
        if (*cmd_aggregate) return run_aggregate(aggregate_images, aggregate_out, command);
        if (*cmd_filter) {
            return run_filter(filter_predictions, filter_schema, filter_attribute, filter_keep,
                              filter_out, command);
        }
        if (*cmd_match) {
            return run_match_prevalence(match_predictions, match_schema, match_attribute,
                                        match_target, match_seed, match_out, command);
        }
        return 1;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const sa::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const sa::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const sa::InvalidArgument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 1;
    }
}
