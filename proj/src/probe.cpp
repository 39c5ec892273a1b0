// Copyright 2026 shortcut-audit contributors
// SPDX-License-Identifier: Apache-2.0

#include "shortcut_audit/probe.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "shortcut_audit/csv.hpp"
#include "shortcut_audit/errors.hpp"
#include "shortcut_audit/kernels.hpp"
#include "shortcut_audit/stats.hpp"

namespace shortcut_audit::probe {

namespace {

constexpr double kScaleFloor = 1e-8;

struct Standardized {
    std::vector<double> matrix;  // n x d, row-major
    std::vector<double> labels;  // 0/1
    std::vector<double> mean;
    std::vector<double> scale;
    std::size_t n = 0;
    std::size_t d = 0;

    std::span<const double> row(std::size_t i) const {
        return {matrix.data() + i * d, d};
    }
};

Standardized standardize(std::span<const FeatureVectorRecord> records) {
    Standardized data;
    data.n = records.size();
    data.d = records.front().vector.size();
    data.mean.assign(data.d, 0.0);
    data.scale.assign(data.d, 0.0);
    data.labels.reserve(data.n);

    for (const auto& record : records) {
        if (record.vector.size() != data.d) {
            throw InvalidArgument("feature dimension mismatch: record \"" + record.id +
                                  "\" has " + std::to_string(record.vector.size()) +
                                  " features, expected " + std::to_string(data.d));
        }
        for (std::size_t j = 0; j < data.d; ++j) data.mean[j] += record.vector[j];
        data.labels.push_back(record.attribute_label ? 1.0 : 0.0);
    }
    for (double& m : data.mean) m /= static_cast<double>(data.n);
    for (const auto& record : records) {
        for (std::size_t j = 0; j < data.d; ++j) {
            const double centered = record.vector[j] - data.mean[j];
            data.scale[j] += centered * centered;
        }
    }
    for (double& s : data.scale) {
        s = std::max(std::sqrt(s / static_cast<double>(data.n)), kScaleFloor);
    }

    data.matrix.resize(data.n * data.d);
    for (std::size_t i = 0; i < data.n; ++i) {
        const auto& v = records[i].vector;
        double* out = data.matrix.data() + i * data.d;
        for (std::size_t j = 0; j < data.d; ++j) {
            out[j] = (v[j] - data.mean[j]) / data.scale[j];
        }
    }
    return data;
}

struct Objective {
    const Standardized& data;
    double l2;

    void logits(std::span<const double> w, double b, std::vector<double>& z) const {
        z.resize(data.n);
        for (std::size_t i = 0; i < data.n; ++i) {
            z[i] = kernels::dot(data.row(i), w) + b;
        }
    }

    double loss_from_logits(std::span<const double> z, std::span<const double> w) const {
        double total = 0.0;
        for (std::size_t i = 0; i < data.n; ++i) {
            // log(1+exp(z)) - y z, evaluated in the stable branch.
            const double zi = z[i];
            total += std::max(zi, 0.0) - data.labels[i] * zi + std::log1p(std::exp(-std::abs(zi)));
        }
        const double n = static_cast<double>(data.n);
        return total / n + 0.5 * l2 * kernels::dot(w, w) / n;
    }

    /// grad_w = X^T (p - y) / n + l2 w / n; grad_b = mean(p - y).
    /// Row accumulation runs in a fixed order so results are reproducible.
    double gradients(std::span<const double> w, std::span<const double> z,
                     std::vector<double>& grad_w, double& grad_b) const {
        thread_local std::vector<double> probabilities;
        probabilities.resize(data.n);
        kernels::sigmoid(z, probabilities);
        grad_w.assign(data.d, 0.0);
        grad_b = 0.0;
        for (std::size_t i = 0; i < data.n; ++i) {
            const double residual = probabilities[i] - data.labels[i];
            kernels::axpy(residual, data.row(i), grad_w);
            grad_b += residual;
        }
        const double n = static_cast<double>(data.n);
        for (std::size_t j = 0; j < data.d; ++j) {
            grad_w[j] = grad_w[j] / n + l2 * w[j] / n;
        }
        grad_b /= n;
        return kernels::dot(grad_w, grad_w) + grad_b * grad_b;  // squared norm
    }
};

}  // namespace

TrainResult train_probe(std::span<const FeatureVectorRecord> train, const TrainOptions& options) {
    if (train.empty()) throw ValidationError("train_probe: empty training set");
    if (options.l2 < 0.0) throw InvalidArgument("train_probe: l2 must be >= 0");
    if (options.iterations < 0) throw InvalidArgument("train_probe: iterations must be >= 0");
    bool has_positive = false;
    bool has_negative = false;
    for (const auto& record : train) {
        (record.attribute_label ? has_positive : has_negative) = true;
    }
    if (!has_positive || !has_negative) {
        throw ValidationError("train_probe: training set contains a single class");
    }

    const Standardized data = standardize(train);
    const Objective objective{data, options.l2};

    std::vector<double> w(data.d, 0.0);
    double b = 0.0;
    std::vector<double> z;
    objective.logits(w, b, z);
    double loss = objective.loss_from_logits(z, w);

    TrainResult result;
    result.loss_trace.reserve(static_cast<std::size_t>(options.iterations) + 1);
    result.loss_trace.push_back(loss);

    std::vector<double> grad_w;
    std::vector<double> trial_w(data.d);
    std::vector<double> trial_z;
    double step = 1.0;
    constexpr double kArmijo = 1e-4;
    int iterations_run = 0;

    for (int iter = 0; iter < options.iterations; ++iter) {
        double grad_b = 0.0;
        const double grad_sq = objective.gradients(w, z, grad_w, grad_b);
        if (std::sqrt(grad_sq) < options.gradient_tolerance) break;

        step = std::min(step * 2.0, 1e6);  // let the step recover between iterations
        double trial_loss = loss;
        bool accepted = false;
        while (step > 1e-18) {
            for (std::size_t j = 0; j < data.d; ++j) trial_w[j] = w[j] - step * grad_w[j];
            const double trial_b = b - step * grad_b;
            objective.logits(trial_w, trial_b, trial_z);
            trial_loss = objective.loss_from_logits(trial_z, trial_w);
            if (trial_loss <= loss - kArmijo * step * grad_sq) {
                w.swap(trial_w);
                b = trial_b;
                z.swap(trial_z);
                loss = trial_loss;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;  // no descent direction left at double precision
        ++iterations_run;
        result.loss_trace.push_back(loss);
    }

    result.model.weights = std::move(w);
    result.model.intercept = b;
    result.model.l2_penalty = options.l2;
    result.model.iterations_run = iterations_run;
    result.model.mean = data.mean;
    result.model.scale = data.scale;
    return result;
}

std::vector<double> probe_scores(const ProbeModel& model,
                                 std::span<const FeatureVectorRecord> records) {
    const std::size_t d = model.weights.size();
    std::vector<double> logits(records.size());
    std::vector<double> standardized(d);
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& v = records[i].vector;
        if (v.size() != d) {
            throw InvalidArgument("probe_scores: record \"" + records[i].id + "\" has " +
                                  std::to_string(v.size()) + " features, model expects " +
                                  std::to_string(d));
        }
        for (std::size_t j = 0; j < d; ++j) {
            standardized[j] = (v[j] - model.mean[j]) / model.scale[j];
        }
        logits[i] = kernels::dot(standardized, model.weights) + model.intercept;
    }
    std::vector<double> scores(records.size());
    kernels::sigmoid(logits, scores);
    return scores;
}

std::optional<double> eval_probe(const ProbeModel& model,
                                 std::span<const FeatureVectorRecord> test) {
    if (test.empty()) return std::nullopt;
    const std::vector<double> scores = probe_scores(model, test);
    std::vector<double> pos;
    std::vector<double> neg;
    for (std::size_t i = 0; i < test.size(); ++i) {
        (test[i].attribute_label ? pos : neg).push_back(scores[i]);
    }
    return stats::auc(pos, neg);
}

namespace {

std::vector<FeatureVectorRecord> parse_features_csv(const std::filesystem::path& path) {
    std::vector<FeatureVectorRecord> records;
    std::size_t dimension = 0;
    bool header_seen = false;
    csv::for_each_row(path, [&](std::size_t line, const std::vector<std::string>& fields) {
        const std::string where = path.string() + ":" + std::to_string(line);
        if (!header_seen) {
            if (fields.size() < 3 || fields[0] != "id" || fields[1] != "attribute_label") {
                throw ParseError(where + ": expected header id,attribute_label,f0,...");
            }
            dimension = fields.size() - 2;
            header_seen = true;
            return;
        }
        if (fields.size() != dimension + 2) {
            throw ParseError(where + ": expected " + std::to_string(dimension + 2) +
                             " columns, got " + std::to_string(fields.size()));
        }
        FeatureVectorRecord record;
        record.id = fields[0];
        if (fields[1] == "0") {
            record.attribute_label = 0;
        } else if (fields[1] == "1") {
            record.attribute_label = 1;
        } else {
            throw ParseError(where + ": attribute_label must be 0 or 1, got \"" + fields[1] +
                             "\"");
        }
        record.vector.reserve(dimension);
        for (std::size_t j = 0; j < dimension; ++j) {
            record.vector.push_back(
                csv::parse_double(fields[2 + j], where + ": column f" + std::to_string(j)));
        }
        records.push_back(std::move(record));
    });
    if (!header_seen) throw ParseError(path.string() + ": missing header row");
    return records;
}

std::vector<FeatureVectorRecord> parse_features_jsonl(const std::filesystem::path& path) {
    using nlohmann::json;
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    std::vector<FeatureVectorRecord> records;
    std::size_t dimension = 0;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const std::string where = path.string() + ":" + std::to_string(line_no);
        json row = json::parse(line, nullptr, false);
        if (row.is_discarded() || !row.is_object()) {
            throw ParseError(where + ": not a JSON object");
        }
        try {
            FeatureVectorRecord record;
            record.id = row.at("id").get<std::string>();
            const int label = row.at("attribute_label").get<int>();
            if (label != 0 && label != 1) {
                throw ParseError(where + ": attribute_label must be 0 or 1");
            }
            record.attribute_label = static_cast<std::uint8_t>(label);
            for (const auto& value : row.at("vector")) {
                record.vector.push_back(value.get<double>());
            }
            if (records.empty()) {
                dimension = record.vector.size();
                if (dimension == 0) throw ParseError(where + ": empty feature vector");
            } else if (record.vector.size() != dimension) {
                throw ParseError(where + ": dimension " + std::to_string(record.vector.size()) +
                                 " does not match first record's " + std::to_string(dimension));
            }
            for (double v : record.vector) {
                if (!std::isfinite(v)) throw ParseError(where + ": non-finite feature value");
            }
            records.push_back(std::move(record));
        } catch (const json::exception& e) {
            throw ParseError(where + ": " + e.what());
        }
    }
    return records;
}

}  // namespace

std::vector<FeatureVectorRecord> parse_features(const std::filesystem::path& path) {
    const std::string extension = path.extension().string();
    if (extension == ".jsonl" || extension == ".ndjson") {
        return parse_features_jsonl(path);
    }
    return parse_features_csv(path);
}

}  // namespace shortcut_audit::probe
