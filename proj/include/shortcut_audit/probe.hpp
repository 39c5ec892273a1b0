// Copyright 2026 shortcut-audit contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace shortcut_audit::probe {

struct FeatureVectorRecord {
    std::string id;
    std::uint8_t attribute_label = 0;  // binary
    std::vector<double> vector;
};

/// L2-regularized logistic-regression attribute probe. Standardization
/// parameters are recorded so evaluation is self-contained.
struct ProbeModel {
    std::vector<double> weights;
    double intercept = 0.0;
    double l2_penalty = 0.0;
    int iterations_run = 0;
    std::vector<double> mean;   // per-feature, from the training set
    std::vector<double> scale;  // per-feature std, floored at 1e-8
};

struct TrainOptions {
    double l2 = 1.0;
    int iterations = 500;
    std::uint64_t seed = 0;     // recorded in reports; training is full-batch
    double gradient_tolerance = 1e-8;
};

struct TrainResult {
    ProbeModel model;
    std::vector<double> loss_trace;  // objective after each iteration
};

/// Full-batch gradient descent with backtracking line search, run for
/// exactly options.iterations iterations or until the gradient norm drops
/// below the tolerance. The objective is mean cross-entropy plus
/// l2 * ||w||^2 / (2n); the intercept is not penalized. Loss is
/// non-increasing by construction. Deterministic.
///
/// Throws ValidationError on single-class input, InvalidArgument on a
/// dimension mismatch.
TrainResult train_probe(std::span<const FeatureVectorRecord> train, const TrainOptions& options);

/// Probe scores: logistic of the affine map on standardized features.
std::vector<double> probe_scores(const ProbeModel& model,
                                 std::span<const FeatureVectorRecord> records);

/// AUC of probe scores against attribute labels; nullopt when the test
/// set is single-class.
std::optional<double> eval_probe(const ProbeModel& model,
                                 std::span<const FeatureVectorRecord> test);

/// CSV `id,attribute_label,f0,...` or JSONL with a `vector` array; the
/// dimension is inferred from the first record and enforced after.
std::vector<FeatureVectorRecord> parse_features(const std::filesystem::path& path);

}  // namespace shortcut_audit::probe
