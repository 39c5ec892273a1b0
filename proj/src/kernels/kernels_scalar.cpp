// Copyright 2026 shortcut-audit contributors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <cstddef>

#include "shortcut_audit/kernels.hpp"

namespace shortcut_audit::kernels {

namespace {

double sum_scalar(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i];
    return acc;
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void sigmoid_scalar(const double* x, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        double v = x[i];
        if (v >= 0.0) {
            out[i] = 1.0 / (1.0 + std::exp(-v));
        } else {
            double e = std::exp(v);
            out[i] = e / (1.0 + e);
        }
    }
}

}  // namespace

const Ops& scalar_ops() {
    static const Ops ops{"scalar", sum_scalar, dot_scalar, axpy_scalar, sigmoid_scalar};
    return ops;
}

}  // namespace shortcut_audit::kernels
