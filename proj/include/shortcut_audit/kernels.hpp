// Copyright 2026 shortcut-audit contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>

namespace shortcut_audit::kernels {

/// Dense inner-loop primitives. Scalar reference implementations always
/// exist; an AVX2 variant is selected at runtime when the CPU supports it.
/// SHORTCUT_AUDIT_SIMD=scalar|avx2|auto overrides the selection.
///
/// Within one process the active variant is fixed, so repeated runs with
/// the same inputs are bit-identical.
struct Ops {
    const char* name;
    double (*sum)(const double* x, std::size_t n);
    double (*dot)(const double* x, const double* y, std::size_t n);
    void (*axpy)(double a, const double* x, double* y, std::size_t n);  // y += a*x
    void (*sigmoid)(const double* x, double* out, std::size_t n);       // 1/(1+exp(-x))
};

/// Scalar reference kernels.
const Ops& scalar_ops();

/// AVX2 kernels, or nullptr when unsupported by the build or the CPU.
const Ops* avx2_ops();

/// The variant in use for this process.
const Ops& active();

inline double sum(std::span<const double> x) {
    return active().sum(x.data(), x.size());
}
inline double dot(std::span<const double> x, std::span<const double> y) {
    return active().dot(x.data(), y.data(), x.size());
}
inline void axpy(double a, std::span<const double> x, std::span<double> y) {
    active().axpy(a, x.data(), y.data(), x.size());
}
inline void sigmoid(std::span<const double> x, std::span<double> out) {
    active().sigmoid(x.data(), out.data(), x.size());
}

}  // namespace shortcut_audit::kernels
