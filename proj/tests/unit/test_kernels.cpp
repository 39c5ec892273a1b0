// Copyright 2026 shortcut-audit contributors
// SPDX-License-Identifier: Apache-2.0
//
// Scalar/SIMD equivalence: every variant must agree on random inputs,
// including awkward lengths that exercise the vector tails.

#include <doctest.h>

#include <cmath>
#include <string_view>
#include <vector>

#include "shortcut_audit/kernels.hpp"
#include "shortcut_audit/rng.hpp"

namespace kernels = shortcut_audit::kernels;
using shortcut_audit::RngStream;

namespace {

std::vector<double> random_vector(std::size_t n, RngStream& rng, double scale) {
    std::vector<double> v(n);
    for (auto& x : v) x = (rng.next_double() - 0.5) * scale;
    return v;
}

}  // namespace

TEST_CASE("active kernels report a known variant") {
    const char* name = kernels::active().name;
    const bool known = std::string_view(name) == "scalar" || std::string_view(name) == "avx2";
    CHECK(known);
}

TEST_CASE("simd kernels match scalar reference") {
    const kernels::Ops* simd = kernels::avx2_ops();
    if (simd == nullptr) {
        MESSAGE("AVX2 unavailable; scalar-only build");
        return;
    }
    const kernels::Ops& scalar = kernels::scalar_ops();
    RngStream rng(2024, 0);

    for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 15u, 64u, 257u, 4096u}) {
        const auto x = random_vector(n, rng, 4.0);
        const auto y = random_vector(n, rng, 4.0);

        CAPTURE(n);
        double magnitude = 1.0;
        for (std::size_t i = 0; i < n; ++i) magnitude += std::fabs(x[i] * y[i]);

        CHECK(std::fabs(simd->sum(x.data(), n) - scalar.sum(x.data(), n)) <= 1e-12 * magnitude);
        CHECK(std::fabs(simd->dot(x.data(), y.data(), n) - scalar.dot(x.data(), y.data(), n)) <=
              1e-12 * magnitude);

        std::vector<double> y_simd = y;
        std::vector<double> y_scalar = y;
        simd->axpy(0.37, x.data(), y_simd.data(), n);
        scalar.axpy(0.37, x.data(), y_scalar.data(), n);
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(std::fabs(y_simd[i] - y_scalar[i]) <= 1e-14 * (1.0 + std::fabs(y_scalar[i])));
        }
    }
}

TEST_CASE("simd sigmoid matches scalar across the saturation range") {
    const kernels::Ops* simd = kernels::avx2_ops();
    if (simd == nullptr) {
        MESSAGE("AVX2 unavailable; scalar-only build");
        return;
    }
    std::vector<double> inputs;
    for (double x = -60.0; x <= 60.0; x += 0.0103) inputs.push_back(x);
    inputs.push_back(0.0);
    inputs.push_back(-0.0);
    inputs.push_back(745.0);
    inputs.push_back(-745.0);

    std::vector<double> out_simd(inputs.size());
    std::vector<double> out_scalar(inputs.size());
    simd->sigmoid(inputs.data(), out_simd.data(), inputs.size());
    kernels::scalar_ops().sigmoid(inputs.data(), out_scalar.data(), inputs.size());
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        CAPTURE(inputs[i]);
        CHECK(std::fabs(out_simd[i] - out_scalar[i]) <= 1e-13);
        CHECK(out_simd[i] >= 0.0);
        CHECK(out_simd[i] <= 1.0);
    }
}

TEST_CASE("sigmoid satisfies the symmetry sigmoid(-x) = 1 - sigmoid(x)") {
    RngStream rng(5, 1);
    std::vector<double> x = random_vector(1000, rng, 20.0);
    std::vector<double> neg(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) neg[i] = -x[i];
    std::vector<double> sx(x.size());
    std::vector<double> snx(x.size());
    kernels::sigmoid(x, sx);
    kernels::sigmoid(neg, snx);
    for (std::size_t i = 0; i < x.size(); ++i) {
        CHECK(std::fabs(sx[i] + snx[i] - 1.0) <= 1e-12);
    }
}
