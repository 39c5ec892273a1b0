// Copyright 2026 shortcut-audit contributors
// SPDX-License-Identifier: Apache-2.0
//
// AVX2+FMA variants of the dense kernels. Compiled with -mavx2 -mfma and
// entered only after the runtime CPU check in kernels.cpp. All loads and
// stores are unaligned; tails run scalar.

#include <cstddef>
#include <cstdint>

#if defined(__AVX2__)

#include <immintrin.h>

#include <bit>
#include <cmath>

#include "shortcut_audit/kernels.hpp"

namespace shortcut_audit::kernels {
namespace detail {

namespace {

double sum_avx2(const double* x, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x + i));
        acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(x + i + 4));
    }
    for (; i + 4 <= n; i += 4) {
        acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x + i));
    }
    __m256d acc = _mm256_add_pd(acc0, acc1);
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double total = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
    for (; i < n; ++i) total += x[i];
    return total;
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    }
    __m256d acc = _mm256_add_pd(acc0, acc1);
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double total = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
    for (; i < n; ++i) total += x[i] * y[i];
    return total;
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vy = _mm256_loadu_pd(y + i);
        vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
        _mm256_storeu_pd(y + i, vy);
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

// exp(v) for v in [-40, 0]: v = n ln2 + r with |r| <= ln2/2, exp(r) by a
// degree-13 Taylor polynomial, 2^n spliced into the exponent bits. The
// argument range keeps 2^n normal, so no subnormal handling is needed.
struct ExpConstants {
    double ln2_hi;
    double ln2_lo;
    ExpConstants() {
        const long double ln2 = 0.693147180559945309417232121458L;
        double hi = static_cast<double>(ln2);
        std::uint64_t bits = std::bit_cast<std::uint64_t>(hi);
        bits &= ~((std::uint64_t(1) << 27) - 1);  // 26 significant bits: n*hi stays exact
        ln2_hi = std::bit_cast<double>(bits);
        ln2_lo = static_cast<double>(ln2 - static_cast<long double>(ln2_hi));
    }
};

inline __m256d exp_nonpositive(__m256d v, const ExpConstants& c) {
    const __m256d log2e = _mm256_set1_pd(1.4426950408889634);
    __m256d nf = _mm256_round_pd(_mm256_mul_pd(v, log2e),
                                 _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(nf, _mm256_set1_pd(c.ln2_hi), v);
    r = _mm256_fnmadd_pd(nf, _mm256_set1_pd(c.ln2_lo), r);

    // 1/k! for k = 13 down to 0.
    static constexpr double kInvFactorial[14] = {
        1.6059043836821613e-10, 2.08767569878681e-09, 2.505210838544172e-08,
        2.755731922398589e-07,  2.7557319223985893e-06, 2.48015873015873e-05,
        0.0001984126984126984,  0.001388888888888889,  0.008333333333333333,
        0.041666666666666664,   0.16666666666666666,   0.5,
        1.0,                    1.0};
    __m256d p = _mm256_set1_pd(kInvFactorial[0]);
    for (int k = 1; k < 14; ++k) {
        p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(kInvFactorial[k]));
    }

    __m128i n32 = _mm256_cvtpd_epi32(nf);
    __m256i n64 = _mm256_cvtepi32_epi64(n32);
    __m256i exponent = _mm256_slli_epi64(_mm256_add_epi64(n64, _mm256_set1_epi64x(1023)), 52);
    return _mm256_mul_pd(p, _mm256_castsi256_pd(exponent));
}

void sigmoid_avx2(const double* x, double* out, std::size_t n) {
    static const ExpConstants constants;
    const __m256d sign_mask = _mm256_set1_pd(-0.0);
    const __m256d clamp = _mm256_set1_pd(-40.0);
    const __m256d one = _mm256_set1_pd(1.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d v = _mm256_loadu_pd(x + i);
        __m256d neg_abs = _mm256_max_pd(clamp, _mm256_sub_pd(_mm256_setzero_pd(),
                                                             _mm256_andnot_pd(sign_mask, v)));
        __m256d t = exp_nonpositive(neg_abs, constants);
        __m256d denom = _mm256_add_pd(one, t);
        __m256d pos = _mm256_div_pd(one, denom);
        __m256d neg = _mm256_div_pd(t, denom);
        _mm256_storeu_pd(out + i, _mm256_blendv_pd(pos, neg, v));
    }
    for (; i < n; ++i) {
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

const Ops* avx2_ops_build() {
    static const Ops ops{"avx2", sum_avx2, dot_avx2, axpy_avx2, sigmoid_avx2};
    return &ops;
}

}  // namespace detail
}  // namespace shortcut_audit::kernels

#endif  // __AVX2__
