// Copyright 2026 shortcut-audit contributors
// SPDX-License-Identifier: Apache-2.0

#include "shortcut_audit/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace shortcut_audit::kernels {

#if defined(SHORTCUT_AUDIT_HAVE_AVX2)
namespace detail {
const Ops* avx2_ops_build();
}
#endif

const Ops* avx2_ops() {
#if defined(SHORTCUT_AUDIT_HAVE_AVX2)
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
        return detail::avx2_ops_build();
    }
#endif
    return nullptr;
}

const Ops& active() {
    static const Ops& selected = []() -> const Ops& {
        const char* env = std::getenv("SHORTCUT_AUDIT_SIMD");
        if (env != nullptr && std::strcmp(env, "scalar") == 0) {
            return scalar_ops();
        }
        const Ops* avx2 = avx2_ops();
        if (env != nullptr && std::strcmp(env, "avx2") == 0) {
            // Explicit request: fall back (with no way to honor it) rather
            // than crash on an unsupported CPU.
            return avx2 != nullptr ? *avx2 : scalar_ops();
        }
        return avx2 != nullptr ? *avx2 : scalar_ops();
    }();
    return selected;
}

}  // namespace shortcut_audit::kernels
