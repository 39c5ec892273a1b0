// Copyright 2026 shortcut-audit contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>

namespace shortcut_audit {

/// Maximum worker count: SHORTCUT_AUDIT_THREADS if set (>=1), otherwise
/// std::thread::hardware_concurrency(). Read once per process.
int thread_limit();

/// Runs range_fn(begin, end) over a static partition of [0, count).
/// Callers must make per-index work independent of scheduling; results
/// are then identical to a sequential run.
void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& range_fn);

}  // namespace shortcut_audit
