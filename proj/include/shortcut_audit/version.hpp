// Copyright 2026 shortcut-audit contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace shortcut_audit {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace shortcut_audit
