// Copyright 2026 shortcut-audit contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace shortcut_audit {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file: message carries file, line and column context.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Input data violates a contract (schema mismatch, degenerate sample, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Caller passed an out-of-range or inconsistent parameter.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

}  // namespace shortcut_audit
