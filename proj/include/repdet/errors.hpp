#pragma once

#include <stdexcept>
#include <string>

namespace repdet {

// Bad flag/parameter combinations supplied by the caller. CLI exit code 1.
struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

// Unreadable or malformed inputs, or data that cannot satisfy an operation's
// preconditions (e.g. a negative pool smaller than the positives). Exit code 2.
struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// A violated internal invariant; indicates a bug, not bad input. Exit code 3.
struct InternalError : std::runtime_error {
    explicit InternalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace repdet
