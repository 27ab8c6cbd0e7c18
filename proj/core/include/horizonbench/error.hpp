#pragma once

#include <stdexcept>
#include <string>

namespace horizonbench {

/// Base for every failure raised by the harness. Messages start with a short
/// stable phrase ("insufficient context", "undefined WQL", ...) that callers
/// and tests match on, optionally followed by ": detail".
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Raised for malformed inputs: parameters, files, command-line values.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

}  // namespace horizonbench
