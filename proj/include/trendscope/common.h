#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace trendscope {

enum class ErrorKind {
    Usage,     // bad flags or config values
    Io,        // unreadable / unwritable files
    Data,      // malformed or inconsistent input data
    Config,    // configuration that cannot be satisfied
    Internal,  // broken invariant inside the library
};

/// Exception type thrown by every module. The CLI maps `kind()` to an exit code.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

/// Exit code contract of the command-line tool: 0 ok, 1 usage, 2 data, 3 internal.
int exit_code_for(ErrorKind kind) noexcept;

/// Non-fatal messages collected by an operation and surfaced by the caller.
using Warnings = std::vector<std::string>;

std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

}  // namespace trendscope
