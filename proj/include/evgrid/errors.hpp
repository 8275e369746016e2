#pragma once

#include <stdexcept>
#include <string>

namespace evgrid {

/// Invalid or out-of-range configuration input. CLI exit code 1.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// No dispatch satisfies the market constraints. CLI exit code 2.
class InfeasibleError : public std::runtime_error {
public:
    explicit InfeasibleError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Filesystem failure, reported with the offending path. CLI exit code 3.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace evgrid
