#pragma once

#include <stdexcept>
#include <string>

namespace evsim {

// Scenario/config problems (bad keys, infeasible parameters). CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Input data problems (gaps, malformed rows, missing coverage). CLI exit code 3.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// A broken internal invariant; always a bug. CLI exit code 4.
class InternalError : public std::logic_error {
public:
    explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

} // namespace evsim
