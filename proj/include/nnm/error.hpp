#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nnm {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid arguments or configuration (CLI exit code 2).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Malformed or inconsistent files.
class FormatError : public Error {
public:
    using Error::Error;
};

/// Data for which a requested quantity is undefined (CLI exit code 3).
class DegenerateDataError : public Error {
public:
    using Error::Error;
};

/// A zero vector was met under the angular distance.
class ZeroNormError : public DegenerateDataError {
public:
    ZeroNormError(const std::string& what, std::size_t row)
        : DegenerateDataError(what), row_(row) {}
    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

/// Every query hit an exact duplicate, so E[D_min] is zero.
class UndefinedContrastError : public DegenerateDataError {
public:
    explicit UndefinedContrastError(std::size_t zero_min_count)
        : DegenerateDataError("relative contrast undefined: all " +
                              std::to_string(zero_min_count) +
                              " queries have a zero nearest-neighbor distance"),
          zero_min_count_(zero_min_count) {}
    UndefinedContrastError(std::size_t zero_min_count, const std::string& what)
        : DegenerateDataError(what), zero_min_count_(zero_min_count) {}
    std::size_t zero_min_count() const noexcept { return zero_min_count_; }

private:
    std::size_t zero_min_count_;
};

/// Inside a catch block: rethrows the active exception with `context`
/// prefixed to its message, keeping the library error type.
[[noreturn]] void rethrow_with_context(const std::string& context);

}  // namespace nnm
