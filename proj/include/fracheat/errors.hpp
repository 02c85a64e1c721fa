#pragma once

#include <stdexcept>
#include <string>

namespace fracheat {

struct OutOfRange : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct QuadratureFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GridTooCoarse : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NoConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SingularityBlowup : std::logic_error {
    using std::logic_error::logic_error;
};

struct TruncationTooTight : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Blowup : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GridMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct InsufficientLadder : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct InsufficientLags : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& field, const std::string& what)
        : std::runtime_error(field + ": " + what), field_path(field) {}
    std::string field_path;
};

struct ComputeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace fracheat
