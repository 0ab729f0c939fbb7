#pragma once

#include <stdexcept>
#include <string>

namespace mfl {

enum class ErrorKind {
    invalid_range,
    range_overflow,
    invalid_argument,
    lag_too_large,
    zero_mass,
    resolution,
    grid_too_coarse,
    grid_mismatch,
    non_prime,
    non_disjoint,
    window_too_long,
    window_too_short,
    exhausted_block,
    omega_too_short,
    pattern,
    io,
    format,
    checksum,
    config,
};

const char* to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library. The kind lets the CLI map failures
/// onto exit codes without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::invalid_range: return "invalid-range";
    case ErrorKind::range_overflow: return "range-overflow";
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::lag_too_large: return "lag-too-large";
    case ErrorKind::zero_mass: return "zero-mass";
    case ErrorKind::resolution: return "resolution";
    case ErrorKind::grid_too_coarse: return "grid-too-coarse";
    case ErrorKind::grid_mismatch: return "grid-mismatch";
    case ErrorKind::non_prime: return "non-prime";
    case ErrorKind::non_disjoint: return "non-disjoint";
    case ErrorKind::window_too_long: return "window-too-long";
    case ErrorKind::window_too_short: return "window-too-short";
    case ErrorKind::exhausted_block: return "exhausted-block";
    case ErrorKind::omega_too_short: return "omega-too-short";
    case ErrorKind::pattern: return "pattern";
    case ErrorKind::io: return "io";
    case ErrorKind::format: return "format";
    case ErrorKind::checksum: return "checksum";
    case ErrorKind::config: return "config";
    }
    return "unknown";
}

}  // namespace mfl
