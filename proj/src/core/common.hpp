#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

namespace nightsense {

// Thrown for bad user input (missing files, malformed config, out-of-range
// arguments). Maps to exit code 1 at the CLI boundary.
class input_error : public std::runtime_error {
public:
    explicit input_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Thrown for violated internal invariants. Maps to exit code 2.
class internal_error : public std::runtime_error {
public:
    explicit internal_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Missing feature values are carried as NaN throughout the pipeline; CSV
// renders them as empty cells.
inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

inline bool is_missing(double v) { return std::isnan(v); }
inline bool is_present(double v) { return !std::isnan(v); }

} // namespace nightsense
