#pragma once

#include <stdexcept>

namespace gradeswap {

/// Malformed input file or configuration text.
struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace gradeswap
