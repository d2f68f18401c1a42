#pragma once

#include <stdexcept>

namespace bistab {

// Non-convergence or inconsistency of a numerical procedure; maps to CLI
// exit code 2 (usage/config errors map to 1).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace bistab
