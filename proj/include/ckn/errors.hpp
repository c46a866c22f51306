#pragma once

#include <stdexcept>
#include <string>

namespace ckn {

/// Raised when an iterative or adaptive numerical procedure fails to reach
/// its requested tolerance (CLI exit code 3).
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when the hypotheses of a theorem-backed routine are violated by
/// the inputs (CLI exit code 2).
struct HypothesisError : std::invalid_argument {
    explicit HypothesisError(const std::string& what) : std::invalid_argument(what) {}
};

} // namespace ckn
