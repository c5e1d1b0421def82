#pragma once

#include <stdexcept>
#include <string>

namespace gkdv {

// Precondition or configuration violation. The CLI maps this to exit code 2.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure at runtime: gauge-weight overflow, blow-up, non-finite
// intermediate. The CLI maps this to exit code 3.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gkdv
