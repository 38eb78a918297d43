#pragma once

#include <stdexcept>
#include <string>

namespace bellviol {

// Raised when an input breaks a documented precondition. The CLI maps this
// to exit code 2; everything else that escapes maps to exit code 1.
struct validation_error : std::runtime_error {
    explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace bellviol
