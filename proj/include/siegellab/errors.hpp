// Error types shared across modules. CLI maps them to exit codes:
// validation_error -> 2, resource_guard_error -> 3.
#pragma once

#include <stdexcept>
#include <string>

namespace siegellab {

struct validation_error : std::invalid_argument {
    explicit validation_error(const std::string& what) : std::invalid_argument(what) {}
};

struct resource_guard_error : std::runtime_error {
    explicit resource_guard_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace siegellab
