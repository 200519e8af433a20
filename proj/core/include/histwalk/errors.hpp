#pragma once

#include <stdexcept>
#include <string>

namespace histwalk {

// Invalid user-supplied configuration or operation inputs (CLI exit code 2).
struct config_error : std::runtime_error {
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// A numerical invariant (trace, norm, positivity, unitarity) left its budget
// mid-run (CLI exit code 3).
struct invariant_error : std::runtime_error {
    explicit invariant_error(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem failures while emitting outputs (CLI exit code 4).
struct io_error : std::runtime_error {
    explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace histwalk
