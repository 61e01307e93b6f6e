#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace tagnet {

// Bad inputs: malformed files, invalid arguments, broken rule files.
// The CLI maps this to exit code 1.
class input_error : public std::runtime_error {
public:
    explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

// A computation failed on otherwise valid input. Exit code 2 in the CLI.
class analysis_error : public std::runtime_error {
public:
    explicit analysis_error(const std::string& what) : std::runtime_error(what) {}
};

// Power iteration ran out of iterations; carries the diagnostic state.
class convergence_error : public analysis_error {
public:
    convergence_error(const std::string& what, std::uint32_t iterations, double residual)
        : analysis_error(what), iterations(iterations), residual(residual) {}

    std::uint32_t iterations;
    double residual;
};

}  // namespace tagnet
