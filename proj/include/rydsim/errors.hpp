#ifndef RYDSIM_ERRORS_HPP
#define RYDSIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rydsim {

/// Configuration / input validation failures (CLI exit code 2).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical failures: lost eigenvalue branch, root not bracketed,
/// integrator breakdown, ... (CLI exit code 3).
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

struct BranchAmbiguityError : NumericalError {
    explicit BranchAmbiguityError(const std::string& msg) : NumericalError(msg) {}
};

struct ResonanceError : NumericalError {
    explicit ResonanceError(const std::string& msg) : NumericalError(msg) {}
};

struct NoRangeError : NumericalError {
    explicit NoRangeError(const std::string& msg) : NumericalError(msg) {}
};

struct IntegrationError : NumericalError {
    explicit IntegrationError(const std::string& msg) : NumericalError(msg) {}
};

struct SearchError : NumericalError {
    explicit SearchError(const std::string& msg) : NumericalError(msg) {}
};

struct FitError : NumericalError {
    explicit FitError(const std::string& msg) : NumericalError(msg) {}
};

} // namespace rydsim

#endif // RYDSIM_ERRORS_HPP
