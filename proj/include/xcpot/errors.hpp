#pragma once

#include <stdexcept>
#include <string>

namespace xcpot {

// Parameter validation failure (bad n, Z < N, malformed schedule, ...).
struct ParameterError : std::invalid_argument {
    explicit ParameterError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Two objects that must live on the same grid (or have matching sizes) do not.
struct ShapeError : std::invalid_argument {
    explicit ShapeError(const std::string& msg) : std::invalid_argument(msg) {}
};

// A numerical routine failed (LAPACK error, singular projected system, ...).
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

// The KLI/ELP null space has dimension > 1 (density effectively vanishing on
// a fat set), so the up-to-a-constant uniqueness structure is lost.
struct DegenerateDensityError : std::runtime_error {
    explicit DegenerateDensityError(const std::string& msg) : std::runtime_error(msg) {}
};

// A mathematical hypothesis required by a diagnostic does not hold
// (e.g. the aufbau gap assumption for the OEP residual).
struct AssumptionError : std::runtime_error {
    explicit AssumptionError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace xcpot
