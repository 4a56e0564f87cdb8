#pragma once

#include <stdexcept>
#include <string>

namespace flowpact {

/// Base class for all errors raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed polygon input or a degenerate geometric operation.
struct GeometryError : Error {
    using Error::Error;
};

/// The environment cannot be partitioned (pinched corridors, unplaceable
/// passage spots, no compatible direction assignment, negative density cap).
struct EnvironmentInvalid : Error {
    using Error::Error;
};

/// A robot submitted a request while one of the same kind is still active.
struct ActiveRequestExists : Error {
    using Error::Error;
};

/// Requested spot overlaps an obstacle, leaves free space, or spans regions.
struct InvalidSpot : Error {
    using Error::Error;
};

/// Scenario file failed schema or semantic validation. `field` carries the
/// JSON path of the offending entry when known.
struct ValidationError : Error {
    explicit ValidationError(const std::string& what, std::string field_path = {})
        : Error(field_path.empty() ? what : field_path + ": " + what),
          field(std::move(field_path)) {}
    std::string field;
};

/// More robots in a scenario than the environment's density cap admits.
struct DensityCapExceeded : Error {
    using Error::Error;
};

/// A runtime invariant was breached during simulation (diagnostic attached).
struct SimulationFault : Error {
    using Error::Error;
};

/// Iterative computation failed to reach a fixed point within its budget.
struct ConvergenceError : Error {
    using Error::Error;
};

}  // namespace flowpact
