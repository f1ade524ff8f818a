#pragma once

#include <stdexcept>
#include <string>

namespace nodal {

/// Base class for all errors thrown by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Evaluation outside (gamma_star_minus, gamma_star].
struct OutOfDomain : Error {
    explicit OutOfDomain(const std::string& msg) : Error(msg) {}
};

/// Model construction or validation failure.
struct InvalidModel : Error {
    explicit InvalidModel(const std::string& msg) : Error(msg) {}
};

/// A required landmark does not exist (hypotheses violated).
struct LandmarkNotFound : Error {
    explicit LandmarkNotFound(const std::string& msg) : Error(msg) {}
};

/// A level equation F(s) = L has no solution on the requested interval.
struct LevelNotAttained : Error {
    explicit LevelNotAttained(const std::string& msg) : Error(msg) {}
};

/// Step controller underflowed the step size.
struct StepFailure : Error {
    explicit StepFailure(const std::string& msg) : Error(msg) {}
};

/// Trajectory evaluation outside its domain.
struct OutOfRange : Error {
    explicit OutOfRange(const std::string& msg) : Error(msg) {}
};

/// Event lists do not interleave as zeros/extrema must.
struct MalformedTrajectory : Error {
    explicit MalformedTrajectory(const std::string& msg) : Error(msg) {}
};

/// Classification margin fell below the resolvable threshold.
struct AmbiguousClassification : Error {
    explicit AmbiguousClassification(const std::string& msg) : Error(msg) {}
};

/// Bisection endpoints refuse to classify differently.
struct NoSignSplit : Error {
    explicit NoSignSplit(const std::string& msg) : Error(msg) {}
};

/// Scan range is empty or inverted.
struct InvalidRange : Error {
    explicit InvalidRange(const std::string& msg) : Error(msg) {}
};

/// A required object was not found below the configured cap.
struct NotFound : Error {
    explicit NotFound(const std::string& msg) : Error(msg) {}
};

} // namespace nodal
