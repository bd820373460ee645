#pragma once

#include <stdexcept>
#include <string>

namespace randsum {

/// Base class of every error the library raises on purpose.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The stopping probability q collapsed to 0 or 1.
struct DegenerateLaw : Error {
    using Error::Error;
};

/// A moment does not exist (e.g. a tabulated CDF whose mass never reaches 1).
struct NonfiniteMoment : Error {
    using Error::Error;
};

/// Moment inputs are mutually inconsistent (the variance formula went negative).
struct NegativeVariance : Error {
    using Error::Error;
};

/// The kernel carries an atom of mass >= 1 at zero; the recursion cannot march.
struct AtomAtZero : Error {
    using Error::Error;
};

/// The solved curve violates monotonicity beyond tolerance.
struct GridTooCoarse : Error {
    using Error::Error;
};

/// Successive Gaver-Stehfest orders disagree beyond tolerance.
struct InversionUnstable : Error {
    using Error::Error;
};

/// A single replication exceeded the step cap (stopping probability ~ 0).
struct RunawayStop : Error {
    using Error::Error;
};

/// A stationary quantity was requested from an unstable model (rho >= 1).
struct StabilityViolation : Error {
    using Error::Error;
};

/// Two grids that must match do not.
struct ShapeMismatch : Error {
    using Error::Error;
};

/// Scenario/model JSON failed parsing.
struct ParseError : Error {
    using Error::Error;
};

/// Scenario/model JSON parsed but the values are invalid; message carries the path.
struct ValidationError : Error {
    using Error::Error;
};

} // namespace randsum
