#pragma once

#include <stdexcept>
#include <string>

namespace lvstor {

/// Base class for all lvstor errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Bad or inconsistent configuration (tariff files, battery presets, schedules).
struct ConfigError : Error {
    using Error::Error;
};

/// Malformed or inconsistent input data (CSV profiles, schedules).
struct DataError : Error {
    using Error::Error;
};

/// Mathematically degenerate request (zero-energy power factor, zero cycles).
struct DomainError : Error {
    using Error::Error;
};

/// Physical constraint violated (ramp, capacity, converter rating).
struct ConstraintError : Error {
    using Error::Error;
};

/// Control policy invoked outside its applicability conditions.
struct PolicyError : Error {
    using Error::Error;
};

} // namespace lvstor
