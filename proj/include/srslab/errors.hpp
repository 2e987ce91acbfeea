#pragma once

#include <stdexcept>
#include <string>

namespace srslab {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Species-file syntax problem; carries the 1-based line number.
struct ParseError : Error {
    ParseError(int line_, const std::string& what_)
        : Error("parse error (line " + std::to_string(line_) + "): " + what_), line(line_) {}
    int line;
};

// A record is missing or has an unrecognized unit tag.
struct UnitError : ParseError {
    UnitError(int line_, const std::string& what_) : ParseError(line_, "unit: " + what_) {}
};

// Loaded data violates a structural invariant (selection rules, duplicates, ...).
struct ValidationError : Error {
    using Error::Error;
};

struct UnknownLevelError : ValidationError {
    explicit UnknownLevelError(const std::string& label)
        : ValidationError("unknown level: " + label) {}
};

// A detuning denominator fell inside the configured resonance floor.
struct ResonanceError : Error {
    using Error::Error;
};

// Bad argument to a computation (q outside {-1,0,+1}, nonpositive frequency, ...).
struct DomainError : Error {
    using Error::Error;
};

// Fit could not be performed or did not converge.
struct FitError : Error {
    using Error::Error;
};

} // namespace srslab
