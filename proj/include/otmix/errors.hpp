#pragma once

#include <stdexcept>
#include <string>

namespace otmix {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotASimplexPoint : Error {
    using Error::Error;
};

struct NotACoupling : Error {
    using Error::Error;
};

struct ShapeMismatch : Error {
    using Error::Error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

struct EmptyInput : Error {
    using Error::Error;
};

struct NonPositiveWeight : Error {
    using Error::Error;
};

struct NonFiniteCost : Error {
    using Error::Error;
};

struct DegenerateMarginal : Error {
    using Error::Error;
};

struct NonPositiveDefiniteCovariance : Error {
    using Error::Error;
};

struct EmptyComponent : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

struct RaggedRow : Error {
    using Error::Error;
};

struct SchemaVersionMismatch : Error {
    using Error::Error;
};

struct InvariantViolation : Error {
    using Error::Error;
};

}  // namespace otmix
