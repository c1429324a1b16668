#pragma once

#include <stdexcept>
#include <string>

namespace spectradual {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Vector or matrix sizes disagree.
struct DimensionError : Error {
    using Error::Error;
};

// Argument outside the domain of an operation (degree, exponent, norm index...).
struct DomainError : Error {
    using Error::Error;
};

// Expression node without a finite polyhedral subdifferential description.
struct UnsupportedError : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

// Exhaustive oracle asked for an instance above its size cap.
struct SizeLimitError : Error {
    using Error::Error;
};

// Rayleigh quotient with g(x) = 0.
struct RatioError : Error {
    using Error::Error;
};

inline void require_dim(long got, long want, const char* what) {
    if (got != want)
        throw DimensionError(std::string(what) + ": expected dimension " + std::to_string(want) +
                             ", got " + std::to_string(got));
}

}  // namespace spectradual
