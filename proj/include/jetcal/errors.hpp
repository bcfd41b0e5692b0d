#pragma once

#include <stdexcept>
#include <string>

namespace jetcal {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// DSL parse failure with a 1-based source position.
struct SyntaxError : Error {
    int line, col;
    SyntaxError(int line_, int col_, const std::string& what_)
        : Error(std::to_string(line_) + ":" + std::to_string(col_) + ": " + what_),
          line(line_), col(col_) {}
};

// A coordinate index fell outside 1..m (or a jet point was asked for one).
struct IndexOutOfRange : Error {
    using Error::Error;
};

// Systems of fewer than two equations are rejected: the invariant theory
// implemented here starts at m = 2.
struct DimensionTooSmall : Error {
    using Error::Error;
};

struct UnknownFunction : Error {
    using Error::Error;
};

// A denominator subterm is identically zero (detected during normalization
// or when constructing 1/0 directly).
struct DivisionByZeroExpr : Error {
    using Error::Error;
};

// Numeric evaluation hit a denominator (or log argument) inside the
// singular guard band.
struct EvalSingular : Error {
    using Error::Error;
};

// traceless3 was handed a tensor that is not symmetric in its lower pair.
struct NotSymmetric : Error {
    using Error::Error;
};

// A finite-difference stencil stepped outside the declared domain of a
// numeric right-hand side.
struct StencilOutOfDomain : Error {
    using Error::Error;
};

}  // namespace jetcal
