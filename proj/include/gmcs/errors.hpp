#pragma once

#include <stdexcept>
#include <string>

namespace gmcs {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

struct InvalidParams : Error {
    using Error::Error;
};

struct IndexOutOfRange : Error {
    using Error::Error;
};

struct IndexNotActive : Error {
    using Error::Error;
};

struct IndexNotInactive : Error {
    using Error::Error;
};

struct DegenerateState : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

struct ShapeMismatch : Error {
    using Error::Error;
};

struct SchemaVersionMismatch : Error {
    using Error::Error;
};

struct ZeroVarianceColumn : Error {
    ZeroVarianceColumn(int col)
        : Error("column " + std::to_string(col) + " has zero variance"), column(col) {}
    int column;
};

}  // namespace gmcs
