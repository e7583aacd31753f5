#ifndef RDMF_ERROR_HPP
#define RDMF_ERROR_HPP

#include <stdexcept>
#include <string>

namespace rdmf {

// Error taxonomy shared by the whole library. The CLI maps these onto
// process exit codes (see tools/rdmf_main.cpp): config -> 2, data -> 3,
// numeric/shape/state -> 4.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Incompatible matrix dimensions.
struct ShapeError : Error {
    using Error::Error;
};

// Iteration did not converge, NaN appeared, or a metric is undefined.
struct NumericError : Error {
    using Error::Error;
};

// Operation called in a state that does not support it
// (e.g. backward before forward, product_matrix on a nonlinear model).
struct StateError : Error {
    using Error::Error;
};

// Malformed input file (PGM, checkpoint, CSV).
struct ParseError : Error {
    using Error::Error;
};

// Bad run configuration (unknown key, out-of-range value).
struct ConfigError : Error {
    using Error::Error;
};

// Valid config but unusable data (missing file, wrong image variant).
struct DataError : Error {
    using Error::Error;
};

// NMAE/effective-rank preconditions violated (empty test set, constant data).
struct MetricError : Error {
    using Error::Error;
};

}  // namespace rdmf

#endif
