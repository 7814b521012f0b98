#pragma once

#include <stdexcept>
#include <string>

namespace mibci {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Caller-supplied parameters or data violate a documented precondition.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Reading or writing an archive, config, model or report failed.
class IoError : public Error {
public:
    using Error::Error;
};

/// A fit or solve hit a degenerate numerical case (rank deficiency, singular
/// system, single-class resample).
class NumericalError : public Error {
public:
    using Error::Error;
};

/// The pdf-correlation criterion is undefined for a flat histogram.
class CriterionUndefined : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace mibci
