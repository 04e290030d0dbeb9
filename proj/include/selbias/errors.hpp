#pragma once

#include <stdexcept>
#include <string>

namespace selbias {

/// Base class for everything thrown by this library.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Problems with input files or serialized data. The CLI maps these to exit code 2.
struct DataError : Error {
  using Error::Error;
};
/// Malformed CSV structure: wrong header, bad field count, unparseable number.
struct FormatError : DataError {
  using DataError::DataError;
};
/// Structurally valid input carrying an out-of-range value.
struct ValueError : DataError {
  using DataError::DataError;
};
/// Fewer data rows than the operation needs.
struct InsufficientDataError : DataError {
  using DataError::DataError;
};
/// Unreadable or unwritable path.
struct IoError : DataError {
  using DataError::DataError;
};

/// Numerical and precondition failures. The CLI maps these to exit code 3.
struct NumericError : Error {
  using Error::Error;
};
/// Input vectors disagree in length or are too short.
struct DimensionError : NumericError {
  using NumericError::NumericError;
};
/// Normal equations are numerically singular.
struct CollinearityError : NumericError {
  using NumericError::NumericError;
};
/// A regressor carries no variation where some is required.
struct DegenerateRegressorError : NumericError {
  using NumericError::NumericError;
};
/// A closed-form expression was evaluated exactly where it is undefined.
struct BoundaryError : NumericError {
  using NumericError::NumericError;
};
/// Random generation could not satisfy its contract.
struct GenerationError : NumericError {
  using NumericError::NumericError;
};
/// Parameter outside its admissible domain.
struct DomainError : NumericError {
  using NumericError::NumericError;
};

}  // namespace selbias
