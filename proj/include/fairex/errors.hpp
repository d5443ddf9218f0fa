#pragma once

#include <stdexcept>
#include <string>

namespace fairex {

// Base type for everything thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid parameter values (cutoffs, decay factors, ratios, seeds).
struct ConfigError : Error {
  using Error::Error;
};

// Malformed input file content; message carries the 1-based line number.
struct ParseError : Error {
  using Error::Error;
};

// Column layout does not match the declared schema.
struct SchemaError : Error {
  using Error::Error;
};

// Structurally inconsistent data: rank gaps, duplicate ranks or items,
// users outside the evaluation universe.
struct StructuralError : Error {
  using Error::Error;
};

// A ranked list is shorter than the cutoff an operation requires.
struct DepthError : Error {
  using Error::Error;
};

// Argument outside a function's mathematical domain.
struct DomainError : Error {
  using Error::Error;
};

// A graded item has no rank in a context that requires a full ranking.
struct MissingRankError : Error {
  using Error::Error;
};

// A measure is undefined on the given input (e.g. no graded items at all).
struct UndefinedInputError : Error {
  using Error::Error;
};

}  // namespace fairex
