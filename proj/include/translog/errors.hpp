#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace translog {

/// Base class of all errors raised by this library.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed source text. `position` is a byte offset into the input.
struct ParseError : Error {
  std::size_t position;
  ParseError(const std::string& what, std::size_t pos) : Error(what), position(pos) {}
};

/// Violated construction invariant or operation precondition.
struct ValidationError : Error {
  using Error::Error;
};

/// Game formula outside the fragment the transition engine supports.
struct FragmentError : Error {
  using Error::Error;
};

/// Resource budget exceeded. Deliberately distinct from any semantic
/// verdict: callers must never conflate this with falsity.
struct BudgetError : Error {
  using Error::Error;
};

}  // namespace translog
