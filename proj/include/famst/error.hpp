#pragma once

#include <stdexcept>
#include <string>

namespace famst {

/// Caller passed arguments that violate an operation's preconditions.
class UsageError : public std::invalid_argument {
public:
  explicit UsageError(const std::string& what) : std::invalid_argument(what) {}
};

/// Input data could not be read or parsed (missing file, bad format, NaN).
class DataError : public std::runtime_error {
public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// An internal invariant was violated; indicates a bug, not bad input.
class InternalError : public std::logic_error {
public:
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace famst
