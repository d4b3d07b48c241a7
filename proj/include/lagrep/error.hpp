#pragma once

#include <stdexcept>
#include <string>

namespace lagrep {

/// Base of all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on the caller's data failed: shape mismatch, a matrix that
/// is not unitary, a malformed spectrum, and so on.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure could not produce a result within tolerance.
class NumericalError : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw InputError(what);
}

}  // namespace detail
}  // namespace lagrep
