#pragma once

#include <stdexcept>
#include <string>

namespace paws {

/// Base class for every error raised by the library. Messages are meant to be
/// shown to a user as-is.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (k out of range, bad threshold...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Reading or parsing external data failed.
class ParseError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline void require(bool condition, const std::string& message) {
  if (!condition) throw InvalidArgument(message);
}

}  // namespace detail
}  // namespace paws
