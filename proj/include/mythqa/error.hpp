#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mythqa {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file or record.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Input parsed but violates a data invariant (dangling ids, too few answers).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Bad argument to an operation (k = 0, empty corpus, dimension mismatch).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Model-server round trip failed. `offset` is the index of the first item of
// the failing batch within the caller's input.
class TransportError : public Error {
 public:
  TransportError(const std::string& what, std::size_t offset)
      : Error(what + " (batch offset " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace mythqa
