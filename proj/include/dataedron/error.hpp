#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dataedron {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A precondition on an argument was violated (unknown type, bad selection...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Query text could not be parsed. offset() is a byte offset into the input.
class QueryParseError : public Error {
 public:
  QueryParseError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), message_(what), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::string message_;
  std::size_t offset_;
};

// A well-formed query that has no equivalent in the upstream search syntax.
class UnsupportedQuery : public Error {
 public:
  using Error::Error;
};

// Upstream feed could not be retrieved or decoded.
class UpstreamError : public Error {
 public:
  using Error::Error;
};

}  // namespace dataedron
