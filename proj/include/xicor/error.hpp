#pragma once

#include <stdexcept>
#include <string>

namespace xicor {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside its documented domain (sizes, dimensions, levels).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Two rows of a point cloud coincide while strict mode is on.
class DuplicatePoint : public Error {
 public:
  DuplicatePoint(std::size_t first, std::size_t second)
      : Error("duplicate points at rows " + std::to_string(first) + " and " +
              std::to_string(second)),
        first_(first),
        second_(second) {}

  std::size_t first() const noexcept { return first_; }
  std::size_t second() const noexcept { return second_; }

 private:
  std::size_t first_;
  std::size_t second_;
};

/// Exact tie in the response while strict mode is on.
class TieError : public Error {
 public:
  using Error::Error;
};

/// Input is statistically meaningless for the requested operation
/// (e.g. a constant response for the asymptotic test).
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

/// Malformed text input; the message names the offending line.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace xicor
