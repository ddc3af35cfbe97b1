#pragma once

#include <stdexcept>
#include <string>

namespace linkspec {

// Failure categories map one-to-one onto CLI exit codes.
enum class ErrorKind { validation, numeric, io, parse };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(ErrorKind::validation, what) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what) : Error(ErrorKind::numeric, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::io, what) {}
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(ErrorKind::parse, what) {}
};

inline int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::validation:
    case ErrorKind::parse:
      return 2;
    case ErrorKind::numeric:
      return 3;
    case ErrorKind::io:
      return 4;
  }
  return 1;
}

}  // namespace linkspec
