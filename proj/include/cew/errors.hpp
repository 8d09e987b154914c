#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace cew {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Division of a quantity with a nonzero j^0 part by j.
class DivisionUndefined : public Error {
 public:
  using Error::Error;
};

class NotUnimodular : public Error {
 public:
  using Error::Error;
};

class DegenerateState : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, const std::string& message)
      : Error("syntax error at " + std::to_string(position) + ": " + message),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class ArityError : public Error {
 public:
  using Error::Error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

class UnknownField : public Error {
 public:
  using Error::Error;
};

class MissingAssignment : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  ConfigError(std::string key, std::string message)
      : Error("config key '" + key + "': " + message),
        key_(std::move(key)),
        message_(std::move(message)) {}
  const std::string& key() const { return key_; }
  /// The message without the key prefix.
  const std::string& message() const { return message_; }

 private:
  std::string key_;
  std::string message_;
};

}  // namespace cew
