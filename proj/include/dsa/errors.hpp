#pragma once

#include <stdexcept>
#include <string>

namespace dsa {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Invalid physical or learning parameter (non-finite range, R_b <= 0, ...).
class ParameterError : public Error {
public:
  using Error::Error;
};

/// A time-ordered process was queried at a time earlier than its last update.
class TemporalOrderError : public Error {
public:
  using Error::Error;
};

class DuplicateError : public Error {
public:
  using Error::Error;
};

class LookupError : public Error {
public:
  using Error::Error;
};

class EncodingError : public Error {
public:
  using Error::Error;
};

class NumericError : public Error {
public:
  using Error::Error;
};

/// Configuration file problem. `where` is a JSON pointer or "line:col".
class ConfigError : public Error {
public:
  ConfigError(std::string where, const std::string &what)
      : Error(where.empty() ? what : where + ": " + what),
        where_(std::move(where)), detail_(what) {}
  const std::string &where() const noexcept { return where_; }
  /// The message without the location prefix.
  const std::string &detail() const noexcept { return detail_; }

private:
  std::string where_;
  std::string detail_;
};

} // namespace dsa
