#pragma once

#include <stdexcept>
#include <string>

namespace loranrec {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Filesystem or device write/read failure.
class IoError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration, endpoint, policy or scenario.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Source unreachable after the retry policy was exhausted.
class SourceError : public Error {
 public:
  using Error::Error;
};

// A single sentence or field failed to parse. Carries the offending field name.
class ParseError : public Error {
 public:
  ParseError(std::string field, const std::string& reason)
      : Error(field + ": " + reason), field_(std::move(field)) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace loranrec
