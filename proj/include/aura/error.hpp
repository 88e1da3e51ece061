#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace aura {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sentiment scorer or specificity detector failed on a response.
class ScoringError : public Error {
 public:
  using Error::Error;
};

/// Caller broke a documented precondition (value out of range, wrong
/// table provenance, ...).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// Malformed input data. `line` is 1-based, 0 when not tied to a line.
class DataError : public Error {
 public:
  DataError(const std::string& what, std::size_t line = 0)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class ClassificationError : public Error {
 public:
  ClassificationError(const std::string& what, std::string raw_payload)
      : Error(what), raw_payload_(std::move(raw_payload)) {}
  const std::string& raw_payload() const { return raw_payload_; }

 private:
  std::string raw_payload_;
};

/// Remote model call failed (transport, HTTP status, or response shape).
class LlmError : public Error {
 public:
  using Error::Error;
};

/// Operation not permitted in the session's current status.
class SessionStateError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace aura
