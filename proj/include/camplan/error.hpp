#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace camplan {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input document; the message names the offending field path.
class ParseError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

// A caller handed over an object that breaks a documented precondition
// (infeasible solution, inconsistent plan, ...).
class ContractError : public Error {
 public:
  using Error::Error;
};

// No feasible placement exists. `subject` names the stream or item that
// could not be placed, `reason` is a one-line machine-readable cause.
class InfeasibleError : public Error {
 public:
  InfeasibleError(std::string subject, std::string reason)
      : Error(subject.empty() ? reason : subject + ": " + reason),
        subject_(std::move(subject)),
        reason_(std::move(reason)) {}

  const std::string& subject() const noexcept { return subject_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::string subject_;
  std::string reason_;
};

class ResourceExhaustedError : public Error {
 public:
  using Error::Error;
};

// Input is outside what an enumeration routine agrees to handle.
class RefusalError : public Error {
 public:
  using Error::Error;
};

}  // namespace camplan
