#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace c2te {

enum class ErrorKind {
  Parse,
  AssumptionViolation,
  UnknownId,
  Coincident,
  Unsafe,
  NonFinite,
  EnumerationLimit,
  EmptyFleet,
  InvalidArgument,
};

const char* to_string(ErrorKind kind);

/// Base of every error the library throws. `kind()` selects the exit-code
/// class at the CLI boundary.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// A scenario or event breaks one of the initial-configuration rules.
/// `rule()` is a short stable identifier (e.g. "same-lane-spacing").
class AssumptionViolation : public Error {
 public:
  AssumptionViolation(std::string rule, std::vector<int> ids,
                      const std::string& detail);

  const std::string& rule() const noexcept { return rule_; }
  const std::vector<int>& ids() const noexcept { return ids_; }

 private:
  std::string rule_;
  std::vector<int> ids_;
};

/// Two vehicles reached the safe radius.
class UnsafeError : public Error {
 public:
  UnsafeError(int a, int b, double distance, const std::string& detail);

  int first() const noexcept { return a_; }
  int second() const noexcept { return b_; }
  double distance() const noexcept { return distance_; }

 private:
  int a_;
  int b_;
  double distance_;
};

}  // namespace c2te
