#ifndef POHP_ERRORS_H_
#define POHP_ERRORS_H_

#include <stdexcept>
#include <string>

namespace pohp {

// Malformed inputs: inconsistent game descriptions, illegal actions,
// distributions that do not sum to one, partition violations.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Queries whose mathematical object does not exist, e.g. conditioning on a
// zero-probability event.
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Preconditions on the caller's side: an operation that requires a
// perfect-recall agent invoked on a forgetful one, unsupported modes.
class ContractError : public std::runtime_error {
 public:
  explicit ContractError(const std::string& what) : std::runtime_error(what) {}
};

// Enumeration budgets: node limits, pure-strategy blowups, episode caps.
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace pohp

#endif  // POHP_ERRORS_H_
