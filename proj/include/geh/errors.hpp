#pragma once

#include <stdexcept>
#include <string>

namespace geh {

/// Input violates an operation's precondition (bad range, h = 0, gcd(a,q) > 1, ...).
class DomainError : public std::invalid_argument {
 public:
  explicit DomainError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// A configured capacity or cost guard would be exceeded.
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace geh
