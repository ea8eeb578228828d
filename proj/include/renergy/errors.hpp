#pragma once

#include <stdexcept>
#include <string>

namespace renergy {

// Bad configuration or argument (negative density, degenerate window, ...).
class InvalidParameter : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Argument outside the domain of a closed-form expression.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

class EmptySetError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

inline void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidParameter(what);
}

inline void require_domain(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

}  // namespace renergy
