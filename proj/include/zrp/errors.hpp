#pragma once

#include <stdexcept>
#include <string>

namespace zrp {

// Argument outside the domain where a quantity is defined (e.g. phi >= c1).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A requested computation exceeds the configured memory/time budget.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The requested phase X^m_{L,N} contains no configuration.
class EmptyPhase : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Simulation started from a state that violates the hitting-time precondition.
class BadInitial : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InsufficientData : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace zrp
