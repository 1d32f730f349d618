#pragma once

#include <stdexcept>
#include <string>

namespace sdlab {

/// Invalid geometry, tagging, or experiment configuration.
class ConfigurationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A matrix that should be SPD failed to factorize.
class AssemblyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense eigensolve requested above the configured dimension budget.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sdlab
