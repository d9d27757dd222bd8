#pragma once

#include <stdexcept>
#include <string>

namespace fracmems {

// Base class for numerical faults (CLI maps these to exit code 3).
struct NumericalFault : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Base class for violated mathematical contracts (CLI exit code 2).
struct ContractViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonConvergentQuadrature : NumericalFault {
  using NumericalFault::NumericalFault;
};

struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct BracketFailure : NumericalFault {
  using NumericalFault::NumericalFault;
};

struct SingularAssembly : NumericalFault {
  using NumericalFault::NumericalFault;
};

struct WindowTooClose : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct SingularSolve : NumericalFault {
  using NumericalFault::NumericalFault;
};

struct KernelUnavailable : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct AssertionFailure : ContractViolation {
  using ContractViolation::ContractViolation;
};

struct DivergentDenominator : NumericalFault {
  using NumericalFault::NumericalFault;
};

struct NonPositiveCs : NumericalFault {
  using NumericalFault::NumericalFault;
};

struct BracketExhausted : ContractViolation {
  using ContractViolation::ContractViolation;
};

struct EigenFailure : NumericalFault {
  using NumericalFault::NumericalFault;
};

struct NonFiniteEnergy : NumericalFault {
  using NumericalFault::NumericalFault;
};

struct InsufficientWindow : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ExistenceAnomaly : ContractViolation {
  using ContractViolation::ContractViolation;
};

}  // namespace fracmems
