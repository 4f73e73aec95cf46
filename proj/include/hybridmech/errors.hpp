#pragma once

#include <stdexcept>
#include <string>

namespace hybridmech {

// Two families: bad input (CLI exit 1) and numerical failure (CLI exit 2).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class DetuningSignError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class OutOfDomainError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class DivisionDomainError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class StepSizeError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class NumericalError : public Error {
public:
    using Error::Error;
};

class DegenerateCavityError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class UnstableModelError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class SingularSystemError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class ConvergenceError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NoFeasiblePointError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace hybridmech
