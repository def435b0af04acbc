#pragma once

#include <stdexcept>
#include <string>

namespace qctx {

// Every failure raised by the library derives from Error. The CLI maps the
// concrete type onto an exit code, so new error classes need an entry there.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class CapacityError : public Error {
public:
    using Error::Error;
};

class NonFiniteError : public Error {
public:
    using Error::Error;
};

// Carries the offending residual so callers can report it.
class ResidualError : public Error {
public:
    ResidualError(const std::string& what, double residual)
        : Error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

class HermiticityError : public ResidualError {
public:
    using ResidualError::ResidualError;
};

class UnitarityError : public ResidualError {
public:
    using ResidualError::ResidualError;
};

class PositivityError : public ResidualError {
public:
    using ResidualError::ResidualError;
};

class NormalizationError : public ResidualError {
public:
    using ResidualError::ResidualError;
};

class SpectrumError : public ResidualError {
public:
    using ResidualError::ResidualError;
};

class DegenerateInputError : public Error {
public:
    using Error::Error;
};

class OutcomeError : public Error {
public:
    using Error::Error;
};

class ZeroProbabilityError : public Error {
public:
    using Error::Error;
};

// A derived quantity broke an invariant that valid inputs guarantee.
class InvariantViolation : public ResidualError {
public:
    using ResidualError::ResidualError;
};

class InstrumentAxiomError : public InvariantViolation {
public:
    using InvariantViolation::InvariantViolation;
};

}  // namespace qctx
