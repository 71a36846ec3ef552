#pragma once

#include <stdexcept>
#include <string>

namespace hns {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters or inputs (bad spec, parameters outside the admissible region).
class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// Evaluation point outside the domain on which a solution is defined.
class DomainError : public Error {
public:
  using Error::Error;
};

/// A finite-difference stencil reaches too close to a declared singular point.
class StencilContamination : public Error {
public:
  using Error::Error;
};

/// Numerical procedure did not converge or diverged.
class NumericalFailure : public Error {
public:
  using Error::Error;
};

/// Asymptotic analysis could not reach a decision.
class Inconclusive : public Error {
public:
  using Error::Error;
};

} // namespace hns
