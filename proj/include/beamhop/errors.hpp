#pragma once

#include <stdexcept>
#include <string>

namespace beamhop {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file; the message names the offending field.
class ParseError : public Error {
public:
  using Error::Error;
};

/// Input parsed but violates a domain invariant.
class ValidationError : public Error {
public:
  using Error::Error;
};

/// The instance admits no feasible pattern (e.g. more cells than beam-slots).
class InfeasibleError : public Error {
public:
  using Error::Error;
};

/// An argument lies outside the domain of a formula.
class DomainError : public Error {
public:
  using Error::Error;
};

/// Instance too large for an exact / dense routine.
class SizeError : public Error {
public:
  using Error::Error;
};

/// Linear system or matrix equation without a unique solution.
class SingularError : public Error {
public:
  using Error::Error;
};

/// Broken internal invariant; indicates a bug rather than bad input.
class InternalError : public Error {
public:
  using Error::Error;
};

} // namespace beamhop
