#pragma once

#include <stdexcept>
#include <string>

namespace heatgen {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A SpaceSpec violates its own invariants (shape, symmetry, definiteness).
class InvalidSpace : public Error {
public:
  using Error::Error;
};

/// Some [D_i, D_k] is not a linear combination of the D_j.
class CommutatorOutsideSpan : public Error {
public:
  using Error::Error;
};

/// The holonomy generators D_j are linearly dependent.
class DegenerateBasis : public Error {
public:
  using Error::Error;
};

/// Two independent derivations of the same quantity disagree.
class InternalInconsistency : public Error {
public:
  using Error::Error;
};

class UnknownSpace : public Error {
public:
  using Error::Error;
};

/// Malformed space file. `line` is 0 when the problem is not tied to a line.
class ParseError : public Error {
public:
  ParseError(const std::string &what, std::size_t line = 0, std::string field = {})
      : Error(what), line_(line), field_(std::move(field)) {}
  std::size_t line() const { return line_; }
  const std::string &field() const { return field_; }

private:
  std::size_t line_;
  std::string field_;
};

/// A parsed space fails symmetric-space validation.
class ValidationError : public Error {
public:
  using Error::Error;
};

/// The word enumeration would exceed the configured budget.
class OrderTooLarge : public Error {
public:
  using Error::Error;
};

class OrderMismatch : public Error {
public:
  using Error::Error;
};

class NonPositiveT : public Error {
public:
  using Error::Error;
};

/// Too much of the Gaussian mass lies beyond the pole-free ball.
class SingularityHit : public Error {
public:
  using Error::Error;
};

} // namespace heatgen
