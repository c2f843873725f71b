#pragma once

#include <stdexcept>
#include <string>

namespace gapcount {

// Base of every error raised by the library. The CLI maps InputError and
// its subclasses to exit status 1 and NumericalError and its subclasses to
// exit status 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed arguments or violated preconditions.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A perturbed off-diagonal is not strictly positive.
class InvalidOperatorError : public InputError {
 public:
  using InputError::InputError;
};

/// A generator whose trace norm diverges was requested without the override.
class NonSummableError : public InputError {
 public:
  using InputError::InputError;
};

/// Truncation window too small for the requested accuracy.
class SizeError : public InputError {
 public:
  SizeError(const std::string& what, long suggested)
      : InputError(what), suggested_(suggested) {}
  long suggested() const noexcept { return suggested_; }

 private:
  long suggested_;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

/// An energy sits within tolerance of the spectrum of the resolvent's operator.
class ResolventProximityError : public NumericalError {
 public:
  ResolventProximityError(const std::string& what, double energy, double distance)
      : NumericalError(what), energy_(energy), distance_(distance) {}
  double energy() const noexcept { return energy_; }
  double distance() const noexcept { return distance_; }

 private:
  double energy_;
  double distance_;
};

/// Bisection or bracketing failed; carries the last bracket.
class RootFindingError : public NumericalError {
 public:
  RootFindingError(const std::string& what, double lo, double hi)
      : NumericalError(what), lo_(lo), hi_(hi) {}
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }

 private:
  double lo_;
  double hi_;
};

/// Reference site of a Dirichlet decoupling has a vanishing Green's function.
class ResonanceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace gapcount
