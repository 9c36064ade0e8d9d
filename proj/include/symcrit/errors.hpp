#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace symcrit {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid arguments: non-finite inputs, dimension mismatches, out-of-range parameters.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A numerical evaluation (typically a quadrature) did not reach its tolerance.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

/// A hypothesis of a construction fails numerically (e.g. a non-normalizable speed measure).
class HypothesisViolation : public Error {
 public:
  using Error::Error;
};

class SimulationError : public Error {
 public:
  SimulationError(const std::string& what, std::size_t step)
      : Error(what + " (step " + std::to_string(step) + ")"), step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

}  // namespace symcrit
