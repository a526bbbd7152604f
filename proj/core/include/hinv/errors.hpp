#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hinv {

/// Two coefficient vectors or operators were built on different truncations.
class SchemeMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A Jacobian or chart differential is (numerically) not of full rank.
class RankDeficiency : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A computation produced non-finite values.
class NumericFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An integrator produced a non-finite state at step `step()`.
class BlowUp : public NumericFailure {
 public:
  BlowUp(const std::string& what, std::size_t step)
      : NumericFailure(what + " (step " + std::to_string(step) + ")"), step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

}  // namespace hinv
