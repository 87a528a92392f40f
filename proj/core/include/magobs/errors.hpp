#pragma once

#include <stdexcept>
#include <string>

namespace magobs {

/// Input rejected by a precondition on its shape or domain (bad direction,
/// empty region, negative step, ...).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A Galerkin truncation is too small for the requested operation: some
/// coupling or product would fall outside the mode window.
class TruncationError : public std::runtime_error {
 public:
  TruncationError(const std::string& what, double dropped_mass)
      : std::runtime_error(what), dropped_mass_(dropped_mass) {}

  double dropped_mass() const noexcept { return dropped_mass_; }

 private:
  double dropped_mass_;
};

/// A numerical precondition failed (non-Hermitian input, singular system,
/// grid too coarse for the requested scale, ...).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace magobs
