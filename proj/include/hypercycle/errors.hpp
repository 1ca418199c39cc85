#pragma once

// Typed failures for the hypercycle library. Each category in the CLI maps to
// an exit code, so the hierarchy is kept flat and explicit.

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace hypercycle {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Params invariants violated (k2..k4 <= 0, or k1 <= k1*).
struct ParameterError : Error {
  using Error::Error;
};

// A population would leave the simplex or a denominator is nonpositive.
struct DomainError : Error {
  explicit DomainError(const std::string& what, std::optional<std::size_t> iteration = std::nullopt)
      : Error(what), iteration(iteration) {}
  std::optional<std::size_t> iteration;
};

// k1 = 0: the interior fixed point has collided with Q.
struct DegenerateParameter : Error {
  using Error::Error;
};

// k1* < k1 < 0: the interior fixed point formula leaves the simplex.
struct OutsideSimplex : Error {
  OutsideSimplex(const std::string& what, std::array<double, 4> coordinates)
      : Error(what), coordinates(coordinates) {}
  std::array<double, 4> coordinates;
};

struct SingularTransform : Error {
  using Error::Error;
};

struct DegenerateDenominator : Error {
  using Error::Error;
};

struct PoleError : Error {
  using Error::Error;
};

// jets
struct DegreeMismatch : Error {
  using Error::Error;
};
struct NonzeroConstantTerm : Error {
  using Error::Error;
};
struct NotInverse : Error {
  using Error::Error;
};
struct BadJetShape : Error {
  using Error::Error;
};
struct OutOfDegree : Error {
  using Error::Error;
};

// normal form
struct ResonantDivisor : Error {
  using Error::Error;
};
struct IndeterminateOrder : Error {
  using Error::Error;
};
// Internal cross-check failed (e.g. mirror coefficient is not the conjugate).
struct Discrepancy : Error {
  using Error::Error;
};

// curve
struct PreconditionViolation : Error {
  using Error::Error;
};
struct DivergedOrbit : Error {
  DivergedOrbit(const std::string& what, std::size_t iteration) : Error(what), iteration(iteration) {}
  std::size_t iteration;
};
struct InsufficientPoints : Error {
  using Error::Error;
};
struct NoConvergence : Error {
  NoConvergence(const std::string& what, double best_residual) : Error(what), best_residual(best_residual) {}
  double best_residual;
};

}  // namespace hypercycle
