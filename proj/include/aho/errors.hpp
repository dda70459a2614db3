#pragma once

#include <stdexcept>
#include <string>

namespace aho {

struct AlgebraError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An integral left the closed hyperbolic-exponential family.
struct NonElementaryIntegral : AlgebraError {
  using AlgebraError::AlgebraError;
};

// Evaluation requested at tau = 0 while negative Laurent powers persist.
struct DivergesAtZero : AlgebraError {
  using AlgebraError::AlgebraError;
};

// The tau -> 0 regularity condition cannot be met by an additive constant.
struct ConstraintViolation : AlgebraError {
  using AlgebraError::AlgebraError;
};

// A coefficient failed its mirror or master-equation consistency check.
struct SymmetryViolation : AlgebraError {
  using AlgebraError::AlgebraError;
};

struct NoFiniteLimit : AlgebraError {
  using AlgebraError::AlgebraError;
};

struct NoCriterionRoot : AlgebraError {
  using AlgebraError::AlgebraError;
};

struct NoBracket : AlgebraError {
  using AlgebraError::AlgebraError;
};

}  // namespace aho
