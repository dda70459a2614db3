#pragma once

namespace aho {

enum class Precision { Double, Extended };

// Model parameters of V(x) = (M/2) w^2 x^2 + g x^4, plus the numeric
// evaluation mode. Defaults are the natural units used for all quoted
// numbers: hbar = kB = M = omega = 1.
struct ModelParams {
  double mass = 1.0;
  double omega = 1.0;
  double hbar = 1.0;
  double g = 0.0;
  Precision precision = Precision::Double;
};

}  // namespace aho
