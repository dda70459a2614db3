#pragma once

#include <utility>
#include <vector>

#include "aho/params.hpp"
#include "aho/recursion.hpp"

namespace aho {

// Closed-form harmonic kernel, classical path and Dirichlet two-point
// function, plus the Wick reduction of harmonic expectation values. All in
// imaginary time tau in [0, hbar*beta].

double harmonic_amplitude(double xb, double xa, double beta, const ModelParams& p);
double classical_path(double tau, double xa, double xb, double beta, const ModelParams& p);
double green_dirichlet(double tau1, double tau2, double beta, const ModelParams& p);

// <prod_i x^{n_i}(tau_i)> in the harmonic ensemble with pinned endpoints,
// by the recursive contraction rules, memoized on the exponent lattice.
double wick_expectation(const std::vector<std::pair<int, double>>& powers, double beta,
                        double xa, double xb, const ModelParams& p);

struct AmplitudeSeries {
  int order = 0;
  const CoeffTable* table = nullptr;
  ModelParams params;
};

struct AmplitudeValue {
  double value = 0.0;
  double harmonic_factor = 0.0;
  double a_factor = 0.0;
  std::vector<double> per_order;  // g^n weighted contributions to the A factor
};

AmplitudeValue evaluate_amplitude(const AmplitudeSeries& s, double xb, double xa, double beta);

// Reduced coefficient values frozen at one thermal time, for repeated
// endpoint evaluation (quadratures, grids).
class AmplitudeTable {
 public:
  AmplitudeTable(const AmplitudeSeries& s, double beta);
  // expansion factor A and its per-order pieces, g powers included
  double a_factor(double xa, double xb, int order) const;
  double kernel(double xa, double xb) const;  // harmonic factor
  int order() const { return order_; }

 private:
  int order_;
  double g_, beta_;
  ModelParams params_;
  std::vector<std::vector<std::vector<double>>> reduced_;  // [n][k][l]
};

// Literal first-order closed form; test reference for the series evaluator.
double first_order_closed_form(double xb, double xa, double beta, const ModelParams& p);

}  // namespace aho
