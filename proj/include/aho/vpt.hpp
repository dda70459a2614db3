#pragma once

#include <optional>
#include <vector>

#include "aho/params.hpp"
#include "aho/thermo.hpp"

namespace aho {

// Resummation of the free-energy series with a trial frequency. The series
// is transported from omega to Omega by substituting
// omega -> Omega sqrt(1 + g r), expanding in g at fixed r through the
// working order, and re-substituting g r = omega^2/Omega^2 - 1. The trial
// frequency is then fixed by the principle of least sensitivity: the lowest
// derivative order with a root.
class VptSeries {
 public:
  // Derivative cache depth: d^j/domega^j F_n is prepared for all j up to
  // (order - n) + order, which covers the resummation and every criterion
  // derivative up to the working order.
  VptSeries(const ThermalSeries& src, int order);

  int order() const { return order_; }
  // n = 0 refers to the harmonic term; its j = 0 value carries a logarithm
  // and is evaluated from the closed form, all higher j are algebra elements.
  const HypExpr& deriv(int n, int j) const;

 private:
  int order_;
  std::vector<std::vector<HypExpr>> derivs_;  // [n][j]
};

struct VptSolution {
  double beta = 0.0, g = 0.0;
  int order = 0;
  double omega_star = 0.0;
  int criterion_order = 0;  // 1 = extremum, 2 = inflection, ...
  double value = 0.0;
  double bracket_lo = 0.0, bracket_hi = 0.0;
  double residual = 0.0;
  int branch_index = 0;
};

struct ScanRange {
  double lo = 0.2;
  double hi = 5.0;
  int steps = 200;
};

// Numeric front end of the transport: the value F^{(N)}(beta, Omega) and its
// exact Omega-derivatives (the derivative acts symbolically on the cached
// algebra elements, never by finite differences).
class Resummation {
 public:
  Resummation(const VptSeries& series, int order);

  double value(double beta, double omega_trial, const ModelParams& p) const;
  // p-th derivative with respect to the trial frequency, p >= 1.
  double omega_derivative(int p, double beta, double omega_trial, const ModelParams& p_model) const;

  int order() const { return order_; }

 private:
  struct Term {
    Rational c;
    int wq;   // power of omega_physical^2
    int pom;  // explicit power of Omega
    int n;    // g power
    int j;    // derivative index into the cache
  };
  double eval_terms(const std::vector<Term>& terms, double beta, double omega_trial,
                    const ModelParams& p) const;

  const VptSeries* series_;
  int order_;
  std::vector<std::vector<Term>> dterms_;  // [derivative order p][terms]
};

VptSolution optimize_omega(const VptSeries& series, int order, double beta, double g,
                           const ScanRange& scan, double tol, const ModelParams& base,
                           std::optional<double> warm_start = std::nullopt);

struct ConvergenceRow {
  int order;
  double omega_star;
  double value;
  double abs_err;
  int criterion_order;
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  double odd_rate = 0.0;   // fitted exponential decay rate of odd orders
  double even_rate = 0.0;  // same for even orders
  bool degenerate = false; // zero errors or too few points for a fit
};

ConvergenceReport convergence_report(const VptSeries& series, double beta, double g,
                                     int max_order, double reference,
                                     const ModelParams& base);

}  // namespace aho
