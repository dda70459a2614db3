#pragma once

#include <string>
#include <vector>

#include "aho/params.hpp"
#include "aho/recursion.hpp"

namespace aho {

// Perturbation series of the partition function and the free energy:
//   Z = Z0 (1 + sum_{n>=1} g^n z_n),   F = F0 + sum_{n>=1} g^n F_n,
// with Z0 = 1 / (2 sinh(hbar beta omega / 2)). The z_n and F_n are closed
// half-angle forms in the thermal variable tau = hbar beta; F0 carries a
// logarithm and lives outside the algebra, so it is kept as a special
// leading element evaluated from its closed form.
struct ThermalSeries {
  int order = 0;
  std::vector<HypExpr> z;  // z[0] = 1
  std::vector<HypExpr> f;  // f[0] unused placeholder (zero)
};

ThermalSeries z_series(const CoeffTable& table, int order);

// F0(beta) = (1/beta) log(2 sinh(hbar beta omega / 2))
double harmonic_free_energy(double beta, const ModelParams& p);
// d F0 / d omega = (hbar/2) coth(hbar beta omega / 2), half-angle element
HypExpr harmonic_free_energy_domega();

struct FreeEnergyEval {
  std::vector<double> per_order;  // F_n(beta), n = 0..N
  double truncated = 0.0;         // sum g^n F_n
};
FreeEnergyEval f_series_eval(const ThermalSeries& s, double beta, int N, const ModelParams& p);

struct GroundStateTerm {
  Rational coeff;
  int eh = 0, em = 0, ew = 0;
  double numeric(const ModelParams& p) const;
};
// Exact beta -> infinity limit of F_n. Throws NoFiniteLimit when the
// asymptotics diverge.
GroundStateTerm ground_state_limit(const ThermalSeries& s, int n);

// Closed forms of the connected vacuum diagrams built from the periodic
// two-point function, used as the independent cross-check of the series.
enum class DiagramId { D1, D21, D22 };
double diagram_reference(DiagramId id, double beta, const ModelParams& p);
double periodic_green(double tau1, double tau2, double beta, const ModelParams& p);

// Exact Gaussian even moment: integral x^{2m} e^{-alpha x^2} dx over R
// equals (2m-1)!! sqrt(pi/alpha) / (2 alpha)^m.
double gaussian_even_moment(int m, double alpha);

}  // namespace aho
