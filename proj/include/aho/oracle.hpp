#pragma once

#include <functional>
#include <vector>

#include "aho/amplitude.hpp"
#include "aho/params.hpp"
#include "aho/recursion.hpp"

namespace aho {

// Independent numerical references: the shooting-method spectrum, the
// spectral free energy, the classical partition function, and direct
// integration cross-checks of the symbolic pipeline. Natural units
// hbar = M = omega = kB = 1 throughout the spectrum code.

struct Spectrum {
  double g = 0.0;
  std::vector<double> energies;
  double x_max = 0.0;
  double step = 0.0;
  double tol = 0.0;
};

struct ShootingConfig {
  double x_max = 8.0;
  double step = 1e-4;
  double tol = 1e-9;
};

Spectrum shoot_eigenvalues(double g, int count, const ShootingConfig& cfg = {});

double spectral_free_energy(const Spectrum& spec, double beta);

struct ClassicalPartition {
  double closed_form = 0.0;
  double quadrature = 0.0;
};
ClassicalPartition classical_partition(double beta, double g, const ModelParams& p);

// Scaled modified Bessel function e^z K_{1/4}(z); power series for z < 2 and
// the large-argument asymptotic expansion for z >= 2.
double bessel_k_quarter_scaled(double z);

// Adaptive Simpson quadrature.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-12, int max_depth = 48);

// Direct x-integration of the diagonal amplitude truncated at order N.
double quadrature_partition(const AmplitudeSeries& series, double beta, int N);

// Integrates the coupled master-equation system for the reduced variables
// c/sinh^l of order key.n from tau0 = 1e-3 (initial data from the symbolic
// Laurent expansion) and returns the maximum relative deviation between the
// integrated trajectory and the stored entry at the requested times.
double ode_coefficient_check(const CoeffTable& table, const CoeffKey& key,
                             const std::vector<double>& taus,
                             const ModelParams& p = {});

}  // namespace aho
