#include <doctest.h>

#include <cmath>
#include <vector>

#include "aho/oracle.hpp"
#include "aho/thermo.hpp"
#include "test_util.hpp"

using namespace aho;

namespace {

const ModelParams kNatural{};

// Rayleigh-quotient second opinion on the low spectrum: diagonalize the
// Hamiltonian truncated to the lowest harmonic-oscillator states with a
// plain Jacobi sweep.
std::vector<double> basis_spectrum(double g, int levels, int dim) {
  std::vector<std::vector<double>> h(dim, std::vector<double>(dim, 0.0));
  auto x2 = [&](int i, int j) -> double {
    if (i == j) return i + 0.5;
    if (i + 2 == j) return 0.5 * std::sqrt((i + 1.0) * (i + 2.0));
    if (j + 2 == i) return 0.5 * std::sqrt((j + 1.0) * (j + 2.0));
    return 0.0;
  };
  // x^4 = (x^2)^2 in the truncated basis needs the untruncated product;
  // assemble from the x^2 band matrix extended by two columns
  const int ext = dim + 4;
  std::vector<std::vector<double>> x2e(ext, std::vector<double>(ext, 0.0));
  for (int i = 0; i < ext; ++i)
    for (int j = 0; j < ext; ++j) x2e[i][j] = x2(i, j);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      double x4 = 0.0;
      for (int k = 0; k < ext; ++k) x4 += x2e[i][k] * x2e[k][j];
      h[i][j] = g * x4;
    }
    h[i][i] += i + 0.5;
  }
  // Jacobi eigenvalue iteration
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < dim; ++i)
      for (int j = i + 1; j < dim; ++j) off += h[i][j] * h[i][j];
    if (off < 1e-24) break;
    for (int p = 0; p < dim; ++p) {
      for (int q = p + 1; q < dim; ++q) {
        if (std::abs(h[p][q]) < 1e-18) continue;
        double theta = 0.5 * std::atan2(2.0 * h[p][q], h[q][q] - h[p][p]);
        double c = std::cos(theta), s = std::sin(theta);
        for (int k = 0; k < dim; ++k) {
          double hkp = h[k][p], hkq = h[k][q];
          h[k][p] = c * hkp - s * hkq;
          h[k][q] = s * hkp + c * hkq;
        }
        for (int k = 0; k < dim; ++k) {
          double hpk = h[p][k], hqk = h[q][k];
          h[p][k] = c * hpk - s * hqk;
          h[q][k] = s * hpk + c * hqk;
        }
      }
    }
  }
  std::vector<double> eig;
  for (int i = 0; i < dim; ++i) eig.push_back(h[i][i]);
  std::sort(eig.begin(), eig.end());
  eig.resize(static_cast<std::size_t>(levels));
  return eig;
}

}  // namespace

TEST_CASE("harmonic spectrum from the shooting integrator") {
  Spectrum s = shoot_eigenvalues(0.0, 10, ShootingConfig{8.0, 1e-4, 1e-9});
  for (int n = 0; n < 10; ++n)
    CHECK(s.energies[static_cast<std::size_t>(n)] ==
          doctest::Approx(n + 0.5).epsilon(1e-8));
}

TEST_CASE("quartic spectrum matches the basis-diagonalization oracle") {
  Spectrum s = shoot_eigenvalues(1.0, 6, ShootingConfig{8.0, 1e-4, 1e-9});
  std::vector<double> ref = basis_spectrum(1.0, 6, 70);
  for (int n = 0; n < 6; ++n)
    CHECK(s.energies[static_cast<std::size_t>(n)] ==
          doctest::Approx(ref[static_cast<std::size_t>(n)]).epsilon(2e-7));
  CHECK(s.energies[0] == doctest::Approx(0.8037701932).epsilon(2e-6));
}

TEST_CASE("halving the step barely moves the eigenvalues") {
  const double tol = 1e-8;
  Spectrum coarse = shoot_eigenvalues(1.0, 4, ShootingConfig{8.0, 2e-4, tol});
  Spectrum fine = shoot_eigenvalues(1.0, 4, ShootingConfig{8.0, 1e-4, tol});
  for (int n = 0; n < 4; ++n)
    CHECK(std::abs(coarse.energies[static_cast<std::size_t>(n)] -
                   fine.energies[static_cast<std::size_t>(n)]) < tol / 10.0);
}

TEST_CASE("spectral free energy") {
  Spectrum one;
  one.energies = {1.37};
  CHECK(spectral_free_energy(one, 0.8) == doctest::Approx(1.37).epsilon(1e-14));

  Spectrum s = shoot_eigenvalues(1.0, 10, ShootingConfig{8.0, 1e-4, 1e-9});
  CHECK(spectral_free_energy(s, 1.0) == doctest::Approx(0.6571).epsilon(8e-4));
  // beta -> infinity projects the ground state
  CHECK(spectral_free_energy(s, 60.0) ==
        doctest::Approx(s.energies[0]).epsilon(1e-12));
}

TEST_CASE("weak-coupling ground state: series limit vs shooting") {
  // E0(g) ~ 1/2 + (3/4) g - (21/8) g^2, truncation bounded by twice the
  // next term
  const double g = 0.01;
  Spectrum s = shoot_eigenvalues(g, 1, ShootingConfig{8.0, 1e-4, 1e-10});
  const double series = 0.5 + 0.75 * g - 21.0 / 8.0 * g * g;
  const double next = 333.0 / 16.0 * g * g * g;
  CHECK(std::abs(s.energies[0] - series) <= 2.0 * next);
  CHECK(std::abs(s.energies[0] - series) > 0.0);
}

TEST_CASE("classical partition function: series vs quadrature") {
  for (double beta : {0.05, 0.1, 0.25}) {
    ClassicalPartition z = classical_partition(beta, 1.0, kNatural);
    CHECK(z.closed_form == doctest::Approx(z.quadrature).epsilon(1e-8));
  }
  // independent oracle: K_nu(z) = int_0^inf e^{-z cosh t} cosh(nu t) dt;
  // tolerance follows the branch floors (series cancellation, smallest
  // asymptotic term)
  for (auto [z, tol] : {std::pair{0.5, 1e-11}, {1.9, 1e-11}, {5.0, 1e-10},
                        {9.9, 1e-7}, {10.1, 1e-7}, {13.0, 1e-9}, {50.0, 1e-12}}) {
    double kint = integrate(
        [&](double t) { return std::exp(-z * (std::cosh(t) - 1.0)) * std::cosh(0.25 * t); },
        0.0, std::acosh(1.0 + 700.0 / z), 1e-13);
    CHECK(bessel_k_quarter_scaled(z) == doctest::Approx(kint).epsilon(tol));
  }
  // scaled asymptotics approach sqrt(pi/2); the 1/z correction is still
  // 1.9e-3 at z = 50, the limit itself is only met at very large argument
  CHECK(std::abs(bessel_k_quarter_scaled(50.0) * std::sqrt(50.0) - std::sqrt(M_PI / 2.0)) <
        3.0 / (16.0 * 50.0));
  CHECK(bessel_k_quarter_scaled(1e6) * std::sqrt(1e6) ==
        doctest::Approx(std::sqrt(M_PI / 2.0)).epsilon(1e-6));
  // even integrand: doubled half line equals the full line
  const double beta = 0.1, g = 1.0;
  auto f = [&](double x) { return std::exp(-beta * (0.5 * x * x + g * std::pow(x, 4))); };
  double full = integrate(f, -10.0, 10.0, 1e-12);
  double half = 2.0 * integrate(f, 0.0, 10.0, 1e-12);
  CHECK(full == doctest::Approx(half).epsilon(1e-10));
}

TEST_CASE("direct partition quadrature at zero coupling") {
  const CoeffTable& t = testutil::table(1);
  AmplitudeSeries s{1, &t, kNatural};
  for (double beta : {0.5, 1.0, 2.0}) {
    double want = 1.0 / (2.0 * std::sinh(beta / 2.0));
    CHECK(quadrature_partition(s, beta, 0) == doctest::Approx(want).epsilon(1e-10));
  }
}

TEST_CASE("stored coefficients satisfy the master flow numerically") {
  const CoeffTable& t = testutil::table(2);
  CHECK(ode_coefficient_check(t, CoeffKey{0, 0, 0}, {0.5, 1.0, 3.0}) < 1e-12);
  CHECK(ode_coefficient_check(t, CoeffKey{1, 2, 4}, {0.5, 1.0, 2.0}) < 1e-8);
  CHECK(ode_coefficient_check(t, CoeffKey{1, 0, 0}, {0.5, 1.0, 2.0}) < 1e-8);
  CHECK(ode_coefficient_check(t, CoeffKey{2, 3, 2}, {0.5, 1.0}) < 1e-8);

  // frozen values of the reduced first-order entries at tau = 1 (quadrature
  // oracle: -(integral of sinh^4 over [0,1]) and the bubble closed form)
  ModelParams p = kNatural;
  double quartic = integrate([](double x) { return std::pow(std::sinh(x), 4); }, 0, 1, 1e-13);
  CHECK(t.at(1, 2, 4).evaluate(1.0, p) == doctest::Approx(-quartic).epsilon(1e-12));
  const double s1 = std::sinh(1.0), s2 = std::sinh(2.0), c2 = std::cosh(2.0);
  double bubble = -(-9.0 / 16.0 * s2 + 0.75 + 3.0 / 8.0 * c2) / (s1 * s1);
  CHECK(t.at(1, 0, 0).evaluate(1.0, p) == doctest::Approx(bubble).epsilon(1e-12));
  CHECK(bubble == doctest::Approx(-0.0874048).epsilon(1e-5));
}
