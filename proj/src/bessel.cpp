#include <cmath>

#include "aho/errors.hpp"
#include "aho/oracle.hpp"

namespace aho {

namespace {

constexpr double kGammaQuarter = 3.6256099082219083119;       // Gamma(1/4)
constexpr double kGammaThreeQuarter = 1.2254167024651776451;  // Gamma(3/4)

// I_nu(z) by its ascending series; gamma0 = Gamma(1 + nu).
double bessel_i_series(double z, double nu, double gamma0) {
  const double q = 0.25 * z * z;
  double sum = 0.0;
  double qpow = 1.0;
  double gamma = gamma0;  // Gamma(m + 1 + nu)
  double mfact = 1.0;
  for (int m = 0; m < 300; ++m) {
    const double term = qpow / (mfact * gamma);
    sum += term;
    if (term < 1e-18 * sum) break;
    qpow *= q;
    mfact *= (m + 1);
    gamma *= (m + 1.0 + nu);
  }
  return sum * std::pow(0.5 * z, nu);
}

}  // namespace

double bessel_k_quarter_scaled(double z) {
  if (z <= 0.0) throw AlgebraError("bessel: argument must be positive");
  const double nu = 0.25;
  // The ascending series cancels like e^{2z}, the asymptotic tail bottoms
  // out near its smallest term; both stay below ~1e-7 relative at the
  // crossover z = 10.
  if (z < 10.0) {
    // K_nu = pi/2 (I_{-nu} - I_nu)/sin(pi nu); sin(pi/4) = sqrt(2)/2
    const double im = bessel_i_series(z, -nu, kGammaThreeQuarter);
    const double ip = bessel_i_series(z, nu, 0.25 * kGammaQuarter);  // Gamma(5/4)
    return std::exp(z) * M_PI / std::sqrt(2.0) * (im - ip);
  }
  // Abramowitz & Stegun 9.7.2: K_nu(z) ~ sqrt(pi/2z) e^{-z} sum a_k,
  // a_k = a_{k-1} (mu - (2k-1)^2) / (8 z k), mu = 4 nu^2. Asymptotic;
  // stop at the smallest term.
  const double mu = 4.0 * nu * nu;
  double term = 1.0, sum = 1.0, prev = 1.0;
  for (int k = 1; k <= 30; ++k) {
    term *= (mu - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (8.0 * z * k);
    if (std::abs(term) > std::abs(prev)) break;
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    prev = term;
  }
  return std::sqrt(M_PI / (2.0 * z)) * sum;
}

ClassicalPartition classical_partition(double beta, double g, const ModelParams& p) {
  if (beta <= 0.0 || g <= 0.0) throw AlgebraError("classical: beta and g must be positive");
  ClassicalPartition out;
  const double lambda_th = std::sqrt(2.0 * M_PI * p.hbar * p.hbar * beta / p.mass);
  const double z = beta * p.mass * p.mass * std::pow(p.omega, 4) / (32.0 * g);
  out.closed_form = 0.5 / lambda_th * std::sqrt(p.mass * p.omega * p.omega / (2.0 * g)) *
                    bessel_k_quarter_scaled(z);

  auto integrand = [&](double x) {
    const double v = 0.5 * p.mass * p.omega * p.omega * x * x + g * x * x * x * x;
    return std::exp(-beta * v);
  };
  // even integrand; cut where the quartic tail is below underflow
  const double cut = std::pow(700.0 / (beta * g), 0.25) + 1.0;
  out.quadrature = 2.0 * integrate(integrand, 0.0, cut, 1e-14) / lambda_th;
  return out;
}

}  // namespace aho
