#include <cmath>
#include <cstddef>

#include "aho/errors.hpp"
#include "aho/oracle.hpp"

namespace aho {

namespace {

// Numerov sweep of psi'' = w(x) psi, w = 2 (V - E), from x = 0 outward.
// Returns the number of interior sign changes; that count is a Sturm
// counter: it equals the number of same-parity levels strictly below E.
int count_nodes(double energy, double g, bool even, double x_max, double h) {
  auto w = [&](double x) {
    const double v = 0.5 * x * x + g * x * x * x * x;
    return 2.0 * (v - energy);
  };
  const std::size_t n = static_cast<std::size_t>(x_max / h);
  double w0 = w(0.0), w1 = w(h);
  double psi0, psi1;
  if (even) {
    psi0 = 1.0;
    psi1 = psi0 * (1.0 + 5.0 * h * h * w0 / 12.0) / (1.0 - h * h * w1 / 12.0);
  } else {
    psi0 = 0.0;
    psi1 = h * (1.0 + w0 * h * h / 6.0);
  }
  int nodes = 0;
  double wm = w0, wc = w1;
  for (std::size_t i = 2; i <= n; ++i) {
    const double x = static_cast<double>(i) * h;
    const double wp = w(x);
    const double psi2 = (2.0 * psi1 * (1.0 + 5.0 * h * h * wc / 12.0) -
                         psi0 * (1.0 - h * h * wm / 12.0)) /
                        (1.0 - h * h * wp / 12.0);
    if ((psi2 < 0.0) != (psi1 < 0.0) && psi1 != 0.0) ++nodes;
    psi0 = psi1;
    psi1 = psi2;
    wm = wc;
    wc = wp;
    if (std::abs(psi1) > 1e250) {
      psi0 *= 1e-250;
      psi1 *= 1e-250;
    }
  }
  return nodes;
}

}  // namespace

Spectrum shoot_eigenvalues(double g, int count, const ShootingConfig& cfg) {
  Spectrum out;
  out.g = g;
  out.x_max = cfg.x_max;
  out.step = cfg.step;
  out.tol = cfg.tol;
  for (int level = 0; level < count; ++level) {
    const bool even = (level % 2 == 0);
    const int q = level / 2;  // same-parity levels below the target
    // bracket: nodes(lo) <= q < nodes(hi)
    double lo = 0.0;
    double hi = 2.0 * level + 2.0;
    int guard = 0;
    while (count_nodes(hi, g, even, cfg.x_max, cfg.step) <= q) {
      hi *= 2.0;
      if (++guard > 60) throw NoBracket("shooting: no node transition below energy ceiling");
    }
    while (hi - lo > cfg.tol) {
      const double mid = 0.5 * (lo + hi);
      if (count_nodes(mid, g, even, cfg.x_max, cfg.step) > q)
        hi = mid;
      else
        lo = mid;
    }
    out.energies.push_back(0.5 * (lo + hi));
  }
  return out;
}

double spectral_free_energy(const Spectrum& spec, double beta) {
  if (spec.energies.empty()) throw AlgebraError("oracle: empty spectrum");
  double z = 0.0;
  for (double e : spec.energies) z += std::exp(-beta * e);
  return -std::log(z) / beta;
}

}  // namespace aho
