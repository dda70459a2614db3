#include "aho/thermo.hpp"

#include <cmath>

#include "aho/errors.hpp"

namespace aho {

ThermalSeries z_series(const CoeffTable& table, int order) {
  if (table.max_order() < order)
    throw AlgebraError("thermo: coefficient table incomplete for requested order");
  ThermalSeries out;
  out.order = order;
  out.z.assign(static_cast<std::size_t>(order) + 1, HypExpr::zero(Nu::Half));
  out.f.assign(static_cast<std::size_t>(order) + 1, HypExpr::zero(Nu::Half));
  out.z[0] = HypExpr::one(Nu::Half);

  // coth(u/2) = (cosh u + 1)/sinh u keeps the Gaussian-moment weights in the
  // full-angle basis; the half-angle rebase happens once per order.
  const HypExpr coth_half =
      (HypExpr::cosh_multi(1, Nu::Full) + HypExpr::one(Nu::Full)).div_sinh(1);

  for (int n = 1; n <= order; ++n) {
    HypExpr zn = HypExpr::zero(Nu::Full);
    HypExpr weight = HypExpr::one(Nu::Full);  // coth^k(u/2)
    for (int k = 0; k <= 2 * n; ++k) {
      if (k > 0) weight = weight * coth_half;
      HypExpr inner = HypExpr::zero(Nu::Full);
      for (int l = 0; l <= 2 * k; ++l) inner = inner + table.at(n, k, l).div_sinh(l);
      if (inner.is_zero()) continue;
      HypExpr moment = weight.scaled(double_factorial_odd(k) * Rational(1, 1 << k))
                           .shifted_params(k, -k, -k);
      zn = zn + moment * inner;
    }
    out.z[static_cast<std::size_t>(n)] = zn.rebase_half();
  }

  // log expansion: n l_n = n z_n - sum_{j<n} j l_j z_{n-j}; F_n = -(hbar/tau) l_n
  std::vector<HypExpr> l(static_cast<std::size_t>(order) + 1, HypExpr::zero(Nu::Half));
  for (int n = 1; n <= order; ++n) {
    HypExpr acc = out.z[static_cast<std::size_t>(n)].scaled(Rational(n));
    for (int j = 1; j < n; ++j)
      acc = acc - (l[static_cast<std::size_t>(j)] * out.z[static_cast<std::size_t>(n - j)])
                      .scaled(Rational(j));
    l[static_cast<std::size_t>(n)] = acc.scaled(Rational(1, n));
    out.f[static_cast<std::size_t>(n)] =
        l[static_cast<std::size_t>(n)].div_tau().shifted_params(1, 0, 0).scaled(Rational(-1));
  }
  return out;
}

double harmonic_free_energy(double beta, const ModelParams& p) {
  return std::log(2.0 * std::sinh(p.hbar * beta * p.omega / 2.0)) / beta;
}

HypExpr harmonic_free_energy_domega() {
  return HypExpr::cosh_multi(1, Nu::Half).div_sinh(1).scaled(Rational(1, 2)).shifted_params(1, 0, 0);
}

FreeEnergyEval f_series_eval(const ThermalSeries& s, double beta, int N, const ModelParams& p) {
  if (N > s.order) throw AlgebraError("thermo: order beyond series");
  FreeEnergyEval out;
  const double tau = p.hbar * beta;
  out.per_order.assign(static_cast<std::size_t>(N) + 1, 0.0);
  out.per_order[0] = harmonic_free_energy(beta, p);
  double gn = 1.0;
  out.truncated = out.per_order[0];
  for (int n = 1; n <= N; ++n) {
    gn *= p.g;
    const double fn = s.f[static_cast<std::size_t>(n)].evaluate(tau, p);
    out.per_order[static_cast<std::size_t>(n)] = fn;
    out.truncated += gn * fn;
  }
  return out;
}

double GroundStateTerm::numeric(const ModelParams& p) const {
  return coeff.to_double() * std::pow(p.hbar, eh) * std::pow(p.mass, em) *
         std::pow(p.omega, ew);
}

GroundStateTerm ground_state_limit(const ThermalSeries& s, int n) {
  if (n == 0) return GroundStateTerm{Rational(1, 2), 1, 0, 1};
  if (n > s.order) throw AlgebraError("thermo: order beyond series");
  const HypExpr& f = s.f[static_cast<std::size_t>(n)];
  const int m = f.denom_power();
  GroundStateTerm out;
  bool found = false;
  for (const auto& [k, c] : f.terms()) {
    if (k.b > m || (k.b == m && k.a > 0))
      throw NoFiniteLimit("thermo: free-energy coefficient diverges at low temperature");
    if (k.b == m && k.a == 0) {
      Rational v = c;
      for (int i = 0; i < m; ++i) v *= Rational(2);
      out.coeff = v;
      out.eh = k.eh;
      out.em = k.em;
      out.ew = k.ew;
      found = true;
    }
  }
  if (!found) out = GroundStateTerm{Rational(0), 0, 0, 0};
  return out;
}

double periodic_green(double tau1, double tau2, double beta, const ModelParams& p) {
  const double half = p.hbar * beta * p.omega / 2.0;
  return p.hbar / (2.0 * p.mass * p.omega) *
         std::cosh(half - std::abs(tau1 - tau2) * p.omega) / std::sinh(half);
}

double diagram_reference(DiagramId id, double beta, const ModelParams& p) {
  const double u = p.hbar * beta * p.omega;
  const double half = u / 2.0;
  const double h = p.hbar, M = p.mass, w = p.omega;
  const double coth = 1.0 / std::tanh(half);
  switch (id) {
    case DiagramId::D1:
      return std::pow(h, 3) * beta / (4.0 * M * M * w * w) * coth * coth;
    case DiagramId::D21:
      return std::pow(h, 5) * beta * coth * coth /
             (32.0 * std::pow(M, 4) * std::pow(w, 5) * std::pow(std::sinh(half), 2)) *
             (u + std::sinh(u));
    case DiagramId::D22:
      return std::pow(h, 5) * beta /
             (256.0 * std::pow(M, 4) * std::pow(w, 5) * std::pow(std::sinh(half), 4)) *
             (std::sinh(2.0 * u) + 8.0 * std::sinh(u) + 6.0 * u);
  }
  throw AlgebraError("thermo: unknown diagram");
}

double gaussian_even_moment(int m, double alpha) {
  return double_factorial_odd(m).to_double() * std::sqrt(M_PI / alpha) /
         std::pow(2.0 * alpha, m);
}

}  // namespace aho
