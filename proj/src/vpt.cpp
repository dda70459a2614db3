#include "aho/vpt.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <tuple>

#include "aho/errors.hpp"

namespace aho {

VptSeries::VptSeries(const ThermalSeries& src, int order) : order_(order) {
  if (src.order < order) throw AlgebraError("vpt: thermal series shorter than requested order");
  const int depth = 2 * order;  // covers j <= (order - n) + criterion order
  derivs_.resize(static_cast<std::size_t>(order) + 1);
  for (int n = 0; n <= order; ++n) {
    auto& row = derivs_[static_cast<std::size_t>(n)];
    if (n == 0) {
      row.push_back(HypExpr::zero(Nu::Half));  // j = 0 placeholder, log special case
      row.push_back(harmonic_free_energy_domega());
    } else {
      row.push_back(src.f[static_cast<std::size_t>(n)]);
    }
    while (static_cast<int>(row.size()) <= depth - n)
      row.push_back(row.back().differentiate_omega());
  }
}

const HypExpr& VptSeries::deriv(int n, int j) const {
  return derivs_[static_cast<std::size_t>(n)][static_cast<std::size_t>(j)];
}

namespace {

// a_{j,i} = [t^i] (sqrt(1+t) - 1)^j for 0 <= j, i <= depth.
std::vector<std::vector<Rational>> sqrt_shift_powers(int depth) {
  std::vector<Rational> s(static_cast<std::size_t>(depth) + 1, Rational(0));
  Rational binom(1);
  for (int i = 1; i <= depth; ++i) {
    binom *= Rational(3 - 2 * i, 2 * i);  // binomial(1/2, i) recurrence
    s[static_cast<std::size_t>(i)] = binom;
  }
  std::vector<std::vector<Rational>> pw;
  std::vector<Rational> cur(static_cast<std::size_t>(depth) + 1, Rational(0));
  cur[0] = Rational(1);
  pw.push_back(cur);
  for (int j = 1; j <= depth; ++j) {
    std::vector<Rational> nxt(cur.size(), Rational(0));
    for (std::size_t i = 0; i < cur.size(); ++i) {
      if (cur[i].is_zero()) continue;
      for (std::size_t t = 1; t < s.size() && i + t < nxt.size(); ++t)
        nxt[i + t] += cur[i] * s[t];
    }
    cur = nxt;
    pw.push_back(cur);
  }
  return pw;
}

}  // namespace

Resummation::Resummation(const VptSeries& series, int order)
    : series_(&series), order_(order) {
  if (order > series.order()) throw AlgebraError("vpt: resummation order beyond series");
  const auto a = sqrt_shift_powers(order);

  // F^{(N)}(beta, Omega) = sum_n g^n sum_j (Omega^j/j!) d^j F_n(Omega)
  //                        sum_{i=j}^{N-n} a_{j,i} rho^i,
  // rho = omega^2/Omega^2 - 1, binomially expanded so each term is a pure
  // power of omega^2 and Omega.
  std::map<std::tuple<int, int, int, int>, Rational> merged;
  for (int n = 0; n <= order; ++n) {
    const int depth = order - n;
    Rational jfact(1);
    for (int j = 0; j <= depth; ++j) {
      if (j > 0) jfact *= Rational(j);
      for (int i = j; i <= depth; ++i) {
        const Rational& aji = a[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
        if (aji.is_zero()) continue;
        for (int q = 0; q <= i; ++q) {
          Rational c = aji / jfact * binomial(i, q);
          if ((i - q) % 2 != 0) c = -c;
          merged[{q, j - 2 * q, n, j}] += c;
        }
      }
    }
  }
  std::vector<Term> clean;
  for (const auto& [k, c] : merged) {
    if (c.is_zero()) continue;
    auto [wq, pom, n, j] = k;
    clean.push_back(Term{c, wq, pom, n, j});
  }
  dterms_.push_back(std::move(clean));

  // exact Omega-derivatives of the assembled form
  for (int p = 1; p <= order; ++p) {
    std::map<std::tuple<int, int, int, int>, Rational> next;
    for (const auto& t : dterms_.back()) {
      if (t.pom != 0) next[{t.wq, t.pom - 1, t.n, t.j}] += t.c * Rational(t.pom);
      next[{t.wq, t.pom, t.n, t.j + 1}] += t.c;
    }
    std::vector<Term> lst;
    for (const auto& [k, c] : next) {
      if (c.is_zero()) continue;
      auto [wq, pom, n, j] = k;
      lst.push_back(Term{c, wq, pom, n, j});
    }
    dterms_.push_back(std::move(lst));
  }
}

double Resummation::eval_terms(const std::vector<Term>& terms, double beta,
                               double omega_trial, const ModelParams& p) const {
  const double tau = p.hbar * beta;
  ModelParams trial = p;
  trial.omega = omega_trial;
  const double w2 = p.omega * p.omega;
  double total = 0.0;
  for (const auto& t : terms) {
    double d;
    if (t.n == 0 && t.j == 0) {
      d = harmonic_free_energy(beta, trial);
    } else {
      d = series_->deriv(t.n, t.j).evaluate(tau, trial);
    }
    if (d == 0.0) continue;
    total += t.c.to_double() * d * std::pow(p.g, t.n) * std::pow(w2, t.wq) *
             std::pow(omega_trial, t.pom);
  }
  return total;
}

double Resummation::value(double beta, double omega_trial, const ModelParams& p) const {
  return eval_terms(dterms_[0], beta, omega_trial, p);
}

double Resummation::omega_derivative(int p, double beta, double omega_trial,
                                     const ModelParams& p_model) const {
  if (p <= 0 || p >= static_cast<int>(dterms_.size()))
    throw AlgebraError("vpt: derivative order out of range");
  return eval_terms(dterms_[static_cast<std::size_t>(p)], beta, omega_trial, p_model);
}

namespace {

double bisect_root(const std::function<double(double)>& f, double lo, double hi,
                   double flo, double tol) {
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    double mid = 0.5 * (lo + hi);
    double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((flo < 0) == (fm < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

VptSolution optimize_omega(const VptSeries& series, int order, double beta, double g,
                           const ScanRange& scan, double tol, const ModelParams& base,
                           std::optional<double> warm_start) {
  ModelParams p = base;
  p.g = g;
  Resummation resum(series, order);
  const int steps = std::max(scan.steps, 8);
  const double lo = scan.lo * base.omega, hi = scan.hi * base.omega;

  for (int crit = 1; crit <= order; ++crit) {
    auto fun = [&](double om) { return resum.omega_derivative(crit, beta, om, p); };
    std::vector<double> roots, blo, bhi;
    double prev_x = lo, prev_f = fun(lo);
    for (int i = 1; i <= steps; ++i) {
      double x = lo + (hi - lo) * i / steps;
      double fx = fun(x);
      if (std::isfinite(prev_f) && std::isfinite(fx) && (prev_f < 0) != (fx < 0)) {
        roots.push_back(bisect_root(fun, prev_x, x, prev_f, tol));
        blo.push_back(prev_x);
        bhi.push_back(x);
      }
      prev_x = x;
      prev_f = fx;
    }
    if (roots.empty()) continue;

    int pick = -1;
    if (warm_start) {
      double best = 0.0;
      for (std::size_t i = 0; i < roots.size(); ++i) {
        double d = std::abs(roots[i] - *warm_start);
        if (pick < 0 || d < best) {
          best = d;
          pick = static_cast<int>(i);
        }
      }
    } else {
      // lowest branch: smallest trial frequency with a bounded value
      for (std::size_t i = 0; i < roots.size(); ++i) {
        double v = resum.value(beta, roots[i], p);
        if (std::isfinite(v) && std::abs(v) < 1e9) {
          pick = static_cast<int>(i);
          break;
        }
      }
    }
    if (pick < 0) continue;

    VptSolution sol;
    sol.beta = beta;
    sol.g = g;
    sol.order = order;
    sol.omega_star = roots[static_cast<std::size_t>(pick)];
    sol.criterion_order = crit;
    sol.value = resum.value(beta, sol.omega_star, p);
    sol.bracket_lo = blo[static_cast<std::size_t>(pick)];
    sol.bracket_hi = bhi[static_cast<std::size_t>(pick)];
    sol.residual = std::abs(fun(sol.omega_star));
    sol.branch_index = pick;
    return sol;
  }
  throw NoCriterionRoot("vpt: no derivative root in the scan interval");
}

ConvergenceReport convergence_report(const VptSeries& series, double beta, double g,
                                     int max_order, double reference,
                                     const ModelParams& base) {
  if (max_order > series.order()) throw AlgebraError("vpt: report order beyond series");
  ConvergenceReport rep;
  for (int n = 1; n <= max_order; ++n) {
    VptSolution sol = optimize_omega(series, n, beta, g, ScanRange{}, 1e-10, base);
    rep.rows.push_back(
        ConvergenceRow{n, sol.omega_star, sol.value, std::abs(sol.value - reference),
                       sol.criterion_order});
  }

  // least-squares fit of log|err| vs order, odd and even orders separately;
  // an error at rounding level makes the exponential fit meaningless
  const double floor = 1e-14 * std::max(1.0, std::abs(reference));
  for (const auto& r : rep.rows)
    if (r.abs_err <= floor) rep.degenerate = true;
  auto fit = [&](int parity, double& rate) {
    std::vector<double> xs, ys;
    for (const auto& r : rep.rows) {
      if (r.order % 2 != parity || r.abs_err <= floor) continue;
      xs.push_back(r.order);
      ys.push_back(std::log(r.abs_err));
    }
    if (xs.size() < 2) return;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sx += xs[i];
      sy += ys[i];
      sxx += xs[i] * xs[i];
      sxy += xs[i] * ys[i];
    }
    const double den = xs.size() * sxx - sx * sx;
    if (den != 0.0) rate = -(xs.size() * sxy - sx * sy) / den;
  };
  fit(1, rep.odd_rate);
  fit(0, rep.even_rate);
  return rep;
}

}  // namespace aho
