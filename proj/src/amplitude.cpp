#include "aho/amplitude.hpp"

#include <cmath>
#include <map>

#include "aho/errors.hpp"

namespace aho {

double harmonic_amplitude(double xb, double xa, double beta, const ModelParams& p) {
  const double u = p.hbar * beta * p.omega;
  const double s = std::sinh(u);
  const double pref = std::sqrt(p.mass * p.omega / (2.0 * M_PI * p.hbar * s));
  const double expo = -(p.mass * p.omega / (2.0 * p.hbar * s)) *
                      ((xa * xa + xb * xb) * std::cosh(u) - 2.0 * xa * xb);
  return pref * std::exp(expo);
}

double classical_path(double tau, double xa, double xb, double beta, const ModelParams& p) {
  const double hb = p.hbar * beta;
  return (xa * std::sinh((hb - tau) * p.omega) + xb * std::sinh(p.omega * tau)) /
         std::sinh(hb * p.omega);
}

double green_dirichlet(double tau1, double tau2, double beta, const ModelParams& p) {
  const double hb = p.hbar * beta;
  if (tau1 < tau2) std::swap(tau1, tau2);
  // tau1 >= tau2; the theta split is symmetric at coincidence
  return p.hbar / (p.mass * p.omega) / std::sinh(hb * p.omega) *
         std::sinh((hb - tau1) * p.omega) * std::sinh(p.omega * tau2);
}

namespace {

struct WickContext {
  std::vector<double> times;
  double beta;
  double xa, xb;
  const ModelParams* p;
  std::map<std::vector<int>, double> memo;

  double eval(std::vector<int>& exps) {
    std::size_t i = 0;
    while (i < exps.size() && exps[i] == 0) ++i;
    if (i == exps.size()) return 1.0;
    auto it = memo.find(exps);
    if (it != memo.end()) return it->second;

    // contract x(t_i) against its n-1 siblings and all other factors, then
    // extract one classical path
    double total = 0.0;
    const double ti = times[i];
    --exps[i];
    total += classical_path(ti, xa, xb, beta, *p) * eval(exps);
    if (exps[i] > 0) {
      --exps[i];
      total += static_cast<double>(exps[i] + 1) * green_dirichlet(ti, ti, beta, *p) * eval(exps);
      ++exps[i];
    }
    for (std::size_t j = 0; j < exps.size(); ++j) {
      if (j == i || exps[j] == 0) continue;
      --exps[j];
      total += static_cast<double>(exps[j] + 1) *
               green_dirichlet(ti, times[j], beta, *p) * eval(exps);
      ++exps[j];
    }
    ++exps[i];
    memo.emplace(exps, total);
    return total;
  }
};

}  // namespace

double wick_expectation(const std::vector<std::pair<int, double>>& powers, double beta,
                        double xa, double xb, const ModelParams& p) {
  WickContext ctx;
  ctx.beta = beta;
  ctx.xa = xa;
  ctx.xb = xb;
  ctx.p = &p;
  std::vector<int> exps;
  for (const auto& [n, t] : powers) {
    exps.push_back(n);
    ctx.times.push_back(t);
  }
  return ctx.eval(exps);
}

AmplitudeTable::AmplitudeTable(const AmplitudeSeries& s, double beta)
    : order_(s.order), g_(s.params.g), beta_(beta), params_(s.params) {
  if (s.table == nullptr || s.table->max_order() < s.order)
    throw AlgebraError("amplitude: coefficient table incomplete for requested order");
  const double tau = params_.hbar * beta;
  reduced_.resize(static_cast<std::size_t>(order_) + 1);
  for (int n = 0; n <= order_; ++n) {
    auto& kn = reduced_[static_cast<std::size_t>(n)];
    kn.resize(static_cast<std::size_t>(2 * n) + 1);
    for (int k = 0; k <= 2 * n; ++k) {
      auto& kl = kn[static_cast<std::size_t>(k)];
      kl.resize(static_cast<std::size_t>(2 * k) + 1);
      for (int l = 0; l <= 2 * k; ++l)
        kl[static_cast<std::size_t>(l)] = s.table->at(n, k, l).div_sinh(l).evaluate(tau, params_);
    }
  }
}

double AmplitudeTable::a_factor(double xa, double xb, int order) const {
  double total = 0.0, gn = 1.0;
  for (int n = 0; n <= order; ++n) {
    double sum = 0.0;
    for (int k = 0; k <= 2 * n; ++k)
      for (int l = 0; l <= 2 * k; ++l)
        sum += reduced_[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)]
                       [static_cast<std::size_t>(l)] *
               std::pow(xa, 2 * k - l) * std::pow(xb, l);
    total += gn * sum;
    gn *= g_;
  }
  return total;
}

double AmplitudeTable::kernel(double xa, double xb) const {
  return harmonic_amplitude(xb, xa, beta_, params_);
}

AmplitudeValue evaluate_amplitude(const AmplitudeSeries& s, double xb, double xa, double beta) {
  AmplitudeTable table(s, beta);
  AmplitudeValue out;
  out.harmonic_factor = table.kernel(xa, xb);
  out.per_order.assign(static_cast<std::size_t>(s.order) + 1, 0.0);
  double gn = 1.0;
  for (int n = 0; n <= s.order; ++n) {
    out.per_order[static_cast<std::size_t>(n)] =
        table.a_factor(xa, xb, n) - (n > 0 ? table.a_factor(xa, xb, n - 1) : 0.0);
    gn *= s.params.g;
  }
  out.a_factor = table.a_factor(xa, xb, s.order);
  out.value = out.harmonic_factor * out.a_factor;
  return out;
}

double first_order_closed_form(double xb, double xa, double beta, const ModelParams& p) {
  const double u = p.hbar * beta * p.omega;  // full-angle thermal argument
  const double s = std::sinh(u), c = std::cosh(u);
  const double s2 = std::sinh(2 * u), c2 = std::cosh(2 * u);
  const double s3 = std::sinh(3 * u), s4 = std::sinh(4 * u);
  const double h = p.hbar, M = p.mass, w = p.omega;

  double bubble2 = h * h / (M * M * w * w * w * s * s) *
                   (-9.0 / 16.0 * s2 + 3.0 / 4.0 * u + 3.0 / 8.0 * u * c2);
  double quad = h / (M * w * w * s * s * s) *
                ((xa * xa + xb * xb) * (3.0 / 16.0 * s3 + 27.0 / 16.0 * s - 9.0 / 4.0 * u * c) +
                 xa * xb * (-9.0 / 4.0 * s2 + 3.0 * u + 3.0 / 2.0 * u * c2));
  double quart = 1.0 / (w * s * s * s * s) *
                 ((std::pow(xa, 4) + std::pow(xb, 4)) *
                      (1.0 / 32.0 * s4 - 1.0 / 4.0 * s2 + 3.0 / 8.0 * u) +
                  (std::pow(xa, 3) * xb + xa * std::pow(xb, 3)) *
                      (1.0 / 8.0 * s3 + 9.0 / 8.0 * s - 3.0 / 2.0 * u * c) +
                  xa * xa * xb * xb * (-9.0 / 8.0 * s2 + 3.0 / 2.0 * u + 3.0 / 4.0 * u * c2));

  const double a = 1.0 - p.g / p.hbar * (bubble2 + quad + quart);
  return harmonic_amplitude(xb, xa, beta, p) * a;
}

}  // namespace aho
