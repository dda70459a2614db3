#include <algorithm>
#include <cmath>
#include <map>

#include "aho/errors.hpp"
#include "aho/oracle.hpp"

namespace aho {

namespace {

double simpson(double a, double fa, double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive(const std::function<double(double)>& f, double a, double fa, double b,
                double fb, double m, double fm, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(a, fa, m, fm, flm);
  const double right = simpson(m, fm, b, fb, frm);
  const double delta = left + right - whole;
  // stop on the requested tolerance or once the correction is below the
  // local double-precision noise floor
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol ||
      std::abs(delta) <= 2e-16 * (std::abs(left) + std::abs(right)))
    return left + right + delta / 15.0;
  return adaptive(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adaptive(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double tol,
                 int max_depth) {
  // nine top-level panels; a single panel can be fooled by integrands whose
  // samples at the ends and midpoint all vanish
  constexpr int kPanels = 9;
  double edges[kPanels + 1], vals[kPanels + 1];
  for (int i = 0; i <= kPanels; ++i) {
    edges[i] = a + (b - a) * i / kPanels;
    vals[i] = f(edges[i]);
  }
  double rough = 0.0;
  double mids[kPanels], fmids[kPanels];
  for (int i = 0; i < kPanels; ++i) {
    mids[i] = 0.5 * (edges[i] + edges[i + 1]);
    fmids[i] = f(mids[i]);
    rough += simpson(edges[i], vals[i], edges[i + 1], vals[i + 1], fmids[i]);
  }
  const double scale = std::max({std::abs(rough), std::abs(b - a) * 1e-6, 1e-30});
  double total = 0.0;
  for (int i = 0; i < kPanels; ++i) {
    const double whole =
        simpson(edges[i], vals[i], edges[i + 1], vals[i + 1], fmids[i]);
    total += adaptive(f, edges[i], vals[i], edges[i + 1], vals[i + 1], mids[i], fmids[i],
                      whole, tol * scale / kPanels, max_depth);
  }
  return total;
}

double quadrature_partition(const AmplitudeSeries& series, double beta, int N) {
  if (N > series.order) throw AlgebraError("oracle: order beyond amplitude series");
  const ModelParams& p = series.params;
  const double alpha =
      p.mass * p.omega / p.hbar * std::tanh(p.hbar * beta * p.omega / 2.0);
  const double cut = std::sqrt(120.0 / alpha);
  AmplitudeTable table(series, beta);
  auto diag = [&](double x) { return table.kernel(x, x) * table.a_factor(x, x, N); };
  return integrate(diag, -cut, cut, 1e-13);
}

namespace {

// Flattened numeric view of an expression for tight evaluation loops with
// fixed parameters.
struct CompiledExpr {
  struct T {
    double c;
    int a, b;
  };
  std::vector<T> terms;
  int m = 0;
  double nu_den = 1.0;

  CompiledExpr() = default;
  CompiledExpr(const HypExpr& e, const ModelParams& p) {
    m = e.denom_power();
    nu_den = (e.nu() == Nu::Half) ? 2.0 : 1.0;
    for (const auto& [k, c] : e.terms()) {
      double v = c.to_double() * std::pow(p.hbar, k.eh) * std::pow(p.mass, k.em) *
                 std::pow(p.omega, k.ew);
      terms.push_back(T{v, k.a, k.b});
    }
  }

  double operator()(double tau, double omega) const {
    const double x = omega * tau / nu_den;
    double num = 0.0;
    for (const auto& t : terms) {
      double v = t.c;
      for (int i = 0; i < t.a; ++i) v *= tau;
      if (t.b != 0) v *= std::exp(t.b * x);
      num += v;
    }
    if (m != 0) num /= std::pow(std::sinh(x), m);
    return num;
  }
};

// Dormand-Prince 5(4) adaptive step integrator for small dense systems.
using Deriv = std::function<void(double, const std::vector<double>&, std::vector<double>&)>;

void dopri5(const Deriv& deriv, double t0, double t1, std::vector<double>& y,
            double rel_tol, double abs_tol) {
  static const double c[7] = {0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
  static const double a[7][6] = {
      {},
      {1.0 / 5},
      {3.0 / 40, 9.0 / 40},
      {44.0 / 45, -56.0 / 15, 32.0 / 9},
      {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
      {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
      {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
  static const double b5[7] = {35.0 / 384,      0.0,  500.0 / 1113, 125.0 / 192,
                               -2187.0 / 6784, 11.0 / 84, 0.0};
  static const double b4[7] = {5179.0 / 57600,  0.0,        7571.0 / 16695, 393.0 / 640,
                               -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

  const std::size_t dim = y.size();
  std::vector<double> k[7], ytmp(dim), y5(dim), y4(dim);
  for (auto& v : k) v.assign(dim, 0.0);
  double t = t0;
  double h = (t1 - t0) * 1e-3;
  int guard = 0;
  while (t < t1 && ++guard < 2000000) {
    if (t + h > t1) h = t1 - t;
    deriv(t, y, k[0]);
    for (int s = 1; s < 7; ++s) {
      for (std::size_t i = 0; i < dim; ++i) {
        double acc = y[i];
        for (int r = 0; r < s; ++r) acc += h * a[s][r] * k[r][i];
        ytmp[i] = acc;
      }
      deriv(t + c[s] * h, ytmp, k[s]);
    }
    double err = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      double v5 = y[i], v4 = y[i];
      for (int s = 0; s < 7; ++s) {
        v5 += h * b5[s] * k[s][i];
        v4 += h * b4[s] * k[s][i];
      }
      y5[i] = v5;
      y4[i] = v4;
      const double sc = abs_tol + rel_tol * std::max(std::abs(y[i]), std::abs(v5));
      err = std::max(err, std::abs(v5 - v4) / sc);
    }
    if (err <= 1.0) {
      t += h;
      y = y5;
    }
    const double fac = std::clamp(0.9 * std::pow(err > 0 ? err : 1e-10, -0.2), 0.2, 5.0);
    h *= fac;
  }
}

}  // namespace

double ode_coefficient_check(const CoeffTable& table, const CoeffKey& key,
                             const std::vector<double>& taus, const ModelParams& p) {
  if (!CoeffKey::valid(key.n, key.k, key.l))
    throw AlgebraError("oracle: invalid coefficient key");
  const int n = key.n;

  // reduced variables chat = c/sinh^l of order n, plus symbolic sources of
  // order n-1
  struct Var {
    int k, l;
    HypExpr reduced;
  };
  std::vector<Var> vars;
  std::map<std::pair<int, int>, int> index;
  for (int k = 0; k <= 2 * n; ++k) {
    for (int l = 0; l <= 2 * k; ++l) {
      index[{k, l}] = static_cast<int>(vars.size());
      vars.push_back(Var{k, l, table.at(n, k, l).div_sinh(l)});
    }
  }
  std::map<std::pair<int, int>, CompiledExpr> sources;  // order n-1, reduced
  for (int k = 0; k <= 2 * n; ++k) {
    for (int l = 0; l <= 2 * k; ++l) {
      if (CoeffKey::valid(n - 1, k - 2, l - 4))
        sources.emplace(std::make_pair(k, l),
                        CompiledExpr(table.at(n - 1, k - 2, l - 4).div_sinh(l - 4), p));
    }
  }

  const double w = p.omega, h = p.hbar, M = p.mass;
  Deriv deriv = [&](double t, const std::vector<double>& y, std::vector<double>& dy) {
    const double s = std::sinh(w * t), c = std::cosh(w * t);
    for (std::size_t i = 0; i < vars.size(); ++i) {
      const int k = vars[i].k, l = vars[i].l;
      double acc = 0.0;
      if (auto it = index.find({k + 1, l + 2});
          it != index.end() && CoeffKey::valid(n, k + 1, l + 2))
        acc += (l + 2) * (l + 1) * h / (2.0 * M) * y[static_cast<std::size_t>(it->second)];
      if (auto it = index.find({k, l + 1});
          it != index.end() && CoeffKey::valid(n, k, l + 1))
        acc += (l + 1) * w * y[static_cast<std::size_t>(it->second)] / s;
      acc -= l * w * c / s * y[i];
      if (auto it = sources.find({k, l}); it != sources.end())
        acc -= it->second(t, w) / h;
      dy[i] = acc;
    }
  };

  const double tau0 = 1e-3;
  std::vector<double> y(vars.size());
  for (std::size_t i = 0; i < vars.size(); ++i) {
    // initial data from the symbolic Laurent expansion at tau0
    LaurentSeries ls = vars[i].reduced.laurent(10);
    const double x = w * tau0;
    long double acc = 0.0L;
    for (int j = ls.lowest; j < static_cast<int>(ls.coeffs.size()) + ls.lowest; ++j)
      acc += ls.at(j).to_long_double() * std::pow((long double)x, j);
    acc *= std::pow((long double)p.hbar, ls.eh) * std::pow((long double)p.mass, ls.em) *
           std::pow((long double)p.omega, ls.ew);
    y[i] = static_cast<double>(acc);
  }

  std::vector<double> sorted = taus;
  std::sort(sorted.begin(), sorted.end());
  const int target = index.at({key.k, key.l});
  double t = tau0;
  double worst = 0.0;
  for (double tau : sorted) {
    if (tau <= t) continue;
    dopri5(deriv, t, tau, y, 1e-11, 1e-14);
    t = tau;
    const double numeric = y[static_cast<std::size_t>(target)];
    const double symbolic = vars[static_cast<std::size_t>(target)].reduced.evaluate(tau, p);
    const double scale = std::max(std::abs(symbolic), 1e-12);
    worst = std::max(worst, std::abs(numeric - symbolic) / scale);
  }
  return worst;
}

}  // namespace aho
