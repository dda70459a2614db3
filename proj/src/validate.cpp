#include "aho/validate.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include "aho/errors.hpp"
#include "aho/oracle.hpp"
#include "aho/thermo.hpp"
#include "aho/vpt.hpp"

namespace aho {

namespace {

struct Runner {
  std::vector<CheckResult> results;

  void run(const std::string& name, const std::function<std::string()>& body) {
    CheckResult r;
    r.name = name;
    try {
      r.detail = body();  // empty string means pass
      r.pass = r.detail.empty();
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = e.what();
    }
    results.push_back(std::move(r));
  }
};

std::string check_close(double got, double want, double tol, const char* what) {
  const double scale = std::max(std::abs(want), 1e-30);
  if (std::abs(got - want) / scale <= tol) return {};
  std::ostringstream os;
  os << what << ": got " << got << ", want " << want << " (rel "
     << std::abs(got - want) / scale << ")";
  return os.str();
}

const CoeffTable& shared_table(int order) {
  static CoeffTable table;
  table.extend(order);
  return table;
}

void recursion_checks(Runner& r) {
  const int deep = 3;
  const CoeffTable& t = shared_table(deep);

  r.run("recursion.counts", [&] {
    for (int n = 0; n <= deep; ++n) {
      auto st = CoeffTable::stats(n);
      if (static_cast<long long>(t.entries_at(n)) != st.total)
        return std::string("entry count mismatch");
      if (n >= 1 && t.integrations(n) != st.integrations)
        return std::string("integration count mismatch");
    }
    return std::string();
  });

  r.run("recursion.symmetry", [&] {
    for (int n = 0; n <= deep; ++n)
      for (int k = 0; k <= 2 * n; ++k)
        for (int l = 0; l <= 2 * k; ++l)
          if (!(t.at(n, k, l).div_sinh(l) == t.at(n, k, 2 * k - l).div_sinh(2 * k - l)))
            return std::string("mirror identity violated");
    return std::string();
  });

  r.run("recursion.master_equation", [&] {
    for (int n = 1; n <= deep; ++n)
      for (int k = 0; k <= 2 * n; ++k)
        for (int l = 0; l <= 2 * k; ++l)
          if (!(t.at(n, k, l).differentiate() == t.ode_rhs(n, k, l)))
            return std::string("master equation violated");
    return std::string();
  });

  r.run("recursion.log_free_regular", [&] {
    for (const auto& [key, e] : t.entries()) {
      if (e.has_log()) return std::string("log generator survived");
      LaurentSeries ls = e.div_sinh(key.l).laurent(1);
      for (int j = ls.lowest; j < 0; ++j)
        if (!ls.at(j).is_zero()) return std::string("negative Laurent power");
      if (key.n >= 1 && !ls.at(0).is_zero())
        return std::string("entry does not vanish at tau = 0");
    }
    return std::string();
  });

  r.run("recursion.ode_quadrature", [&] {
    for (CoeffKey key : {CoeffKey{1, 2, 4}, CoeffKey{1, 0, 0}, CoeffKey{2, 1, 1}}) {
      double dev = ode_coefficient_check(t, key, {0.5, 1.0, 2.0});
      if (dev > 1e-8) {
        std::ostringstream os;
        os << "deviation " << dev << " at (" << key.n << "," << key.k << "," << key.l << ")";
        return os.str();
      }
    }
    return std::string();
  });
}

void thermo_checks(Runner& r) {
  const CoeffTable& t = shared_table(3);
  ThermalSeries ts = z_series(t, 2);
  ModelParams p;

  r.run("thermo.first_order_forms", [&] {
    // z1 = -(3 hbar tau / 4 M^2 w^2) coth^2(w tau / 2)
    HypExpr coth2 = (HypExpr::cosh_multi(1, Nu::Half) * HypExpr::cosh_multi(1, Nu::Half))
                        .div_sinh(2);
    HypExpr z1 = coth2.scaled(Rational(-3, 4)).shifted_params(1, -2, -2) * HypExpr::tau_term(Nu::Half);
    if (!(ts.z[1] == z1)) return std::string("z1 mismatch");
    HypExpr f1 = coth2.scaled(Rational(3, 4)).shifted_params(2, -2, -2);
    if (!(ts.f[1] == f1)) return std::string("F1 mismatch");
    return std::string();
  });

  r.run("thermo.ground_state_limits", [&] {
    auto g0 = ground_state_limit(ts, 0);
    auto g1 = ground_state_limit(ts, 1);
    auto g2 = ground_state_limit(ts, 2);
    if (!(g0.coeff == Rational(1, 2) && g0.eh == 1 && g0.ew == 1)) return std::string("n=0");
    if (!(g1.coeff == Rational(3, 4) && g1.eh == 2 && g1.em == -2 && g1.ew == -2))
      return std::string("n=1");
    if (!(g2.coeff == Rational(-21, 8) && g2.eh == 3 && g2.em == -4 && g2.ew == -5))
      return std::string("n=2");
    return std::string();
  });

  r.run("thermo.diagram_quadrature", [&] {
    for (double beta : {0.7, 1.0, 2.3}) {
      const double hb = p.hbar * beta;
      auto gp = [&](double a, double b) { return periodic_green(a, b, beta, p); };
      double d1 = integrate([&](double u) { return gp(u, u) * gp(u, u); }, 0, hb, 1e-12);
      double d21 = integrate(
          [&](double u) {
            return integrate(
                [&](double v) { return gp(u, u) * gp(u, v) * gp(u, v) * gp(v, v); }, 0, hb,
                1e-11);
          },
          0, hb, 1e-11);
      double d22 = integrate(
          [&](double u) {
            return integrate([&](double v) { return std::pow(gp(u, v), 4); }, 0, hb, 1e-11);
          },
          0, hb, 1e-11);
      std::string e;
      e = check_close(diagram_reference(DiagramId::D1, beta, p), d1, 1e-8, "D1");
      if (!e.empty()) return e;
      e = check_close(diagram_reference(DiagramId::D21, beta, p), d21, 1e-8, "D21");
      if (!e.empty()) return e;
      e = check_close(diagram_reference(DiagramId::D22, beta, p), d22, 1e-8, "D22");
      if (!e.empty()) return e;
    }
    return std::string();
  });

  r.run("thermo.partition_triangle", [&] {
    for (double beta : {0.5, 1.0, 2.0}) {
      for (double g : {0.1, 1.0}) {
        ModelParams pg = p;
        pg.g = g;
        AmplitudeSeries series{2, &t, pg};
        const double tau = pg.hbar * beta;
        const double z0 = 1.0 / (2.0 * std::sinh(pg.hbar * beta * pg.omega / 2.0));
        double zsym = z0 * (1.0 + g * ts.z[1].evaluate(tau, pg) +
                            g * g * ts.z[2].evaluate(tau, pg));
        double zquad = quadrature_partition(series, beta, 2);
        double zdiag =
            z0 * (1.0 - 3.0 * g / pg.hbar * diagram_reference(DiagramId::D1, beta, pg) +
                  g * g / (2.0 * pg.hbar * pg.hbar) *
                      (9.0 * std::pow(diagram_reference(DiagramId::D1, beta, pg), 2) +
                       72.0 * diagram_reference(DiagramId::D21, beta, pg) +
                       24.0 * diagram_reference(DiagramId::D22, beta, pg)));
        std::string e = check_close(zsym, zquad, 1e-8, "series vs quadrature");
        if (!e.empty()) return e;
        e = check_close(zsym, zdiag, 1e-8, "series vs diagrams");
        if (!e.empty()) return e;
      }
    }
    return std::string();
  });
}

void vpt_checks(Runner& r) {
  const CoeffTable& t = shared_table(3);
  ThermalSeries ts = z_series(t, 3);
  ModelParams p;

  r.run("vpt.harmonic_limit", [&] {
    VptSeries vs(ts, 1);
    VptSolution sol = optimize_omega(vs, 1, 1.0, 0.0, ScanRange{}, 1e-12, p);
    std::string e = check_close(sol.omega_star, 1.0, 1e-9, "omega*");
    if (!e.empty()) return e;
    return check_close(sol.value, harmonic_free_energy(1.0, p), 1e-12, "F");
  });

  r.run("vpt.first_order_form", [&] {
    // transported first order against its literal closed form
    VptSeries vs(ts, 1);
    Resummation resum(vs, 1);
    for (double om : {0.6, 1.0, 1.7, 3.0}) {
      for (double beta : {0.5, 1.0, 2.0}) {
        ModelParams pg = p;
        pg.g = 1.0;
        const double half = pg.hbar * beta * om / 2.0;
        const double coth = 1.0 / std::tanh(half);
        const double want = std::log(2.0 * std::sinh(half)) / beta +
                            3.0 * pg.hbar * pg.hbar / (4.0 * om * om) * coth * coth +
                            pg.hbar * om / 4.0 * (1.0 / (om * om) - 1.0) * coth;
        std::string e =
            check_close(resum.value(beta, om, pg), want, 1e-12, "first-order value");
        if (!e.empty()) return e;
      }
    }
    return std::string();
  });

  r.run("vpt.criterion_orders", [&] {
    VptSeries vs(ts, 2);
    VptSolution s1 = optimize_omega(vs, 1, 1.0, 1.0, ScanRange{}, 1e-10, p);
    if (s1.criterion_order != 1) return std::string("order 1 should use an extremum");
    VptSolution s2 = optimize_omega(vs, 2, 1.0, 1.0, ScanRange{}, 1e-10, p);
    if (s2.criterion_order != 2) return std::string("order 2 should use an inflection");
    return std::string();
  });

  r.run("vpt.spectrum_anchor", [&] {
    Spectrum harm = shoot_eigenvalues(0.0, 6, ShootingConfig{8.0, 2e-4, 1e-8});
    for (int i = 0; i < 6; ++i) {
      std::string e = check_close(harm.energies[static_cast<std::size_t>(i)], i + 0.5,
                                  1e-7, "harmonic level");
      if (!e.empty()) return e;
    }
    Spectrum s = shoot_eigenvalues(1.0, 1, ShootingConfig{8.0, 2e-4, 1e-8});
    return check_close(s.energies[0], 0.8037701932, 2e-6, "ground state at g=1");
  });
}

}  // namespace

std::vector<CheckResult> validate_suite(const std::string& suite) {
  Runner r;
  const bool all = suite == "all";
  if (all || suite == "recursion") recursion_checks(r);
  if (all || suite == "thermo") thermo_checks(r);
  if (all || suite == "vpt") vpt_checks(r);
  if (r.results.empty()) throw AlgebraError("validate: unknown suite " + suite);
  return r.results;
}

}  // namespace aho
