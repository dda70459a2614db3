// Command-line front end: high-order perturbation series for the anharmonic
// oscillator amplitude and free energy, variational resummation, and the
// numerical cross-check battery. All payloads are deterministic; floats are
// printed with 17 significant digits.

#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "aho/amplitude.hpp"
#include "aho/errors.hpp"
#include "aho/expr_io.hpp"
#include "aho/oracle.hpp"
#include "aho/recursion.hpp"
#include "aho/thermo.hpp"
#include "aho/validate.hpp"
#include "aho/vpt.hpp"

namespace {

using aho::CoeffTable;
using nlohmann::ordered_json;

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

ordered_json num(double v) { return ordered_json::parse(fmt(v)); }

aho::ModelParams base_params(double g) {
  aho::ModelParams p;
  p.g = g;
  const char* env = std::getenv("VPT_PRECISION");
  if (env != nullptr && std::string(env) == "extended")
    p.precision = aho::Precision::Extended;
  return p;
}

bool parse_triplet(const std::string& s, double& a, double& b, int& n) {
  std::istringstream is(s);
  char c1 = 0, c2 = 0;
  return static_cast<bool>(is >> a >> c1 >> b >> c2 >> n) && c1 == ':' && c2 == ':' && n > 0;
}

bool parse_key(const std::string& s, int& n, int& k, int& l) {
  std::istringstream is(s);
  char c1 = 0, c2 = 0;
  return static_cast<bool>(is >> n >> c1 >> k >> c2 >> l) && c1 == ',' && c2 == ',';
}

int cmd_coeffs(int order, const std::string& key, const std::string& format) {
  CoeffTable table;
  table.extend(order);
  auto render = [&](int n, int k, int l, std::ostream& os, bool latex) {
    if (latex) {
      os << "c[" << n << "," << k << "," << l
         << "] = " << aho::expr_to_latex(table.at(n, k, l)) << "\n";
    }
  };
  if (format == "latex") {
    if (!key.empty()) {
      int n, k, l;
      if (!parse_key(key, n, k, l)) throw CLI::ValidationError("--key", "expected n,k,l");
      render(n, k, l, std::cout, true);
    } else {
      for (int k = 0; k <= 2 * order; ++k)
        for (int l = 0; l <= 2 * k; ++l) render(order, k, l, std::cout, true);
    }
    return 0;
  }
  ordered_json out;
  out["order"] = order;
  ordered_json entries = ordered_json::array();
  auto push = [&](int n, int k, int l) {
    ordered_json e;
    e["n"] = n;
    e["k"] = k;
    e["l"] = l;
    e["expr"] = aho::expr_to_json(table.at(n, k, l));
    entries.push_back(std::move(e));
  };
  if (!key.empty()) {
    int n, k, l;
    if (!parse_key(key, n, k, l)) throw CLI::ValidationError("--key", "expected n,k,l");
    push(n, k, l);
  } else {
    for (int k = 0; k <= 2 * order; ++k)
      for (int l = 0; l <= 2 * k; ++l) push(order, k, l);
  }
  out["entries"] = std::move(entries);
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_amplitude(double xa, double xb, double beta, double g, int order) {
  CoeffTable table;
  table.extend(order);
  aho::AmplitudeSeries series{order, &table, base_params(g)};
  aho::AmplitudeValue v = aho::evaluate_amplitude(series, xb, xa, beta);
  ordered_json out;
  out["value"] = num(v.value);
  out["harmonicFactor"] = num(v.harmonic_factor);
  out["AFactor"] = num(v.a_factor);
  ordered_json per = ordered_json::array();
  for (double c : v.per_order) per.push_back(num(c));
  out["perOrderContributions"] = std::move(per);
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_free_energy(int order, double beta, double g, const std::string& sweep,
                    const std::string& format) {
  CoeffTable table;
  table.extend(order);
  aho::ThermalSeries ts = aho::z_series(table, order);
  aho::ModelParams p = base_params(g);

  std::vector<double> betas;
  if (!sweep.empty()) {
    double b0, b1;
    int steps;
    if (!parse_triplet(sweep, b0, b1, steps))
      throw CLI::ValidationError("--sweep", "expected b0:b1:steps");
    for (int i = 0; i <= steps; ++i) betas.push_back(b0 + (b1 - b0) * i / steps);
  } else {
    betas.push_back(beta);
  }

  if (format == "json") {
    ordered_json rows = ordered_json::array();
    for (double b : betas) {
      aho::FreeEnergyEval ev = aho::f_series_eval(ts, b, order, p);
      ordered_json row;
      row["beta"] = num(b);
      ordered_json per = ordered_json::array();
      for (double f : ev.per_order) per.push_back(num(f));
      row["perOrder"] = std::move(per);
      row["truncated"] = num(ev.truncated);
      rows.push_back(std::move(row));
    }
    ordered_json out;
    out["g"] = num(g);
    out["order"] = order;
    out["rows"] = std::move(rows);
    std::cout << out.dump(2) << "\n";
    return 0;
  }
  std::cout << "beta,order,F_n,F_truncated\n";
  for (double b : betas) {
    aho::FreeEnergyEval ev = aho::f_series_eval(ts, b, order, p);
    double running = 0.0, gn = 1.0;
    for (int n = 0; n <= order; ++n) {
      running += gn * ev.per_order[static_cast<std::size_t>(n)];
      std::cout << fmt(b) << "," << n << "," << fmt(ev.per_order[static_cast<std::size_t>(n)])
                << "," << fmt(running) << "\n";
      gn *= g;
    }
  }
  return 0;
}

int cmd_vpt(int order, double beta, double g, const std::string& scan_arg, double tol,
            std::optional<double> report_ref) {
  CoeffTable table;
  table.extend(order);
  aho::ThermalSeries ts = aho::z_series(table, order);
  aho::VptSeries vs(ts, order);
  aho::ModelParams p = base_params(g);
  aho::ScanRange scan;
  if (!scan_arg.empty()) {
    int steps;
    if (!parse_triplet(scan_arg, scan.lo, scan.hi, steps))
      throw CLI::ValidationError("--scan", "expected lo:hi:steps");
    scan.steps = steps;
  }

  if (report_ref) {
    aho::ConvergenceReport rep = aho::convergence_report(vs, beta, g, order, *report_ref, p);
    std::cout << "N,omegaStar,F,absErr,criterionOrder\n";
    for (const auto& r : rep.rows)
      std::cout << r.order << "," << fmt(r.omega_star) << "," << fmt(r.value) << ","
                << fmt(r.abs_err) << "," << r.criterion_order << "\n";
    std::cout << "# oddRate=" << fmt(rep.odd_rate) << " evenRate=" << fmt(rep.even_rate)
              << " degenerate=" << (rep.degenerate ? 1 : 0) << "\n";
    return 0;
  }

  aho::VptSolution sol = aho::optimize_omega(vs, order, beta, g, scan, tol, p);
  ordered_json out;
  out["beta"] = num(sol.beta);
  out["g"] = num(sol.g);
  out["order"] = sol.order;
  out["omegaStar"] = num(sol.omega_star);
  out["criterionOrder"] = sol.criterion_order;
  out["value"] = num(sol.value);
  ordered_json diag;
  diag["bracketLo"] = num(sol.bracket_lo);
  diag["bracketHi"] = num(sol.bracket_hi);
  diag["residual"] = num(sol.residual);
  diag["branchIndex"] = sol.branch_index;
  out["diagnostics"] = std::move(diag);
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_spectrum(double g, int levels, double tol) {
  aho::ShootingConfig cfg;
  cfg.tol = tol;
  aho::Spectrum s = aho::shoot_eigenvalues(g, levels, cfg);
  std::cout << "n,E_n\n";
  for (std::size_t i = 0; i < s.energies.size(); ++i)
    std::cout << i << "," << fmt(s.energies[i]) << "\n";
  return 0;
}

int cmd_classical(double beta, double g) {
  aho::ClassicalPartition z = aho::classical_partition(beta, g, base_params(g));
  ordered_json out;
  out["closedForm"] = num(z.closed_form);
  out["quadrature"] = num(z.quadrature);
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_validate(const std::string& suite) {
  auto results = aho::validate_suite(suite);
  bool ok = true;
  for (const auto& r : results) {
    std::cout << (r.pass ? "PASS " : "FAIL ") << r.name;
    if (!r.pass) std::cout << "  [" << r.detail << "]";
    std::cout << "\n";
    ok = ok && r.pass;
  }
  std::cout << (ok ? "validation passed" : "validation FAILED") << "\n";
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"anharmonic oscillator: recursive perturbation series and variational resummation"};
  app.require_subcommand(1);

  int order = 1, levels = 10;
  double xa = 0.0, xb = 0.0, beta = 1.0, g = 0.0, tol = 1e-10;
  std::string key, format = "json", sweep, scan, suite = "all";
  std::optional<double> report_ref;

  auto check_order = [](int n) {
    if (n < 0 || n > CoeffTable::kMaxOrder)
      throw CLI::ValidationError("--order", "must be between 0 and 7");
  };

  auto* coeffs = app.add_subcommand("coeffs", "dump expansion coefficients");
  coeffs->add_option("--order", order)->required();
  coeffs->add_option("--key", key, "single entry as n,k,l");
  coeffs->add_option("--format", format)->check(CLI::IsMember({"json", "latex"}));

  auto* amp = app.add_subcommand("amplitude", "imaginary-time evolution amplitude");
  amp->add_option("--xa", xa)->required();
  amp->add_option("--xb", xb)->required();
  amp->add_option("--beta", beta)->required()->check(CLI::PositiveNumber);
  amp->add_option("--g", g)->check(CLI::NonNegativeNumber);
  amp->add_option("--order", order)->required();

  auto* fe = app.add_subcommand("free-energy", "perturbative free energy");
  fe->add_option("--order", order)->required();
  fe->add_option("--beta", beta)->check(CLI::PositiveNumber);
  fe->add_option("--g", g)->check(CLI::NonNegativeNumber);
  fe->add_option("--sweep", sweep, "beta sweep b0:b1:steps");
  fe->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));

  auto* vpt = app.add_subcommand("vpt", "variational resummation of the free energy");
  vpt->add_option("--order", order)->required();
  vpt->add_option("--beta", beta)->required()->check(CLI::PositiveNumber);
  vpt->add_option("--g", g)->required()->check(CLI::NonNegativeNumber);
  vpt->add_option("--scan", scan, "trial-frequency scan lo:hi:steps (units of omega)");
  vpt->add_option("--tol", tol)->check(CLI::PositiveNumber);
  double report_val = 0.0;
  auto* ropt = vpt->add_option("--report", report_val, "convergence table against a reference");

  auto* spec = app.add_subcommand("spectrum", "shooting-method eigenvalues");
  double spec_tol = 1e-9;
  spec->add_option("--g", g)->required()->check(CLI::NonNegativeNumber);
  spec->add_option("--levels", levels)->check(CLI::PositiveNumber);
  spec->add_option("--tol", spec_tol)->check(CLI::PositiveNumber);

  auto* cls = app.add_subcommand("classical", "classical partition function");
  cls->add_option("--beta", beta)->required()->check(CLI::PositiveNumber);
  cls->add_option("--g", g)->required()->check(CLI::PositiveNumber);

  auto* val = app.add_subcommand("validate", "run the cross-check battery");
  val->add_option("--suite", suite)->check(CLI::IsMember({"all", "recursion", "thermo", "vpt"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (coeffs->parsed()) {
      check_order(order);
      return cmd_coeffs(order, key, format);
    }
    if (amp->parsed()) {
      check_order(order);
      return cmd_amplitude(xa, xb, beta, g, order);
    }
    if (fe->parsed()) {
      check_order(order);
      // sweeps default to CSV unless a format was given explicitly
      std::string f = format;
      if (!sweep.empty() && fe->get_option("--format")->count() == 0) f = "csv";
      return cmd_free_energy(order, beta, g, sweep, f);
    }
    if (vpt->parsed()) {
      check_order(order);
      if (ropt->count() > 0) report_ref = report_val;
      return cmd_vpt(order, beta, g, scan, tol, report_ref);
    }
    if (spec->parsed()) return cmd_spectrum(g, levels, spec_tol);
    if (cls->parsed()) return cmd_classical(beta, g);
    if (val->parsed()) return cmd_validate(suite);
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
