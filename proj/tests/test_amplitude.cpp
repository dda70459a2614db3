#include <doctest.h>

#include <cmath>
#include <random>

#include "aho/amplitude.hpp"
#include "aho/oracle.hpp"
#include "test_util.hpp"

using namespace aho;

namespace {

const ModelParams kNatural{};

// Independent slot-level pairing enumeration: expand each power into single
// factors and sum over all ways of pairing a subset and taking classical
// paths for the rest. Exponential, test-side only.
double wick_brute(std::vector<double> slots, double beta, double xa, double xb,
                  const ModelParams& p) {
  if (slots.empty()) return 1.0;
  double t0 = slots.back();
  slots.pop_back();
  double total = classical_path(t0, xa, xb, beta, p) * wick_brute(slots, beta, xa, xb, p);
  for (std::size_t j = 0; j < slots.size(); ++j) {
    std::vector<double> rest = slots;
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(j));
    total += green_dirichlet(t0, slots[j], beta, p) * wick_brute(rest, beta, xa, xb, p);
  }
  return total;
}

}  // namespace

TEST_CASE("harmonic kernel value, symmetry and asymptotics") {
  // spectral oracle at the origin: sum over even harmonic eigenfunctions
  double spectral = 0.0;
  for (int m = 0; m < 40; ++m) {
    double log_amp = -0.5 * std::log(M_PI);  // |psi_0(0)|^2 = 1/sqrt(pi)
    for (int j = 1; j <= m; ++j) log_amp += std::log((2.0 * j - 1) / (2.0 * j));
    spectral += std::exp(log_amp) * std::exp(-(2 * m + 0.5));
  }
  CHECK(harmonic_amplitude(0, 0, 1.0, kNatural) ==
        doctest::Approx(spectral).epsilon(1e-12));
  CHECK(harmonic_amplitude(0, 0, 1.0, kNatural) ==
        doctest::Approx(std::sqrt(1.0 / (2.0 * M_PI * std::sinh(1.0)))).epsilon(1e-14));

  std::mt19937 rng(42u);
  std::uniform_real_distribution<double> xs(-2, 2);
  for (int i = 0; i < 20; ++i) {
    double a = xs(rng), b = xs(rng);
    CHECK(harmonic_amplitude(a, b, 0.8, kNatural) ==
          doctest::Approx(harmonic_amplitude(b, a, 0.8, kNatural)).epsilon(1e-14));
  }

  const double beta = 50.0;
  CHECK(harmonic_amplitude(0, 0, beta, kNatural) * std::exp(beta / 2.0) ==
        doctest::Approx(std::sqrt(1.0 / M_PI)).epsilon(1e-8));
}

TEST_CASE("classical path boundary values and midpoint identity") {
  CHECK(classical_path(0.0, 0.7, -1.3, 2.0, kNatural) == doctest::Approx(0.7).epsilon(1e-14));
  CHECK(classical_path(2.0, 0.7, -1.3, 2.0, kNatural) ==
        doctest::Approx(-1.3).epsilon(1e-13));
  const double beta = 1.7;
  CHECK(classical_path(beta / 2, 1.0, 1.0, beta, kNatural) ==
        doctest::Approx(1.0 / std::cosh(beta / 2)).epsilon(1e-13));
}

TEST_CASE("Dirichlet two-point function") {
  const double beta = 1.3;
  CHECK(green_dirichlet(0.0, 0.9, beta, kNatural) == doctest::Approx(0.0));
  CHECK(green_dirichlet(beta / 2, beta / 2, beta, kNatural) ==
        doctest::Approx(0.5 * std::tanh(beta / 2)).epsilon(1e-13));
  std::mt19937 rng(7u);
  std::uniform_real_distribution<double> ts(0.0, beta);
  for (int i = 0; i < 20; ++i) {
    double t1 = ts(rng), t2 = ts(rng);
    CHECK(green_dirichlet(t1, t2, beta, kNatural) ==
          doctest::Approx(green_dirichlet(t2, t1, beta, kNatural)).epsilon(1e-14));
  }
}

TEST_CASE("Wick reduction: closed low orders") {
  const double beta = 1.1, xa = 0.4, xb = -0.9, t1 = 0.37;
  const double xcl = classical_path(t1, xa, xb, beta, kNatural);
  const double gd = green_dirichlet(t1, t1, beta, kNatural);
  CHECK(wick_expectation({{1, t1}}, beta, xa, xb, kNatural) ==
        doctest::Approx(xcl).epsilon(1e-14));
  CHECK(wick_expectation({{2, t1}}, beta, xa, xb, kNatural) ==
        doctest::Approx(xcl * xcl + gd).epsilon(1e-13));
  CHECK(wick_expectation({{4, t1}}, beta, xa, xb, kNatural) ==
        doctest::Approx(std::pow(xcl, 4) + 6 * xcl * xcl * gd + 3 * gd * gd)
            .epsilon(1e-13));
}

TEST_CASE("Wick reduction against brute-force pairing enumeration") {
  std::mt19937 rng(4242u);
  std::uniform_real_distribution<double> ts(0.05, 1.25);
  std::uniform_int_distribution<int> ns(0, 4);
  for (int trial = 0; trial < 25; ++trial) {
    int n = ns(rng), m = ns(rng);
    if (n + m == 0 || n + m > 8) continue;
    double t1 = ts(rng), t2 = ts(rng);
    std::vector<std::pair<int, double>> powers;
    std::vector<double> slots;
    if (n > 0) powers.push_back({n, t1});
    if (m > 0) powers.push_back({m, t2});
    for (int i = 0; i < n; ++i) slots.push_back(t1);
    for (int i = 0; i < m; ++i) slots.push_back(t2);
    double fast = wick_expectation(powers, 1.3, 0.6, -0.2, kNatural);
    double brute = wick_brute(slots, 1.3, 0.6, -0.2, kNatural);
    CHECK(fast == doctest::Approx(brute).epsilon(1e-10));
  }
}

TEST_CASE("series evaluation reproduces the first-order closed form") {
  const CoeffTable& t = testutil::table(1);
  std::mt19937 rng(99u);
  std::uniform_real_distribution<double> xs(-2, 2), bs(0.2, 3.0), gs(0.05, 1.5);
  for (int i = 0; i < 50; ++i) {
    ModelParams p = kNatural;
    p.g = gs(rng);
    AmplitudeSeries s{1, &t, p};
    double xa = xs(rng), xb = xs(rng), beta = bs(rng);
    AmplitudeValue v = evaluate_amplitude(s, xb, xa, beta);
    CHECK(v.value ==
          doctest::Approx(first_order_closed_form(xb, xa, beta, p)).epsilon(1e-12));
  }
}

TEST_CASE("only the vacuum bubble survives at the origin") {
  // at xa = xb = 0 the first-order correction is the pure two-loop term
  ModelParams p = kNatural;
  p.g = 0.8;
  const double beta = 1.3, u = beta;
  const double s = std::sinh(u), c2 = std::cosh(2 * u), s2 = std::sinh(2 * u);
  const double bubble = (-9.0 / 16.0 * s2 + 0.75 * u + 3.0 / 8.0 * u * c2) / (s * s);
  const double want = harmonic_amplitude(0, 0, beta, p) * (1.0 - p.g * bubble);
  CHECK(first_order_closed_form(0, 0, beta, p) == doctest::Approx(want).epsilon(1e-14));
  const CoeffTable& t = testutil::table(1);
  AmplitudeSeries series{1, &t, p};
  CHECK(evaluate_amplitude(series, 0, 0, beta).value ==
        doctest::Approx(want).epsilon(1e-13));
}

TEST_CASE("zero coupling reduces to the harmonic kernel") {
  const CoeffTable& t = testutil::table(1);
  AmplitudeSeries s{1, &t, kNatural};  // g = 0
  AmplitudeValue v = evaluate_amplitude(s, 0.3, -0.8, 1.4);
  CHECK(v.value == doctest::Approx(harmonic_amplitude(0.3, -0.8, 1.4, kNatural)).epsilon(1e-14));
  CHECK(v.a_factor == doctest::Approx(1.0));
}

TEST_CASE("time-reversal symmetry of the truncated amplitude") {
  const CoeffTable& t = testutil::table(2);
  std::mt19937 rng(123u);
  std::uniform_real_distribution<double> xs(-2, 2), bs(0.2, 3.0);
  ModelParams p = kNatural;
  p.g = 0.7;
  AmplitudeSeries s{2, &t, p};
  for (int i = 0; i < 50; ++i) {
    double xa = xs(rng), xb = xs(rng), beta = bs(rng);
    double ab = evaluate_amplitude(s, xb, xa, beta).value;
    double ba = evaluate_amplitude(s, xa, xb, beta).value;
    CHECK(ab == doctest::Approx(ba).epsilon(1e-12));
  }
}

TEST_CASE("kernel normalization at small beta and zero coupling") {
  const CoeffTable& t = testutil::table(1);
  AmplitudeSeries s{1, &t, kNatural};
  for (double xa : {0.0, 0.5}) {
    double total = integrate(
        [&](double xb) { return evaluate_amplitude(s, xb, xa, 0.01).value; }, xa - 1.0,
        xa + 1.0, 1e-11);
    CHECK(std::abs(total - 1.0) < 1e-2);
  }
}

TEST_CASE("diagonal amplitude stays positive where the truncation is trustworthy") {
  // The truncated divergent series goes negative once the dropped terms are
  // comparable to the (exponentially small) kernel, e.g. already at
  // (g=0.05, beta=1, x=2.75) or at (g=1, beta=2, x=0). The contract is the
  // two regions below, checked empirically through order 5.
  const CoeffTable& t = testutil::table(3);
  {
    ModelParams p = kNatural;
    p.g = 0.05;
    AmplitudeSeries s{3, &t, p};
    for (double beta : {0.1, 0.5, 1.0, 2.0, 3.5, 5.0}) {
      AmplitudeTable at(s, beta);
      for (double x = 0.0; x <= 2.001; x += 0.25)
        CHECK(at.kernel(x, x) * at.a_factor(x, x, 3) > 0.0);
    }
  }
  {
    ModelParams p = kNatural;
    p.g = 1.0;
    AmplitudeSeries s{3, &t, p};
    for (double beta : {0.1, 0.25, 0.5}) {
      AmplitudeTable at(s, beta);
      for (double x = 0.0; x <= 1.001; x += 0.125)
        CHECK(at.kernel(x, x) * at.a_factor(x, x, 3) > 0.0);
    }
  }
}
