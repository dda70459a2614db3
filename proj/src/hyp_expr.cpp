#include "aho/hyp_expr.hpp"

#include <cassert>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <utility>

#include "aho/errors.hpp"

namespace aho {
namespace {

// Numerator polynomials are handled per "group": all keys equal up to the
// frequency integer b. The group maps b -> coefficient.
using BPoly = std::map<int, Rational>;
using Groups = std::map<TermKey, BPoly>;  // key has b = 0

TermKey group_of(TermKey k) {
  k.b = 0;
  return k;
}

Groups group_terms(const std::map<TermKey, Rational>& terms) {
  Groups g;
  for (const auto& [k, c] : terms) g[group_of(k)][k.b] = c;
  return g;
}

void add_bpoly(BPoly& p, int b, const Rational& c) {
  auto it = p.find(b);
  if (it == p.end()) {
    if (!c.is_zero()) p.emplace(b, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) p.erase(it);
}

// Exact division of one group polynomial by sinh(x) = (y - 1/y)/2 or by
// cosh(x) = (y + 1/y)/2 in the exponential basis y = e^x. Synthetic
// division from the top; divisible iff the final two-slot remainder
// vanishes. On failure the quotient is meaningless.
bool divide_group(BPoly poly, BPoly& quotient, bool by_sinh) {
  quotient.clear();
  if (poly.empty()) return true;
  const int bmin = poly.begin()->first;
  while (!poly.empty()) {
    auto top = std::prev(poly.end());
    int b = top->first;
    if (b <= bmin + 1) break;
    Rational c = top->second;
    poly.erase(top);
    // y^b = 2 y^{b-1} sinh + y^{b-2}  /  y^b = 2 y^{b-1} cosh - y^{b-2}
    add_bpoly(quotient, b - 1, c * Rational(2));
    add_bpoly(poly, b - 2, by_sinh ? c : -c);
  }
  return poly.empty();
}

bool divide_terms(const std::map<TermKey, Rational>& terms,
                  std::map<TermKey, Rational>& out, bool by_sinh) {
  out.clear();
  for (auto& [gk, poly] : group_terms(terms)) {
    BPoly q;
    if (!divide_group(poly, q, by_sinh)) return false;
    for (const auto& [b, c] : q) {
      TermKey k = gk;
      k.b = b;
      out[k] = c;
    }
  }
  return true;
}

void accumulate(std::map<TermKey, Rational>& dst, const TermKey& k, const Rational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = dst.emplace(k, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) dst.erase(it);
  }
}

// Multiply a term map by sinh^p or cosh^p (p >= 0) in the exponential basis.
std::map<TermKey, Rational> mul_hyperbolic(const std::map<TermKey, Rational>& terms,
                                           int p, bool by_sinh) {
  std::map<TermKey, Rational> cur = terms;
  const Rational half(1, 2);
  for (int i = 0; i < p; ++i) {
    std::map<TermKey, Rational> next;
    for (const auto& [k, c] : cur) {
      TermKey up = k, dn = k;
      ++up.b;
      --dn.b;
      accumulate(next, up, c * half);
      accumulate(next, dn, by_sinh ? -(c * half) : c * half);
    }
    cur.swap(next);
  }
  return cur;
}

int nu_den(Nu nu) { return nu == Nu::Half ? 2 : 1; }

// Multiplying a coefficient by nu = omega / nu_den: ew += 1 and the rational
// gains 1/nu_den. Dividing by nu is the inverse.
void apply_nu_factor(TermKey& k, Rational& c, Nu nu, int power) {
  k.ew += power;
  if (nu == Nu::Half) {
    if (power > 0)
      for (int i = 0; i < power; ++i) c *= Rational(1, 2);
    else
      for (int i = 0; i < -power; ++i) c *= Rational(2);
  }
}

}  // namespace

void HypBuilder::add(const TermKey& k, const Rational& c) { accumulate(terms_, k, c); }

void HypBuilder::add_terms_of(const HypExpr& e) {
  assert(e.nu() == nu_ && e.denom_power() == m_);
  for (const auto& [k, c] : e.terms()) accumulate(terms_, k, c);
}

HypExpr HypBuilder::build() && {
  HypExpr e(nu_);
  e.m_ = m_;
  e.terms_ = std::move(terms_);
  e.normalize();
  e.reduce();
  return e;
}

void HypExpr::normalize() {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (it->second.is_zero())
      it = terms_.erase(it);
    else
      ++it;
  }
  if (terms_.empty()) m_ = 0;
}

void HypExpr::reduce() {
  while (m_ > 0 && !terms_.empty()) {
    std::map<TermKey, Rational> q;
    if (!divide_terms(terms_, q, /*by_sinh=*/true)) break;
    terms_ = std::move(q);
    --m_;
  }
  if (terms_.empty()) m_ = 0;
}

HypExpr HypExpr::constant(const Rational& c, Nu nu) {
  return term(c, 0, 0, 0, 0, 0, nu);
}

HypExpr HypExpr::term(const Rational& c, int a, int b, int eh, int em, int ew,
                      Nu nu, int elog) {
  HypBuilder bld(nu, 0);
  TermKey k{a, b, eh, em, ew, elog};
  bld.add(k, c);
  return std::move(bld).build();
}

HypExpr HypExpr::sinh_multi(int k, Nu nu) {
  HypBuilder b(nu, 0);
  if (k != 0) {
    b.add(TermKey{0, k, 0, 0, 0, 0}, Rational(1, 2));
    b.add(TermKey{0, -k, 0, 0, 0, 0}, Rational(-1, 2));
  }
  return std::move(b).build();
}

HypExpr HypExpr::cosh_multi(int k, Nu nu) {
  HypBuilder b(nu, 0);
  if (k == 0) {
    b.add(TermKey{}, Rational(1));
  } else {
    b.add(TermKey{0, k, 0, 0, 0, 0}, Rational(1, 2));
    b.add(TermKey{0, -k, 0, 0, 0, 0}, Rational(1, 2));
  }
  return std::move(b).build();
}

HypExpr HypExpr::sinh_power(int p, Nu nu) {
  HypBuilder b(nu, 0);
  b.add(TermKey{}, Rational(1));
  HypExpr e = std::move(b).build();
  e.terms_ = mul_hyperbolic(e.terms_, p, /*by_sinh=*/true);
  e.normalize();
  return e;
}

bool HypExpr::has_log() const {
  for (const auto& [k, c] : terms_)
    if (k.elog != 0) return true;
  return false;
}

HypExpr HypExpr::log_part() const {
  HypBuilder b(nu_, m_);
  for (const auto& [k, c] : terms_) {
    if (k.elog == 0) continue;
    TermKey nk = k;
    nk.elog = 0;
    b.add(nk, c);
  }
  return std::move(b).build();
}

HypExpr HypExpr::operator-() const { return scaled(Rational(-1)); }

HypExpr HypExpr::scaled(const Rational& c) const {
  if (c.is_zero()) return zero(nu_);
  HypExpr e = *this;
  for (auto& [k, v] : e.terms_) v *= c;
  return e;
}

HypExpr HypExpr::shifted_params(int dh, int dm, int dw) const {
  HypBuilder b(nu_, m_);
  for (const auto& [k, c] : terms_) {
    TermKey nk = k;
    nk.eh += dh;
    nk.em += dm;
    nk.ew += dw;
    b.add(nk, c);
  }
  return std::move(b).build();
}

HypExpr operator+(const HypExpr& a, const HypExpr& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.nu_ != b.nu_) throw AlgebraError("hyp: base frequency mismatch in add; rebase first");
  int m = std::max(a.m_, b.m_);
  HypBuilder bld(a.nu_, m);
  auto lift = [&](const HypExpr& e) {
    auto lifted = mul_hyperbolic(e.terms_, m - e.m_, /*by_sinh=*/true);
    for (const auto& [k, c] : lifted) bld.add(k, c);
  };
  lift(a);
  lift(b);
  return std::move(bld).build();
}

HypExpr operator-(const HypExpr& a, const HypExpr& b) { return a + (-b); }

HypExpr operator*(const HypExpr& a, const HypExpr& b) {
  if (a.is_zero() || b.is_zero()) return HypExpr::zero(a.nu_);
  if (a.nu_ != b.nu_) throw AlgebraError("hyp: base frequency mismatch in mul; rebase first");
  HypBuilder bld(a.nu_, a.m_ + b.m_);
  for (const auto& [ka, ca] : a.terms_) {
    for (const auto& [kb, cb] : b.terms_) {
      if (ka.elog + kb.elog > 1)
        throw AlgebraError("hyp: product would square the log generator");
      TermKey k{ka.a + kb.a, ka.b + kb.b, ka.eh + kb.eh,
                ka.em + kb.em, ka.ew + kb.ew, ka.elog + kb.elog};
      bld.add(k, ca * cb);
    }
  }
  return std::move(bld).build();
}

bool operator==(const HypExpr& a, const HypExpr& b) {
  if (a.is_zero() && b.is_zero()) return true;
  return a.nu_ == b.nu_ && a.m_ == b.m_ && a.terms_ == b.terms_;
}

HypExpr HypExpr::div_sinh(int p) const {
  assert(p >= 0);
  if (is_zero()) return *this;
  HypExpr e = *this;
  e.m_ += p;
  e.reduce();
  return e;
}

HypExpr HypExpr::mul_sinh(int p) const {
  assert(p >= 0);
  if (is_zero()) return *this;
  HypExpr e = *this;
  int cancel = std::min(e.m_, p);
  e.m_ -= cancel;
  e.terms_ = mul_hyperbolic(e.terms_, p - cancel, /*by_sinh=*/true);
  e.normalize();
  return e;
}

HypExpr HypExpr::div_tau() const {
  HypBuilder b(nu_, m_);
  for (const auto& [k, c] : terms_) {
    if (k.a < 1) throw AlgebraError("hyp: term without tau factor in div_tau");
    TermKey nk = k;
    --nk.a;
    b.add(nk, c);
  }
  return std::move(b).build();
}

HypExpr HypExpr::differentiate() const {
  const Rational nufac(1, nu_den(nu_));
  HypBuilder bld(nu_, m_ + 1);
  auto add_times_sinh = [&](const TermKey& k, const Rational& c) {
    TermKey up = k, dn = k;
    ++up.b;
    --dn.b;
    bld.add(up, c * Rational(1, 2));
    bld.add(dn, c * Rational(-1, 2));
  };
  auto add_times_cosh = [&](const TermKey& k, const Rational& c) {
    TermKey up = k, dn = k;
    ++up.b;
    --dn.b;
    bld.add(up, c * Rational(1, 2));
    bld.add(dn, c * Rational(1, 2));
  };
  for (const auto& [k, c] : terms_) {
    // formal tau-derivative of the term, times sinh
    if (k.a > 0) {
      TermKey nk = k;
      --nk.a;
      add_times_sinh(nk, c * Rational(k.a));
    }
    if (k.b != 0) {
      TermKey nk = k;
      ++nk.ew;
      add_times_sinh(nk, c * Rational(k.b) * nufac);
    }
    // log generator: d/dtau L = nu cosh/sinh
    if (k.elog == 1) {
      TermKey nk = k;
      nk.elog = 0;
      ++nk.ew;
      add_times_cosh(nk, c * nufac);
    }
    // denominator: -m nu cosh/sinh^{m+1}
    if (m_ != 0) {
      TermKey nk = k;
      ++nk.ew;
      add_times_cosh(nk, c * Rational(-m_) * nufac);
    }
  }
  return std::move(bld).build();
}

HypExpr HypExpr::differentiate_omega() const {
  const Rational xfac(1, nu_den(nu_));  // dx/domega = tau / nu_den
  HypBuilder bld(nu_, m_ + 1);
  auto add_times_sinh = [&](const TermKey& k, const Rational& c) {
    TermKey up = k, dn = k;
    ++up.b;
    --dn.b;
    bld.add(up, c * Rational(1, 2));
    bld.add(dn, c * Rational(-1, 2));
  };
  auto add_times_cosh = [&](const TermKey& k, const Rational& c) {
    TermKey up = k, dn = k;
    ++up.b;
    --dn.b;
    bld.add(up, c * Rational(1, 2));
    bld.add(dn, c * Rational(1, 2));
  };
  for (const auto& [k, c] : terms_) {
    // explicit omega powers
    if (k.ew != 0) {
      TermKey nk = k;
      --nk.ew;
      add_times_sinh(nk, c * Rational(k.ew));
    }
    // argument chain: x-derivative times tau/nu_den
    if (k.b != 0) {
      TermKey nk = k;
      ++nk.a;
      add_times_sinh(nk, c * Rational(k.b) * xfac);
    }
    if (k.elog == 1) {
      TermKey nk = k;
      nk.elog = 0;
      ++nk.a;
      add_times_cosh(nk, c * xfac);
    }
    if (m_ != 0) {
      TermKey nk = k;
      ++nk.a;
      add_times_cosh(nk, c * Rational(-m_) * xfac);
    }
  }
  return std::move(bld).build();
}

namespace {

// Accumulator for antiderivative pieces with mixed denominator powers.
struct PieceSum {
  explicit PieceSum(Nu nu) : total(HypExpr::zero(nu)) {}
  HypExpr total;
  void add(const HypExpr& e) { total = total + e; }
};

HypExpr from_raw(Nu nu, int m, const std::map<TermKey, Rational>& terms) {
  HypBuilder b(nu, m);
  for (const auto& [k, c] : terms) b.add(k, c);
  return std::move(b).build();
}

// Splits N = Q sinh + R with the R-support of every group inside the
// absolute window b in {0, 1}.
void split_window01(const std::map<TermKey, Rational>& in,
                    std::map<TermKey, Rational>& quotient,
                    std::map<TermKey, Rational>& rest) {
  quotient.clear();
  rest.clear();
  for (auto& [gk, poly0] : group_terms(in)) {
    BPoly poly = poly0, q;
    while (!poly.empty() && std::prev(poly.end())->first >= 2) {
      auto top = std::prev(poly.end());
      int b = top->first;
      Rational c = top->second;
      poly.erase(top);
      add_bpoly(q, b - 1, c * Rational(2));
      add_bpoly(poly, b - 2, c);
    }
    while (!poly.empty() && poly.begin()->first <= -1) {
      auto bot = poly.begin();
      int b = bot->first;
      Rational c = bot->second;
      poly.erase(bot);
      add_bpoly(q, b + 1, c * Rational(-2));
      add_bpoly(poly, b + 2, c);
    }
    for (const auto& [b, c] : q) {
      TermKey k = gk;
      k.b = b;
      accumulate(quotient, k, c);
    }
    for (const auto& [b, c] : poly) {
      TermKey k = gk;
      k.b = b;
      accumulate(rest, k, c);
    }
  }
}

std::map<TermKey, Rational> dtau_numerator(const std::map<TermKey, Rational>& in, Nu nu) {
  std::map<TermKey, Rational> out;
  const Rational nufac(1, nu_den(nu));
  for (const auto& [k, c] : in) {
    assert(k.elog == 0);
    if (k.a > 0) {
      TermKey nk = k;
      --nk.a;
      accumulate(out, nk, c * Rational(k.a));
    }
    if (k.b != 0) {
      TermKey nk = k;
      ++nk.ew;
      accumulate(out, nk, c * Rational(k.b) * nufac);
    }
  }
  return out;
}

std::map<TermKey, Rational> scaled_map(const std::map<TermKey, Rational>& in,
                                       const Rational& s) {
  std::map<TermKey, Rational> out;
  if (s.is_zero()) return out;
  for (const auto& [k, c] : in) out[k] = c * s;
  return out;
}

// Divide every coefficient by nu (ew -= 1, rational factor nu_den).
std::map<TermKey, Rational> div_nu_map(const std::map<TermKey, Rational>& in, Nu nu) {
  std::map<TermKey, Rational> out;
  for (const auto& [k0, c0] : in) {
    TermKey k = k0;
    Rational c = c0;
    apply_nu_factor(k, c, nu, -1);
    out[k] = c;
  }
  return out;
}

class Integrator {
 public:
  explicit Integrator(Nu nu) : nu_(nu), sum_(nu) {}

  HypExpr run(const std::map<TermKey, Rational>& terms, int m) {
    process(terms, m);
    // residual integrands tau^a/sinh and tau^a cosh/sinh may cancel between
    // reduction branches; anything left is genuinely outside the family
    if (!pending_.empty())
      throw NonElementaryIntegral(
          "hyp: residual tau^a/sinh or tau^a cosh/sinh integrand with non-cancelling "
          "coefficient");
    return sum_.total;
  }

 private:
  void process(std::map<TermKey, Rational> n, int m) {
    if (n.empty()) return;
    if (m == 0) {
      poly_exp(n);
      return;
    }
    std::map<TermKey, Rational> q, r;
    split_window01(n, q, r);
    process(q, m - 1);
    if (r.empty()) return;
    if (m == 1) {
      residual(r);
      return;
    }
    // (m-1) I = -(1/nu) f cosh / sinh^{m-1}
    //           + (1/nu) int f' cosh / sinh^{m-1} - (m-2) int f / sinh^{m-2}
    const Rational inv(1, m - 1);
    auto boundary = div_nu_map(mul_hyperbolic(r, 1, /*by_sinh=*/false), nu_);
    sum_.add(from_raw(nu_, m - 1, scaled_map(boundary, -inv)));
    auto fprime_cosh =
        div_nu_map(mul_hyperbolic(dtau_numerator(r, nu_), 1, /*by_sinh=*/false), nu_);
    process(scaled_map(fprime_cosh, inv), m - 1);
    process(scaled_map(r, -Rational(m - 2) * inv), m - 2);
  }

  // int tau^a e^{b x} dtau for every term of a plain numerator
  void poly_exp(const std::map<TermKey, Rational>& n) {
    HypBuilder bld(nu_, 0);
    for (const auto& [k, c] : n) {
      assert(k.elog == 0);
      if (k.b == 0) {
        TermKey nk = k;
        ++nk.a;
        bld.add(nk, c / Rational(k.a + 1));
      } else {
        // repeated integration by parts, finite in the tau power
        Rational factor = c;
        for (int t = 0; t <= k.a; ++t) {
          TermKey nk = k;
          nk.a = k.a - t;
          nk.ew = k.ew - (t + 1);
          Rational coeff = factor / Rational(k.b);
          if (nu_ == Nu::Half) coeff *= Rational(2);
          bld.add(nk, coeff);
          factor = -coeff * Rational(k.a - t);
        }
      }
    }
    sum_.add(std::move(bld).build());
  }

  // terms tau^a e^{b x} / sinh with b in {0,1}. The split e^x = cosh + sinh
  // leaves tau^a cosh/sinh residuals; only the a = 0 one integrates (to the
  // log generator), the others are parked for cross-branch cancellation.
  void residual(const std::map<TermKey, Rational>& r) {
    HypBuilder bld(nu_, 0);
    for (const auto& [k, c] : r) {
      if (k.b == 0) {
        accumulate(pending_, k, c);
        continue;
      }
      // sinh part of e^x: plain tau^a
      TermKey tk = k;
      tk.b = 0;
      tk.a = k.a + 1;
      bld.add(tk, c / Rational(k.a + 1));
      if (k.a == 0) {
        TermKey lk = k;
        lk.elog = 1;
        lk.b = 0;
        Rational lc = c;
        apply_nu_factor(lk, lc, nu_, -1);
        bld.add(lk, lc);
      } else {
        TermKey ck = k;  // marker: tau^a cosh/sinh
        accumulate(pending_, ck, c);
      }
    }
    sum_.add(std::move(bld).build());
  }

  Nu nu_;
  PieceSum sum_;
  std::map<TermKey, Rational> pending_;
};

}  // namespace

HypExpr HypExpr::antiderivative() const {
  if (has_log()) throw AlgebraError("hyp: cannot integrate log-generator terms");
  Integrator integ(nu_);
  return integ.run(terms_, m_);
}

LaurentSeries HypExpr::laurent(int order) const {
  LaurentSeries out;
  out.lowest = -m_;
  const int need = order + m_;  // numerator series depth
  if (need < 0 || is_zero()) {
    out.coeffs.assign(static_cast<std::size_t>(std::max(0, order + m_ + 1)), Rational(0));
    return out;
  }
  bool first = true;
  std::vector<Rational> num(static_cast<std::size_t>(need) + 1, Rational(0));
  for (const auto& [k, c] : terms_) {
    if (k.elog != 0) throw AlgebraError("hyp: Laurent expansion of log-generator term");
    if (first) {
      out.eh = k.eh;
      out.em = k.em;
      out.ew = k.ew - k.a;
      first = false;
    } else if (k.eh != out.eh || k.em != out.em || k.ew - k.a != out.ew) {
      throw AlgebraError("hyp: Laurent expansion of parameter-inhomogeneous expression");
    }
    // tau^a = x^a * (nu_den/omega)^a
    Rational conv = c;
    for (int t = 0; t < k.a; ++t) conv *= Rational(nu_den(nu_));
    // e^{b x} = sum b^t x^t / t!
    Rational p = conv;
    for (int t = 0; k.a + t <= need; ++t) {
      num[static_cast<std::size_t>(k.a + t)] += p;
      if (k.b == 0) break;
      p *= Rational(k.b);
      p /= Rational(t + 1);
    }
  }
  // divide by (sinh x / x)^m, a unit power series in x^2
  std::vector<Rational> unit(static_cast<std::size_t>(need) + 1, Rational(0));
  unit[0] = Rational(1);
  {
    // sinh x / x = sum x^{2j} / (2j+1)!
    std::vector<Rational> s(unit.size(), Rational(0));
    Rational f(1);
    for (std::size_t j = 0; j < s.size(); j += 2) {
      s[j] = f;
      // advance 1/(2j+1)! -> 1/(2j+3)!
      f /= Rational(static_cast<long>(j) + 2);
      f /= Rational(static_cast<long>(j) + 3);
    }
    for (int rep = 0; rep < m_; ++rep) {
      std::vector<Rational> nxt(unit.size(), Rational(0));
      for (std::size_t i = 0; i < unit.size(); ++i) {
        if (unit[i].is_zero()) continue;
        for (std::size_t j = 0; i + j < unit.size(); ++j)
          nxt[i + j] += unit[i] * s[j];
      }
      unit.swap(nxt);
    }
  }
  std::vector<Rational> quot(num.size(), Rational(0));
  for (std::size_t i = 0; i < num.size(); ++i) {
    Rational acc = num[i];
    for (std::size_t j = 1; j <= i; ++j) {
      if (!unit[j].is_zero()) acc -= unit[j] * quot[i - j];
    }
    quot[i] = acc;  // unit[0] == 1
  }
  out.coeffs = std::move(quot);
  return out;
}

namespace {

template <typename T>
T eval_direct(const std::map<TermKey, Rational>& terms, int m, Nu nu, T tau,
              const ModelParams& params) {
  const T omega = static_cast<T>(params.omega);
  const T x = omega * tau / static_cast<T>(nu_den(nu));
  T num = 0;
  for (const auto& [k, c] : terms) {
    T v = static_cast<T>(c.to_long_double());
    if (k.a != 0) v *= std::pow(tau, static_cast<T>(k.a));
    if (k.b != 0) v *= std::exp(static_cast<T>(k.b) * x);
    if (k.eh != 0) v *= std::pow(static_cast<T>(params.hbar), static_cast<T>(k.eh));
    if (k.em != 0) v *= std::pow(static_cast<T>(params.mass), static_cast<T>(k.em));
    if (k.ew != 0) v *= std::pow(omega, static_cast<T>(k.ew));
    num += v;
  }
  if (m != 0) num /= std::pow(std::sinh(x), static_cast<T>(m));
  return num;
}

}  // namespace

double HypExpr::evaluate(double tau, const ModelParams& params) const {
  if (has_log()) throw AlgebraError("hyp: cannot evaluate log-generator terms");
  if (is_zero()) return 0.0;
  const double x = params.omega * tau / nu_den(nu_);
  // Near the origin the exponential basis cancels catastrophically; deep
  // expressions (high sinh power or wide frequency support) lose double
  // precision well before |x| = 1e-3, so the series window widens with the
  // depth. The exact series converges for |x| < pi.
  int bmax = 0;
  for (const auto& [k, c] : terms_) bmax = std::max(bmax, std::abs(k.b));
  const bool deep = m_ + bmax > 8;
  if (std::abs(x) < 1e-3 || (deep && std::abs(x) < 0.5)) {
    // the series needs one parameter monomial; split mixed expressions
    bool homogeneous = true;
    auto first = terms_.begin()->first;
    for (const auto& [k, c] : terms_) {
      if (k.eh != first.eh || k.em != first.em || k.ew - k.a != first.ew - first.a) {
        homogeneous = false;
        break;
      }
    }
    if (!homogeneous) {
      std::map<std::tuple<int, int, int>, HypBuilder> groups;
      for (const auto& [k, c] : terms_) {
        auto key = std::make_tuple(k.eh, k.em, k.ew - k.a);
        auto it = groups.find(key);
        if (it == groups.end())
          it = groups.emplace(key, HypBuilder(nu_, m_)).first;
        it->second.add(k, c);
      }
      double total = 0.0;
      for (auto& [key, bld] : groups) total += std::move(bld).build().evaluate(tau, params);
      return total;
    }
    const int kLaurentOrder = (std::abs(x) < 1e-3) ? 8 : 48;
    LaurentSeries ls = laurent(kLaurentOrder);
    if (tau == 0.0) {
      for (int j = ls.lowest; j < 0; ++j)
        if (!ls.at(j).is_zero())
          throw DivergesAtZero("hyp: negative Laurent powers at tau = 0");
    }
    long double acc = 0.0L;
    for (int j = ls.lowest + static_cast<int>(ls.coeffs.size()) - 1; j >= ls.lowest; --j) {
      const Rational& c = ls.at(j);
      if (c.is_zero() && j != ls.lowest) continue;
      long double xv = static_cast<long double>(x);
      long double p = (j >= 0) ? std::pow(xv, static_cast<long double>(j))
                               : 1.0L / std::pow(xv, static_cast<long double>(-j));
      if (tau == 0.0) p = (j == 0) ? 1.0L : 0.0L;
      acc += c.to_long_double() * p;
    }
    long double mono = std::pow(static_cast<long double>(params.hbar),
                                static_cast<long double>(ls.eh)) *
                       std::pow(static_cast<long double>(params.mass),
                                static_cast<long double>(ls.em)) *
                       std::pow(static_cast<long double>(params.omega),
                                static_cast<long double>(ls.ew));
    return static_cast<double>(acc * mono);
  }
  if (params.precision == Precision::Extended)
    return static_cast<double>(
        eval_direct<long double>(terms_, m_, nu_, static_cast<long double>(tau), params));
  return eval_direct<double>(terms_, m_, nu_, tau, params);
}

HypExpr HypExpr::rebase_half() const {
  if (nu_ == Nu::Half) return *this;
  if (has_log()) throw AlgebraError("hyp: cannot rebase log-generator terms");
  std::map<TermKey, Rational> t;
  for (const auto& [k0, c] : terms_) {
    TermKey k = k0;
    k.b *= 2;
    t[k] = c;
  }
  // 1/sinh^m(2x') = 1 / (2 sinh x' cosh x')^m: divide the numerator by
  // (y + 1/y)^m = (2 cosh x')^m exactly.
  for (int i = 0; i < m_; ++i) {
    std::map<TermKey, Rational> q;
    if (!divide_terms(t, q, /*by_sinh=*/false))
      throw AlgebraError("hyp: expression is not representable in the half-angle basis");
    t = scaled_map(q, Rational(1, 2));
  }
  HypBuilder b(Nu::Half, m_);
  for (const auto& [k, c] : t) b.add(k, c);
  return std::move(b).build();
}

std::string HypExpr::str() const {
  std::ostringstream os;
  if (is_zero()) return "0";
  bool first = true;
  for (const auto& [k, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.str() << ")";
    if (k.a) os << " tau^" << k.a;
    if (k.b) os << " e^{" << k.b << "x}";
    if (k.eh) os << " hbar^" << k.eh;
    if (k.em) os << " M^" << k.em;
    if (k.ew) os << " w^" << k.ew;
    if (k.elog) os << " L";
  }
  if (m_) os << " / sinh^" << m_;
  os << (nu_ == Nu::Half ? "  [x=w*tau/2]" : "  [x=w*tau]");
  return os.str();
}

}  // namespace aho
