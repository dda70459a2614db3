#include "aho/recursion.hpp"

#include <cassert>
#include <sstream>

#include "aho/errors.hpp"

namespace aho {

namespace {

// e / sinh^p for signed p: negative p multiplies instead.
HypExpr sinh_shift(const HypExpr& e, int p) {
  return p >= 0 ? e.div_sinh(p) : e.mul_sinh(-p);
}

}  // namespace

CoeffTable::CoeffTable() {
  put(0, 0, 0, HypExpr::one(Nu::Full));
  max_order_ = 0;
  integrations_.assign(1, 0);
}

void CoeffTable::extend(int order) {
  if (order > kMaxOrder) throw AlgebraError("recursion: order beyond compiled maximum");
  for (int n = max_order_ + 1; n <= order; ++n) build_order(n);
}

const HypExpr& CoeffTable::at(int n, int k, int l) const {
  auto it = entries_.find(CoeffKey{n, k, l});
  if (it == entries_.end()) throw AlgebraError("recursion: missing coefficient");
  return it->second;
}

HypExpr CoeffTable::fetch(int n, int k, int l) const {
  if (!CoeffKey::valid(n, k, l)) return HypExpr::zero(Nu::Full);
  return at(n, k, l);
}

std::size_t CoeffTable::entries_at(int n) const {
  std::size_t c = 0;
  for (const auto& [k, e] : entries_)
    if (k.n == n) ++c;
  return c;
}

long long CoeffTable::integrations(int n) const {
  if (n < 0 || n >= static_cast<int>(integrations_.size())) return 0;
  return integrations_[static_cast<std::size_t>(n)];
}

void CoeffTable::put(int n, int k, int l, HypExpr e) {
  assert(CoeffKey::valid(n, k, l));
  entries_.insert_or_assign(CoeffKey{n, k, l}, std::move(e));
}

HypExpr CoeffTable::fix_constant(const HypExpr& candidate, int l) {
  if (candidate.is_zero()) return candidate;
  LaurentSeries ls = candidate.laurent(l);
  for (int j = ls.lowest; j < 0; ++j) {
    if (!ls.at(j).is_zero())
      throw ConstraintViolation("recursion: negative-power obstruction at tau -> 0");
  }
  Rational d = -ls.at(0);
  HypExpr dexpr = HypExpr::term(d, 0, 0, ls.eh, ls.em, ls.ew, candidate.nu());
  if (d.is_zero()) dexpr = HypExpr::zero(candidate.nu());
  HypExpr fixed = candidate + dexpr;
  LaurentSeries check = fixed.laurent(l);
  for (int j = check.lowest; j <= l; ++j) {
    if (!check.at(j).is_zero())
      throw ConstraintViolation("recursion: regularity obstruction not removable by a constant");
  }
  return dexpr;
}

CoeffStats CoeffTable::stats(int n) {
  long long nn = n;
  return CoeffStats{4 * nn * nn + 4 * nn + 1, 2 * nn * nn + 3 * nn + 1, 2 * nn + 1};
}

HypExpr CoeffTable::ode_rhs(int n, int k, int l) const {
  HypExpr rhs = fetch(n, k + 1, l + 2)
                    .div_sinh(2)
                    .scaled(Rational((l + 2) * (l + 1), 2))
                    .shifted_params(1, -1, 0);
  rhs = rhs + fetch(n, k, l + 1).div_sinh(2).scaled(Rational(l + 1)).shifted_params(0, 0, 1);
  rhs = rhs - fetch(n - 1, k - 2, l - 4).mul_sinh(4).shifted_params(-1, 0, 0);
  return rhs;
}

// Off-diagonal coefficient from the algebraic relation, valid for
// 0 < l <= k. References to the same column land on already-mirrored
// entries with index l - 1 and l - 2; references to invalid keys vanish.
HypExpr CoeffTable::algebraic_entry(int n, int k, int l) const {
  assert(l >= 1 && l <= k);
  HypExpr v = fetch(n, k + 1, l + 1).scaled(Rational(-(l + 1), 2)).shifted_params(1, -1, -1);
  v = v + fetch(n - 1, k - 2, l - 5).mul_sinh(6).scaled(Rational(1, l)).shifted_params(-1, 0, -1);
  v = v + sinh_shift(fetch(n, k + 1, 2 * k - l + 3), 2 * k - 2 * l + 2)
              .scaled(Rational((2 * k - l + 3) * (2 * k - l + 2), 2 * l))
              .shifted_params(1, -1, -1);
  v = v + sinh_shift(fetch(n, k, 2 * k - l + 2), 2 * k - 2 * l + 2)
              .scaled(Rational(2 * k - l + 2, l));
  v = v - sinh_shift(fetch(n - 1, k - 2, 2 * k - l - 3), 2 * k - 2 * l - 4)
              .scaled(Rational(1, l))
              .shifted_params(-1, 0, -1);
  v = v - (HypExpr::cosh_multi(1) * sinh_shift(fetch(n, k, 2 * k - l + 1), 2 * k - 2 * l + 1))
              .scaled(Rational(2 * k - 2 * l + 2, l));
  return v;
}

void CoeffTable::build_order(int n) {
  assert(n == max_order_ + 1);
  integrations_.resize(static_cast<std::size_t>(n) + 1, 0);

  for (int k = 2 * n; k >= 0; --k) {
    // diagonal: one combined integral per k
    HypExpr integrand = HypExpr::zero(Nu::Full);
    if (CoeffKey::valid(n, k + 1, 2 * k + 2)) {
      integrand = integrand + at(n, k + 1, 2 * k + 2)
                                  .div_sinh(2)
                                  .scaled(Rational((2 * k + 2) * (2 * k + 1), 2))
                                  .shifted_params(1, -1, 0);
    }
    if (CoeffKey::valid(n - 1, k - 2, 2 * k - 4)) {
      integrand = integrand - at(n - 1, k - 2, 2 * k - 4).mul_sinh(4).shifted_params(-1, 0, 0);
    }
    HypExpr raw = integrand.antiderivative();
    ++integrations_[static_cast<std::size_t>(n)];
    if (!raw.log_part().is_zero())
      throw SymmetryViolation("recursion: log generator failed to cancel in a diagonal");
    HypExpr d = fix_constant(raw, 2 * k);
    put(n, k, 2 * k, raw + d);

    if (k > 0) put(n, k, 0, at(n, k, 2 * k).div_sinh(2 * k));
    for (int l = 1; l <= k; ++l) {
      HypExpr v = algebraic_entry(n, k, l);
      if (v.has_log())
        throw SymmetryViolation("recursion: log generator in an off-diagonal entry");
      put(n, k, l, v);
      if (l < k) put(n, k, 2 * k - l, v.mul_sinh(2 * k - 2 * l));
    }
  }

  // exact master-equation check on every new entry
  for (int k = 0; k <= 2 * n; ++k) {
    for (int l = 0; l <= 2 * k; ++l) {
      if (!(at(n, k, l).differentiate() == ode_rhs(n, k, l))) {
        std::ostringstream os;
        os << "recursion: master equation violated at (" << n << "," << k << "," << l << ")";
        throw SymmetryViolation(os.str());
      }
    }
  }
  max_order_ = n;
}

}  // namespace aho
