#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "aho/params.hpp"
#include "aho/rational.hpp"

namespace aho {

// Unit of the frequency integer b: multiples of omega or of omega/2. The
// evolution-amplitude coefficients live in full-angle functions of
// omega*tau, thermal quantities in half-angle functions of omega*tau/2.
enum class Nu : std::uint8_t { Full, Half };

// Monomial index of one numerator term:
//   coeff * tau^a * e^{b*x} * hbar^eh * M^em * omega^ew * L^elog
// with x = nu*tau and L = ln sinh(x). L is a transient that may appear
// inside antiderivatives only.
struct TermKey {
  std::int32_t a = 0;
  std::int32_t b = 0;
  std::int32_t eh = 0;
  std::int32_t em = 0;
  std::int32_t ew = 0;
  std::int32_t elog = 0;
  auto operator<=>(const TermKey&) const = default;
};

// Laurent data of an expression around tau = 0, in the variable x = nu*tau.
// All terms must share one parameter monomial once tau-powers are absorbed
// into x; that common monomial is reported alongside the coefficients.
struct LaurentSeries {
  int lowest = 0;  // exponent of coeffs.front()
  std::vector<Rational> coeffs;
  int eh = 0, em = 0, ew = 0;

  Rational at(int j) const {
    int i = j - lowest;
    if (i < 0 || i >= static_cast<int>(coeffs.size())) return Rational(0);
    return coeffs[static_cast<std::size_t>(i)];
  }
};

// Canonical element of the closed function algebra
//
//   ( sum of terms ) / sinh^m(x),        x = nu * tau.
//
// Canonical form: terms sorted by key with merged duplicates and no zero
// coefficients, internally in the exponential basis e^{b x}, and reduced so
// that for m > 0 the numerator is not uniformly divisible by sinh(x).
// Values are immutable after construction; all operations are pure.
class HypExpr {
 public:
  HypExpr() = default;
  explicit HypExpr(Nu nu) : nu_(nu) {}

  static HypExpr zero(Nu nu = Nu::Full) { return HypExpr(nu); }
  static HypExpr one(Nu nu = Nu::Full) { return constant(Rational(1), nu); }
  static HypExpr constant(const Rational& c, Nu nu = Nu::Full);
  // c * tau^a * e^{b x} * hbar^eh M^em omega^ew
  static HypExpr term(const Rational& c, int a, int b, int eh = 0, int em = 0,
                      int ew = 0, Nu nu = Nu::Full, int elog = 0);
  static HypExpr sinh_multi(int k, Nu nu = Nu::Full);  // sinh(k x)
  static HypExpr cosh_multi(int k, Nu nu = Nu::Full);  // cosh(k x)
  static HypExpr sinh_power(int p, Nu nu = Nu::Full);  // sinh^p(x), numerator form
  static HypExpr tau_term(Nu nu = Nu::Full) { return term(Rational(1), 1, 0, 0, 0, 0, nu); }
  static HypExpr log_gen(Nu nu = Nu::Full) { return term(Rational(1), 0, 0, 0, 0, 0, nu, 1); }

  Nu nu() const { return nu_; }
  int denom_power() const { return m_; }
  const std::map<TermKey, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  bool has_log() const;
  // Terms carrying the log generator, with the generator stripped.
  HypExpr log_part() const;

  HypExpr operator-() const;
  friend HypExpr operator+(const HypExpr& a, const HypExpr& b);
  friend HypExpr operator-(const HypExpr& a, const HypExpr& b);
  friend HypExpr operator*(const HypExpr& a, const HypExpr& b);
  friend bool operator==(const HypExpr& a, const HypExpr& b);

  HypExpr scaled(const Rational& c) const;
  HypExpr shifted_params(int dh, int dm, int dw) const;
  // Divide by sinh^p(x) (raises the denominator power, then reduces).
  HypExpr div_sinh(int p) const;
  // Multiply by sinh^p(x).
  HypExpr mul_sinh(int p) const;
  // Exact division of every term by tau (all terms must have a >= 1).
  HypExpr div_tau() const;

  // d/dtau. Handles log-generator terms (d/dtau L = nu cosh/sinh).
  HypExpr differentiate() const;
  // d/domega at fixed tau: explicit omega powers plus the argument chain
  // d x/d omega = tau (full) or tau/2 (half).
  HypExpr differentiate_omega() const;
  // Exact antiderivative in tau with all integration constants zero.
  // Throws NonElementaryIntegral outside the closed family.
  HypExpr antiderivative() const;

  // Laurent expansion in x through x^order (log-free expressions only).
  LaurentSeries laurent(int order) const;

  // Numeric evaluation at tau > 0 (or tau = 0 if regular). Terms must be
  // log-free. Below |x| < 1e-3 evaluation switches to the Laurent expansion
  // through order 8 to avoid cancellation.
  double evaluate(double tau, const ModelParams& params) const;

  // Move a full-angle expression to the half-angle basis. Requires the
  // result to stay inside the algebra (cosh factors of the rebased
  // denominator must divide the numerator exactly); throws otherwise.
  HypExpr rebase_half() const;

  std::string str() const;  // debug-oriented plain text

 private:
  void normalize();
  void reduce();
  long double evaluate_impl(long double tau, const ModelParams& params) const;

  Nu nu_ = Nu::Full;
  int m_ = 0;
  std::map<TermKey, Rational> terms_;

  friend class HypBuilder;
};

// Low-level assembly helper used by the operations; accumulates raw terms
// and produces a canonical expression.
class HypBuilder {
 public:
  explicit HypBuilder(Nu nu, int m = 0) : nu_(nu), m_(m) {}
  void add(const TermKey& k, const Rational& c);
  void add_terms_of(const HypExpr& e);  // denominators must match
  HypExpr build() &&;

 private:
  Nu nu_;
  int m_;
  std::map<TermKey, Rational> terms_;
};

}  // namespace aho
