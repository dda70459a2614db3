#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <utility>

namespace aho {

// Arbitrary-precision rational scalar. Always held in lowest terms with a
// positive denominator; zero is 0/1. Backed by GMP.
class Rational {
 public:
  Rational() : q_(0) {}
  Rational(long n) : q_(n) {}  // NOLINT(google-explicit-constructor)
  Rational(long n, long d) : q_(n, d) { q_.canonicalize(); }

  static Rational from_strings(const std::string& num, const std::string& den) {
    Rational r;
    r.q_ = mpq_class(mpz_class(num), mpz_class(den));
    r.q_.canonicalize();
    return r;
  }

  bool is_zero() const { return sgn(q_) == 0; }
  bool is_one() const { return q_ == 1; }
  int sign() const { return sgn(q_); }

  std::string numerator_str() const { return q_.get_num().get_str(); }
  std::string denominator_str() const { return q_.get_den().get_str(); }
  std::string str() const { return q_.get_str(); }

  double to_double() const { return q_.get_d(); }

  // Double-double style conversion; keeps ~32 decimal digits, enough to feed
  // a long double accumulation without rounding at the coefficient stage.
  long double to_long_double() const {
    double hi = q_.get_d();
    mpq_class rest = q_ - mpq_class(hi);
    return static_cast<long double>(hi) + static_cast<long double>(rest.get_d());
  }

  Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
  Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
  Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
  Rational& operator/=(const Rational& o) { q_ /= o.q_; return *this; }

  friend Rational operator+(Rational a, const Rational& b) { a += b; return a; }
  friend Rational operator-(Rational a, const Rational& b) { a -= b; return a; }
  friend Rational operator*(Rational a, const Rational& b) { a *= b; return a; }
  friend Rational operator/(Rational a, const Rational& b) { a /= b; return a; }
  friend Rational operator-(const Rational& a) {
    Rational r;
    r.q_ = -a.q_;
    return r;
  }

  friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.q_ != b.q_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.q_ < b.q_; }

  Rational abs() const {
    Rational r;
    r.q_ = ::abs(q_);
    return r;
  }

 private:
  mpq_class q_;
};

inline Rational rat(long n, long d = 1) { return Rational(n, d); }

// (2k-1)!! as an exact integer-valued rational; k = 0 gives 1.
inline Rational double_factorial_odd(int k) {
  Rational r(1);
  for (int j = 1; j <= k; ++j) r *= Rational(2 * j - 1);
  return r;
}

inline Rational binomial(int n, int k) {
  if (k < 0 || k > n) return Rational(0);
  Rational r(1);
  for (int j = 0; j < k; ++j) r *= Rational(n - j, j + 1);
  return r;
}

}  // namespace aho
