#include <doctest.h>

#include "aho/rational.hpp"

using aho::Rational;

TEST_CASE("construction normalizes to lowest terms with positive denominator") {
  CHECK(Rational(3, 12) == Rational(1, 4));
  CHECK(Rational(-3, 12) == Rational(-1, 4));
  CHECK(Rational(3, -12) == Rational(-1, 4));
  CHECK(Rational(0, 7) == Rational(0));
  CHECK(Rational(0, -7).numerator_str() == "0");
  CHECK(Rational(0).denominator_str() == "1");
}

TEST_CASE("arithmetic stays exact far beyond 64 bits") {
  Rational big = Rational::from_strings("123456789012345678901234567890", "1");
  Rational r = big * big - big;
  CHECK(r.numerator_str() == "15241578753238836750495351562412741998489559520973784484210");
  Rational q(1);
  for (int i = 2; i <= 40; ++i) q *= Rational(1, i);
  Rational p(1);
  for (int i = 2; i <= 40; ++i) p *= Rational(i);
  CHECK(q * p == Rational(1));
}

TEST_CASE("comparisons and helpers") {
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(-5).abs() == Rational(5));
  CHECK(Rational(7, 3).sign() == 1);
  CHECK(Rational(-7, 3).sign() == -1);
  CHECK(aho::double_factorial_odd(0) == Rational(1));
  CHECK(aho::double_factorial_odd(1) == Rational(1));
  CHECK(aho::double_factorial_odd(2) == Rational(3));
  CHECK(aho::double_factorial_odd(3) == Rational(15));
  CHECK(aho::binomial(5, 2) == Rational(10));
  CHECK(aho::binomial(4, 0) == Rational(1));
}

TEST_CASE("string round trip and numeric conversion") {
  Rational r = Rational::from_strings("-9", "16");
  CHECK(r == Rational(-9, 16));
  CHECK(r.to_double() == doctest::Approx(-0.5625).epsilon(1e-15));
  CHECK(static_cast<double>(Rational(1, 3).to_long_double()) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-16));
}
