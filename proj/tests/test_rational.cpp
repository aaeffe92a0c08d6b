#include <doctest.h>

#include <cstdint>
#include <limits>

#include "support.hpp"
#include "wtrace/extension.hpp"
#include "wtrace/rational.hpp"

using wtrace::Rational;

TEST_CASE("normal form") {
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(3, -6) == Rational(-1, 2));
  CHECK(Rational(0, 7) == Rational(0));
  CHECK(Rational(6, 3).is_integer());
  CHECK(Rational(-3, 2).str() == "-3/2");
  CHECK(Rational(5).str() == "5");
  CHECK_THROWS(Rational(1, 0));
}

TEST_CASE("parse") {
  CHECK(Rational::parse("1.5") == Rational(3, 2));
  CHECK(Rational::parse("4/3") == Rational(4, 3));
  CHECK(Rational::parse("-2") == Rational(-2));
  CHECK(Rational::parse("0.125") == Rational(1, 8));
  CHECK_THROWS(Rational::parse("abc"));
}

TEST_CASE("field laws on random rationals") {
  testing::Gen g(11);
  for (int i = 0; i < 500; ++i) {
    const Rational a = g.rational(), b = g.rational(), c = g.rational();
    CHECK((a + b) + c == a + (b + c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a - a == Rational(0));
    if (!b.is_zero()) CHECK(a / b * b == a);
    CHECK((a < b) == (a.to_double() < b.to_double()));
    CHECK(std::abs(a.to_double() + b.to_double() - (a + b).to_double()) < 1e-12);
  }
}

TEST_CASE("pow and inverse") {
  CHECK(Rational(2, 3).pow(3) == Rational(8, 27));
  CHECK(Rational(2, 3).pow(-2) == Rational(9, 4));
  CHECK(Rational(-5, 7).inverse() == Rational(-7, 5));
  CHECK_THROWS(Rational(0).inverse());
}

TEST_CASE("overflow is reported, not wrapped") {
  const Rational big(std::numeric_limits<std::int64_t>::max() / 2 + 1);
  CHECK_THROWS(big * Rational(4));
  CHECK_THROWS(big + big + big);
}

TEST_CASE("exact Gaussian elimination through Eigen") {
  using M = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;
  using V = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;
  M a(3, 3);
  a << Rational(2), Rational(1), Rational(0),  //
      Rational(1), Rational(3), Rational(1),   //
      Rational(0), Rational(1), Rational(4);
  V x(3);
  x << Rational(1, 3), Rational(-2), Rational(5, 7);
  const V b = a * x;
  CHECK(wtrace::gauss_solve<Rational>(a, b) == x);

  M sing = M::Zero(2, 2);
  sing(0, 0) = Rational(1);
  CHECK_THROWS(wtrace::gauss_solve<Rational>(sing, V::Ones(2)));
}
