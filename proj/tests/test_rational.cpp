#include <doctest.h>

#include <random>
#include <sstream>

#include <Eigen/LU>

#include "fracmon/error.hpp"
#include "fracmon/rational.hpp"

using fracmon::Rational;

TEST_SUITE("rational") {

TEST_CASE("normal form") {
  CHECK(Rational(2, 4).num() == 1);
  CHECK(Rational(2, 4).den() == 2);
  CHECK(Rational(3, -6) == Rational(-1, 2));
  CHECK(Rational(0, -7).den() == 1);
  CHECK(Rational(0, -7).num() == 0);
  CHECK_THROWS_AS(Rational(1, 0), fracmon::InvalidInput);
}

TEST_CASE("parse and print") {
  CHECK(Rational::parse("1/2") == Rational(1, 2));
  CHECK(Rational::parse("-3/6").str() == "-1/2");
  CHECK(Rational::parse("4/2").str() == "2");
  CHECK(Rational::parse("7").str() == "7");
  CHECK(Rational::parse("0/5").str() == "0");
  CHECK_THROWS_AS(Rational::parse("1/"), fracmon::InvalidInput);
  CHECK_THROWS_AS(Rational::parse("a/2"), fracmon::InvalidInput);
  CHECK_THROWS_AS(Rational::parse("1/0"), fracmon::InvalidInput);
  std::ostringstream os;
  os << Rational(5, 6);
  CHECK(os.str() == "5/6");
}

TEST_CASE("arithmetic") {
  CHECK(Rational(1, 2) + Rational(1, 3) == Rational(5, 6));
  CHECK(Rational(1, 2) - Rational(1, 3) == Rational(1, 6));
  CHECK(Rational(2, 3) * Rational(3, 4) == Rational(1, 2));
  CHECK(Rational(2, 3) / Rational(4, 3) == Rational(1, 2));
  CHECK(-Rational(1, 2) == Rational(-1, 2));
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(-1, 2) < Rational(0));
  CHECK(abs(Rational(-3, 4)) == Rational(3, 4));
  CHECK(Rational(6, 3).is_integer());
  CHECK(Rational(6, 3).to_int() == 2);
  CHECK_THROWS(Rational(1, 2).to_int());
  CHECK(Rational(1, 4).to_double() == doctest::Approx(0.25));
  CHECK_THROWS_AS(Rational(1) / Rational(0), fracmon::InvalidInput);
}

TEST_CASE("overflow is reported") {
  const Rational big(Rational::Int(1) << 100, 1);
  CHECK_THROWS_AS(big * big, fracmon::OverflowError);
  const Rational tiny(1, Rational::Int(1) << 100);
  CHECK_THROWS_AS(tiny * tiny, fracmon::OverflowError);
  CHECK_THROWS_AS(Rational::parse("1000000000000000000000000000000000000000000"), fracmon::OverflowError);
}

TEST_CASE("randomized field identities") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::int64_t> num(-1000000, 1000000), den(1, 1000000);
  for (int i = 0; i < 2000; ++i) {
    const Rational x(num(rng), den(rng)), y(num(rng), den(rng)), z(num(rng), den(rng));
    CHECK((x + y) - y == x);
    CHECK(x + y == y + x);
    CHECK(x * y == y * x);
    CHECK((x + y) + z == x + (y + z));
    CHECK(x * (y + z) == x * y + x * z);
    if (y != Rational(0)) CHECK((x / y) * y == x);
    CHECK(Rational::parse(x.str()) == x);
  }
}

TEST_CASE("Eigen matrices of rationals") {
  fracmon::RationalMatrix<2, 2> m;
  m << Rational(1), Rational(1, 2), Rational(0), Rational(1);
  CHECK(m.determinant() == Rational(1));
  const fracmon::RationalMatrix<2, 2> sq = m * m;
  CHECK(sq(0, 1) == Rational(1));
}

}
