#include <doctest.h>

#include "windice/scalar.hpp"

using namespace windice;

TEST_CASE("rational arithmetic basics") {
    Rational a(1, 3), b(1, 6);
    CHECK(a + b == Rational(1, 2));
    CHECK(a - b == Rational(1, 6));
    CHECK(a * b == Rational(1, 18));
    CHECK(a / b == Rational(2));
    CHECK(-a < Rational(0));
    CHECK(abs(-a) == a);
    CHECK(pow_int(Rational(1, 2), 3) == Rational(1, 8));
}

TEST_CASE("rational parsing and printing") {
    CHECK(Rational::parse("3/8").to_double() == doctest::Approx(0.375));
    CHECK(Rational::parse("-7").str() == "-7");
    CHECK(Rational::parse("99/200").str() == "99/200");
    CHECK(Rational::parse("4/8").str() == "1/2");  // canonicalized
    CHECK_THROWS_AS(Rational::parse("abc"), std::invalid_argument);
    CHECK_THROWS_AS(Rational(1) / Rational(0), std::domain_error);
}

TEST_CASE("exact binary conversion from double") {
    CHECK(Rational::from_double(0.5) == Rational(1, 2));
    CHECK(Rational::from_double(0.375) == Rational(3, 8));
    // 0.1 is not exactly representable; conversion keeps the double's value
    CHECK(Rational::from_double(0.1).to_double() == 0.1);
}

TEST_CASE("scalar traits") {
    CHECK(scalar_traits<double>::feas_eps() == 1e-9);
    CHECK(scalar_traits<Rational>::feas_eps() == Rational(0));
    CHECK(scalar_traits<Rational>::exact);
    CHECK_FALSE(scalar_traits<double>::exact);
}
