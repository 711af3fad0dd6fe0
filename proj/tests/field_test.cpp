#include <catch2/catch_amalgamated.hpp>

#include "test_helpers.hpp"

using namespace nilcentral;
using nilcentral::testing::f7;
using nilcentral::testing::q;

TEST_CASE("field spec parsing") {
    CHECK(FieldSpec::parse("Q") == FieldSpec::rationals());
    CHECK(FieldSpec::parse("F7") == FieldSpec::prime(7));
    CHECK(FieldSpec::parse("F101").modulus() == 101);
    CHECK(FieldSpec::rationals().characteristic() == 0);
    CHECK(FieldSpec::prime(7).characteristic() == 7);

    CHECK_THROWS_AS(FieldSpec::parse(""), parse_error);
    CHECK_THROWS_AS(FieldSpec::parse("q"), parse_error);
    CHECK_THROWS_AS(FieldSpec::parse("F"), parse_error);
    CHECK_THROWS_AS(FieldSpec::parse("F07"), parse_error);
    CHECK_THROWS_AS(FieldSpec::parse("F9"), domain_error);   // composite
    CHECK_THROWS_AS(FieldSpec::parse("F2"), domain_error);   // char 2 excluded
    CHECK_THROWS_AS(FieldSpec::parse("F1"), domain_error);
    CHECK_THROWS_AS(FieldSpec::parse("7"), parse_error);
    CHECK(FieldSpec::parse("Q").str() == "Q");
    CHECK(FieldSpec::parse("F7").str() == "F7");
}

TEST_CASE("rational parse and render") {
    CHECK(Scalar::parse(q(), "0").str() == "0");
    CHECK(Scalar::parse(q(), "-0").str() == "0");
    CHECK(Scalar::parse(q(), "6/4").str() == "3/2");
    CHECK(Scalar::parse(q(), "-6/4").str() == "-3/2");
    CHECK(Scalar::parse(q(), "12").str() == "12");
    CHECK(Scalar::parse(q(), "0/5").str() == "0");
    CHECK(Scalar::parse(q(), "123456789012345678901234567890").str() ==
          "123456789012345678901234567890");

    CHECK_THROWS_AS(Scalar::parse(q(), ""), parse_error);
    CHECK_THROWS_AS(Scalar::parse(q(), "-"), parse_error);
    CHECK_THROWS_AS(Scalar::parse(q(), "5/"), parse_error);
    CHECK_THROWS_AS(Scalar::parse(q(), "/5"), parse_error);
    CHECK_THROWS_AS(Scalar::parse(q(), "1/0"), parse_error);
    CHECK_THROWS_AS(Scalar::parse(q(), "3/-2"), parse_error);
    CHECK_THROWS_AS(Scalar::parse(q(), "1a"), parse_error);
    CHECK_THROWS_AS(Scalar::parse(q(), " 1"), parse_error);
    CHECK_THROWS_AS(Scalar::parse(q(), "1 "), parse_error);
    CHECK_THROWS_AS(Scalar::parse(q(), "+1"), parse_error);
    CHECK_THROWS_AS(Scalar::parse(q(), "1.5"), parse_error);
}

TEST_CASE("prime field parse and arithmetic") {
    CHECK(Scalar::parse(f7(), "12").str() == "5");
    CHECK(Scalar::parse(f7(), "-1").str() == "6");
    CHECK(Scalar::parse(f7(), "3/2").str() == "5");   // 3 * 2^{-1} = 3 * 4 = 12 = 5
    CHECK(Scalar::parse(f7(), "7").is_zero());
    CHECK_THROWS_AS(Scalar::parse(f7(), "1/7"), parse_error);   // denominator is 0 mod 7

    const Scalar two = Scalar::from_int(f7(), 2);
    CHECK((two * two.inverse()).is_one());
    CHECK(Scalar::from_int(f7(), -3).str() == "4");
    CHECK_THROWS_AS(Scalar::zero(f7()).inverse(), domain_error);
    CHECK(scalar_pow(two, 10).str() == "2");   // 1024 mod 7
}

TEST_CASE("scalar arithmetic axioms hold on random samples") {
    for (const FieldSpec spec : {q(), f7()}) {
        Rng rng(11);
        for (int trial = 0; trial < 200; ++trial) {
            const Scalar a = random_scalar(rng, spec);
            const Scalar b = random_scalar(rng, spec);
            const Scalar c = random_scalar(rng, spec);
            CHECK((a + b) * c == a * c + b * c);
            CHECK((a + b) + c == a + (b + c));
            CHECK(a * b == b * a);
            CHECK(a + (-a) == Scalar::zero(spec));
            if (!b.is_zero()) {
                CHECK(a / b * b == a);
            }
        }
    }
}

TEST_CASE("rationals stay exact where floating point would drift") {
    const Scalar third = Scalar::parse(q(), "1/3");
    Scalar sum = Scalar::zero(q());
    for (int i = 0; i < 3; ++i) sum += third;
    CHECK(sum.is_one());
    CHECK(scalar_pow(Scalar::from_int(q(), 10), 30).str() ==
          "1000000000000000000000000000000");
}

TEST_CASE("cross-field operations are rejected") {
    const Scalar a = Scalar::one(q());
    const Scalar b = Scalar::one(f7());
    CHECK_THROWS_AS(a + b, mismatch_error);
    CHECK_THROWS_AS(a == b, mismatch_error);
}

TEST_CASE("primality guard on field construction") {
    CHECK_THROWS_AS(FieldSpec::prime(9), domain_error);
    CHECK_THROWS_AS(FieldSpec::prime(1), domain_error);
    CHECK_THROWS_AS(FieldSpec::prime(2), domain_error);
    CHECK(FieldSpec::prime(3).modulus() == 3);
    CHECK(FieldSpec::prime(1000003).modulus() == 1000003);
}
