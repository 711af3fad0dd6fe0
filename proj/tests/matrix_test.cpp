#include <catch2/catch_amalgamated.hpp>

#include "test_helpers.hpp"

using namespace nilcentral;
using nilcentral::testing::dense_commutator;
using nilcentral::testing::dense_product;
using nilcentral::testing::f7;
using nilcentral::testing::q;

namespace {

UTMatrix unit(const FieldSpec& spec, int r, int i, int j) {
    return UTMatrix::basis_unit(spec, r, i, j);
}

} // namespace

TEST_CASE("slot indexing is a bijection") {
    for (int r = 2; r <= 10; ++r) {
        const std::size_t n = strict_upper_slot_count(r);
        REQUIRE(n == static_cast<std::size_t>(r) * (r - 1) / 2);
        std::size_t expected = 0;
        for (int i = 1; i < r; ++i) {
            for (int j = i + 1; j <= r; ++j) {
                REQUIRE(slot_index(r, i, j) == expected);
                const auto [bi, bj] = slot_of(r, expected);
                REQUIRE(bi == i);
                REQUIRE(bj == j);
                ++expected;
            }
        }
    }
    CHECK_THROWS_AS(strict_upper_slot_count(1), domain_error);
    CHECK_THROWS_AS(slot_index(4, 2, 2), domain_error);
    CHECK_THROWS_AS(slot_index(4, 3, 2), domain_error);
    CHECK_THROWS_AS(slot_index(4, 0, 2), domain_error);
    CHECK_THROWS_AS(slot_index(4, 1, 5), domain_error);
}

TEST_CASE("entry storage enforces strict upper slots and drops zeros") {
    UTMatrix m(q(), 4);
    CHECK(m.is_zero());
    m.set(1, 3, Scalar::from_int(q(), 5));
    CHECK(m.get(1, 3) == Scalar::from_int(q(), 5));
    CHECK(m.get(2, 4).is_zero());
    m.set(1, 3, Scalar::zero(q()));
    CHECK(m.is_zero());
    CHECK(m.entries().empty());
    CHECK_THROWS_AS(m.set(3, 3, Scalar::one(q())), domain_error);
    CHECK_THROWS_AS(m.set(3, 1, Scalar::one(q())), domain_error);
    CHECK_THROWS_AS(m.set(1, 2, Scalar::one(f7())), mismatch_error);
    CHECK_THROWS_AS(m.get(0, 2), domain_error);
}

TEST_CASE("frozen products of matrix units") {
    const UTMatrix e12 = unit(q(), 4, 1, 2);
    const UTMatrix e23 = unit(q(), 4, 2, 3);
    const UTMatrix e34 = unit(q(), 4, 3, 4);
    CHECK(e12 * e23 == unit(q(), 4, 1, 3));
    CHECK((e23 * e12).is_zero());
    CHECK((e12 * e12).is_zero());
    CHECK(commutator(e12, e23) == unit(q(), 4, 1, 3));
    CHECK(commutator(e23, e12) == -unit(q(), 4, 1, 3));
    CHECK((e12 * e23) * e34 == unit(q(), 4, 1, 4));
    CHECK(to_term_string(commutator(e23, e12)) == "-1*e(1,3)");
    CHECK(to_term_string(UTMatrix(q(), 4)) == "0");
}

TEST_CASE("sparse product agrees with a dense oracle") {
    for (const FieldSpec spec : {q(), f7()}) {
        Rng rng(101);
        for (int trial = 0; trial < 60; ++trial) {
            const int r = static_cast<int>(rng.int_in(2, 8));
            const UTMatrix a = random_ut(rng, spec, r);
            const UTMatrix b = random_ut(rng, spec, r);
            CHECK(a * b == dense_product(a, b));
            CHECK(commutator(a, b) == dense_commutator(a, b));
        }
    }
}

TEST_CASE("every element is nilpotent of order r") {
    Rng rng(211);
    for (int trial = 0; trial < 500; ++trial) {
        const int r = static_cast<int>(rng.int_in(4, 8));
        const UTMatrix a = random_ut(rng, q(), r);
        CHECK(power(a, r).is_zero());
    }
    CHECK_FALSE(power(j_matrix(q(), 6), 5).is_zero());
    CHECK_THROWS_AS(power(j_matrix(q(), 4), 0), domain_error);
}

TEST_CASE("commutator is bilinear and antisymmetric") {
    Rng rng(307);
    for (int trial = 0; trial < 60; ++trial) {
        const int r = static_cast<int>(rng.int_in(3, 7));
        const UTMatrix a = random_ut(rng, q(), r);
        const UTMatrix b = random_ut(rng, q(), r);
        const UTMatrix c = random_ut(rng, q(), r);
        const Scalar s = random_scalar(rng, q());
        CHECK(commutator(a, b) == -commutator(b, a));
        CHECK(commutator(a + b, c) == commutator(a, c) + commutator(b, c));
        UTMatrix sa = a;
        sa.scale(s);
        UTMatrix expected = commutator(a, b);
        expected.scale(s);
        CHECK(commutator(sa, b) == expected);
        CHECK(commutator(a, a).is_zero());
    }
}

TEST_CASE("center membership and absorption") {
    for (int r = 3; r <= 7; ++r) {
        UTMatrix c = unit(q(), r, 1, r);
        CHECK(in_center(c));
        c.scale(Scalar::from_int(q(), -7));
        CHECK(in_center(c));
        CHECK(in_center(UTMatrix(q(), r)));
        CHECK_FALSE(in_center(unit(q(), r, 1, 2)));
        CHECK_FALSE(in_center(unit(q(), r, 1, r) + unit(q(), r, 1, 2)));

        Rng rng(401);
        for (int trial = 0; trial < 20; ++trial) {
            const UTMatrix x = random_ut(rng, q(), r);
            CHECK(commutator(x, c).is_zero());
        }
    }
}

TEST_CASE("corner space membership") {
    const int r = 5;
    CHECK(in_omega(unit(q(), r, 1, r - 1)));
    CHECK(in_omega(unit(q(), r, 1, r)));
    CHECK(in_omega(unit(q(), r, 2, r)));
    CHECK(in_omega(unit(q(), r, 1, 4) + unit(q(), r, 2, 5)));
    CHECK(in_omega(UTMatrix(q(), r)));
    CHECK_FALSE(in_omega(unit(q(), r, 2, 3)));
    CHECK_FALSE(in_omega(unit(q(), r, 1, 2) + unit(q(), r, 1, 5)));
    CHECK_FALSE(in_omega(unit(q(), 4, 2, 3)));
    // degenerate sizes: the three corner slots cover everything
    CHECK(in_omega(unit(q(), 3, 1, 2)));
    Rng rng(7);
    CHECK(in_omega(random_ut(rng, q(), 2)));
}

TEST_CASE("named matrices are frozen") {
    const UTMatrix j = j_matrix(q(), 4);
    CHECK(to_term_string(j) == "1*e(1,2) + 1*e(2,3) + 1*e(3,4)");
    CHECK(to_term_string(w1_matrix(q(), 4)) == "1*e(1,2) + 2*e(2,3) + 3*e(3,4)");
    CHECK(to_term_string(w2_matrix(q(), 4)) == "3*e(1,2) + 2*e(2,3) + 1*e(3,4)");
    CHECK(to_term_string(power(w1_matrix(q(), 4), 2)) == "2*e(1,3) + 6*e(2,4)");
    CHECK(power(j_matrix(q(), 4), 3) == unit(q(), 4, 1, 4));
}

TEST_CASE("superdiagonal shape recognition") {
    CHECK(is_s1_shaped(j_matrix(q(), 5)));
    CHECK(is_s1_shaped(w1_matrix(q(), 6)));
    CHECK_FALSE(is_s1_shaped(UTMatrix(q(), 4)));
    CHECK_FALSE(is_s1_shaped(j_matrix(q(), 4) + unit(q(), 4, 1, 3)));
    UTMatrix gap = j_matrix(q(), 4);
    gap.set(2, 3, Scalar::zero(q()));
    CHECK_FALSE(is_s1_shaped(gap));
}

TEST_CASE("invertible triangular inverse") {
    Rng rng(503);
    for (const FieldSpec spec : {q(), f7()}) {
        for (int trial = 0; trial < 40; ++trial) {
            const int r = static_cast<int>(rng.int_in(2, 7));
            const InvTriMatrix b = random_invtri(rng, spec, r);
            CHECK(b * b.inverse() == InvTriMatrix::identity(spec, r));
            CHECK(b.inverse() * b == InvTriMatrix::identity(spec, r));
        }
    }
    InvTriMatrix bad(InvTriMatrix::identity(q(), 3));
    CHECK_THROWS_AS(bad.set(2, 2, Scalar::zero(q())), domain_error);
    CHECK_THROWS_AS(bad.set(2, 1, Scalar::one(q())), domain_error);
}

TEST_CASE("conjugation matches stepwise sandwich oracle") {
    Rng rng(601);
    for (int trial = 0; trial < 40; ++trial) {
        const int r = static_cast<int>(rng.int_in(2, 7));
        const UTMatrix a = random_ut(rng, q(), r);
        const InvTriMatrix b = random_invtri(rng, q(), r);
        const UTMatrix conj = conjugate(b, a);
        CHECK(conj == sandwich(b.inverse(), a, b));
        // conjugation preserves the center as a subspace (it can rescale)
        CHECK(in_center(conjugate(b, unit(q(), r, 1, r))));
    }
}

TEST_CASE("diagonal conjugates of the superdiagonal") {
    Rng rng(701);
    for (int trial = 0; trial < 50; ++trial) {
        const int r = static_cast<int>(rng.int_in(2, 8));
        const std::vector<Scalar> d = random_nonzero_diagonal(rng, q(), r);
        const UTMatrix s1 = s1_element(q(), r, d);
        UTMatrix expected(q(), r);
        for (int i = 1; i < r; ++i) {
            expected.set(i, i + 1,
                         d[static_cast<std::size_t>(i)] / d[static_cast<std::size_t>(i - 1)]);
        }
        CHECK(s1 == expected);
        CHECK(is_s1_shaped(s1));
    }
    CHECK(s1_element(q(), 4, {Scalar::one(q()), Scalar::one(q()), Scalar::one(q()),
                              Scalar::one(q())}) == j_matrix(q(), 4));
    CHECK_THROWS_AS(s1_element(q(), 4, {Scalar::one(q()), Scalar::zero(q()), Scalar::one(q()),
                                        Scalar::one(q())}),
                    domain_error);
}

TEST_CASE("transvection conjugates of the superdiagonal") {
    for (int r = 4; r <= 8; ++r) {
        for (int i = 1; i < r; ++i) {
            for (int j = i + 1; j <= r; ++j) {
                const UTMatrix s2 = s2_element(q(), r, i, j);
                UTMatrix expected = j_matrix(q(), r);
                if (j + 1 <= r) {
                    expected.set(i, j + 1, expected.get(i, j + 1) + Scalar::one(q()));
                }
                if (i - 1 >= 1) {
                    expected.set(i - 1, j, expected.get(i - 1, j) - Scalar::one(q()));
                }
                CHECK(s2 == expected);
            }
        }
    }
    CHECK(to_term_string(s2_element(q(), 4, 2, 3)) ==
          "1*e(1,2) + -1*e(1,3) + 1*e(2,3) + 1*e(2,4) + 1*e(3,4)");
    CHECK_THROWS_AS(s2_element(q(), 4, 2, 2), domain_error);
}

TEST_CASE("coordinate round-trip") {
    Rng rng(809);
    for (int trial = 0; trial < 40; ++trial) {
        const int r = static_cast<int>(rng.int_in(2, 8));
        const UTMatrix a = random_ut(rng, q(), r);
        const std::vector<Scalar> coords = a.to_coords();
        REQUIRE(coords.size() == strict_upper_slot_count(r));
        CHECK(UTMatrix::from_coords(q(), r, coords) == a);
        for (std::size_t k = 0; k < coords.size(); ++k) {
            const auto [i, j] = slot_of(r, k);
            CHECK(coords[k] == a.get(i, j));
        }
    }
}
