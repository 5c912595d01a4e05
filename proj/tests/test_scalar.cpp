#include <random>

#include "doctest.h"
#include "ergokit/error.hpp"
#include "helpers.hpp"

using namespace th;

namespace {

Scalar random_scalar(std::mt19937& rng, bool quad) {
    std::uniform_int_distribution<long> num(-20, 20), den(1, 9);
    mpq_class a(num(rng), den(rng)), b(quad ? num(rng) : 0, den(rng));
    return Scalar(a, b);
}

}  // namespace

TEST_CASE("rational arithmetic and parsing") {
    CHECK((q("1/2") + q("1/3")).str() == "5/6");
    CHECK(q("4/6").str() == "2/3");
    CHECK(q("-3").str() == "-3");
    CHECK_THROWS_AS(q("1/0"), Error);
    CHECK_THROWS_AS(q("1.5"), Error);
    CHECK_THROWS_AS(q("1") / q("0"), Error);
}

TEST_CASE("quadratic arithmetic") {
    Field f(2);
    Scalar r2 = Scalar::root();
    CHECK((Scalar(1) + r2) * (Scalar(-1) + r2) == Scalar(1));
    CHECK(q("1/2-3/4*rt(2)").str() == "1/2-3/4*rt(2)");
    CHECK(q("1/3*rt(2)").str() == "0+1/3*rt(2)");
    CHECK_THROWS_AS(q("1+1*rt(3)"), Error);
}

TEST_CASE("division rationalizes the denominator") {
    Field f(5);
    Scalar x = Scalar(1) / (Scalar(1) + Scalar::root());
    CHECK(x.str() == "-1/4+1/4*rt(5)");
    // expand (-1/4 + 1/4 s)(1 + s) with s^2 = 5 by hand: -1/4 - s/4 + s/4 + 5/4
    mpq_class a(-1, 4), b(1, 4);
    CHECK(a + b * 5 == 1);
    CHECK(a + b == 0);
}

TEST_CASE("comparison") {
    Field f(5);
    CHECK(q("1/2") == q("1/2"));
    CHECK(q("1") < q("0+1/2*rt(5)"));   // 4 < 5
    CHECK(q("3-1*rt(5)") < q("1"));     // 5 > 4
    CHECK(q("-1/2+1/2*rt(5)").floor() == 0);
    CHECK(q("0+1*rt(5)").floor() == 2);
    CHECK(q("0-1*rt(5)").floor() == -3);
    CHECK(q("0-1*rt(5)").ceil() == -2);
}

TEST_CASE("field axioms and order on random triples") {
    std::mt19937 rng(7);
    for (long d : {0L, 2L, 5L}) {
        Field f(d);
        for (int i = 0; i < 200; ++i) {
            Scalar x = random_scalar(rng, d != 0), y = random_scalar(rng, d != 0), z = random_scalar(rng, d != 0);
            CHECK((x + y) + z == x + (y + z));
            CHECK((x * y) * z == x * (y * z));
            CHECK(x * (y + z) == x * y + x * z);
            if (!y.is_zero()) CHECK((x / y) * y == x);
            if (x < y) CHECK(x + z < y + z);
            if (x < y && y < z) CHECK(x < z);
            CHECK(((x <=> y) == 0) == (x == y));
            CHECK(Scalar(x.floor()) <= x);
            CHECK(x < Scalar(mpz_class(x.floor() + 1)));
            if (d == 0) CHECK(x.is_rational());
            CHECK(Scalar::parse(x.str()) == x);
        }
    }
}
