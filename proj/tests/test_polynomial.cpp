#include <catch2/catch_amalgamated.hpp>

#include "starq/polynomial.hpp"
#include "starq/rng.hpp"

using namespace starq;

namespace {
Polynomial P(const std::string& s, unsigned dim) { return parse_polynomial(s, dim); }
}  // namespace

TEST_CASE("gaussian rational field arithmetic") {
    GaussianRational i = GaussianRational::i();
    CHECK(i * i == GaussianRational(-1));
    GaussianRational a(Rational(3, 2), Rational(-1));
    CHECK(a * a.inverse() == GaussianRational(1));
    CHECK((a + (-a)).is_zero());
    CHECK(a.str() == "(3/2,-1)");
    CHECK(GaussianRational(Rational(7, 3)).str() == "7/3");
}

TEST_CASE("poly_add examples") {
    CHECK(poly_add(P("x", 2), P("-x", 2)).is_zero());
    CHECK(poly_add(P("x*y", 2), P("x*y", 2)) == P("2*x*y", 2));
    CHECK(poly_add(P("x^2 + (0,1)", 3), P("y", 3)) == P("x^2 + y + (0,1)", 3));
}

TEST_CASE("poly_mul examples") {
    CHECK(poly_mul(P("x", 2), P("y", 2)) == P("x*y", 2));
    CHECK(poly_mul(P("x+1", 1), P("x-1", 1)) == P("x^2-1", 1));
    CHECK(poly_mul(P("(0,1)", 1), P("(0,1)", 1)) == P("-1", 1));
}

TEST_CASE("partial examples") {
    CHECK(partial(P("x^2*y", 2), 0) == P("2*x*y", 2));
    CHECK(partial(P("x", 2), 1).is_zero());
    CHECK(partial(P("x + y^2", 2), 0) == P("1", 2));
    CHECK_THROWS_AS(partial(P("x", 2), 5), std::out_of_range);
}

TEST_CASE("dimension mismatch is rejected") {
    CHECK_THROWS_AS(poly_add(P("x", 2), P("x", 3)), std::invalid_argument);
    CHECK_THROWS_AS(poly_mul(P("x", 2), P("x", 3)), std::invalid_argument);
}

TEST_CASE("ring axioms on random triples") {
    Rng rng(2024);
    for (int rep = 0; rep < 40; ++rep) {
        Polynomial p = rng.polynomial(3, 4, 4, true);
        Polynomial q = rng.polynomial(3, 4, 4, true);
        Polynomial r = rng.polynomial(3, 4, 4, true);
        CHECK(p + q == q + p);
        CHECK(p * q == q * p);
        CHECK((p * q) * r == p * (q * r));
        CHECK(p * (q + r) == p * q + p * r);
    }
}

TEST_CASE("Leibniz rule on random pairs") {
    Rng rng(99);
    for (int rep = 0; rep < 40; ++rep) {
        Polynomial p = rng.polynomial(3, 4);
        Polynomial q = rng.polynomial(3, 4);
        for (unsigned i = 0; i < 3; ++i) {
            CHECK(partial(p * q, i) == partial(p, i) * q + p * partial(q, i));
        }
    }
}

TEST_CASE("partials commute") {
    Rng rng(7);
    for (int rep = 0; rep < 20; ++rep) {
        Polynomial p = rng.polynomial(4, 5, 6, true);
        for (unsigned i = 0; i < 4; ++i)
            for (unsigned j = i + 1; j < 4; ++j) CHECK(partial(partial(p, i), j) == partial(partial(p, j), i));
    }
}

TEST_CASE("printing round-trips through the parser") {
    Rng rng(5150);
    for (int rep = 0; rep < 60; ++rep) {
        Polynomial p = rng.polynomial(3, 4, 5, rep % 2 == 0);
        CHECK(parse_polynomial(p.str(), 3) == p);
    }
    CHECK(P("3/2*x1^2*x2 + (0,1)*x3", 3).str() == "3/2*x1^2*x2 + (0,1)*x3");
}

TEST_CASE("parser reports positioned errors") {
    try {
        parse_polynomial("x + ", 2);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.column == 5);
    }
    CHECK_THROWS_AS(parse_polynomial("q + 1", 2), ParseError);
    CHECK_THROWS_AS(parse_polynomial("x5", 2), ParseError);
}
