#include <catch2/catch_amalgamated.hpp>

#include "starq/diffop.hpp"
#include "starq/rng.hpp"
#include "starq/series.hpp"

using namespace starq;

namespace {
using PSeries = TruncatedSeries<Polynomial>;

Polynomial P(const std::string& s, unsigned dim) { return parse_polynomial(s, dim); }

PSeries mk(unsigned order, unsigned dim, std::vector<std::string> cs) {
    PSeries s(order, Polynomial(dim));
    for (unsigned k = 0; k < cs.size(); ++k) s[k] = P(cs[k], dim);
    return s;
}

PSeries pmul(const PSeries& a, const PSeries& b) {
    return series_mul(a, b, [](const Polynomial& x, const Polynomial& y) { return x * y; },
                      Polynomial(a[0].dim()));
}
}  // namespace

TEST_CASE("series_mul examples") {
    // (1 + λx)(1 − λx) = 1 mod λ² at N=1
    CHECK(pmul(mk(1, 1, {"1", "x"}), mk(1, 1, {"1", "-x"})) == mk(1, 1, {"1", "0"}));
    // (x)(y) = xy at any N
    CHECK(pmul(mk(3, 2, {"x"}), mk(3, 2, {"y"})) == mk(3, 2, {"x*y"}));
    // (1 + λ)(1 + λ) = 1 + 2λ + λ² at N=2
    CHECK(pmul(mk(2, 1, {"1", "1"}), mk(2, 1, {"1", "1"})) == mk(2, 1, {"1", "2", "1"}));
    CHECK_THROWS_AS(pmul(mk(1, 1, {"1"}), mk(2, 1, {"1"})), std::invalid_argument);
}

TEST_CASE("series_mul associativity on random triples") {
    Rng rng(31337);
    for (int rep = 0; rep < 25; ++rep) {
        PSeries a(2, Polynomial(2)), b(2, Polynomial(2)), c(2, Polynomial(2));
        for (unsigned k = 0; k <= 2; ++k) {
            a[k] = rng.polynomial(2, 3);
            b[k] = rng.polynomial(2, 3);
            c[k] = rng.polynomial(2, 3);
        }
        CHECK(pmul(pmul(a, b), c) == pmul(a, pmul(b, c)));
    }
}

TEST_CASE("series print format") {
    PSeries s = mk(2, 2, {"x", "y", "1"});
    CHECK(s.str([](const Polynomial& p) { return p.str(); }) == "x1 + \xce\xbb*(x2) + \xce\xbb^2*(1)");
}

namespace {
EquivalenceTransform id_plus_dx(unsigned order) {
    EquivalenceTransform t(1, order);
    t.set(1, LinDiffOp::derivative(1, Monomial{1}, Polynomial::one(1)));
    return t;
}
}  // namespace

TEST_CASE("invert_transform examples") {
    // T = id -> T^{-1} = id
    EquivalenceTransform id = EquivalenceTransform::identity(1, 2);
    CHECK(id.inverse() == id);

    // T = id + λ∂x at N=1 -> T^{-1} = id − λ∂x
    EquivalenceTransform t1 = id_plus_dx(1);
    EquivalenceTransform s1 = t1.inverse();
    CHECK(s1.at(1) == -t1.at(1));

    // T = id + λ∂x at N=2 -> T^{-1} = id − λ∂x + λ²∂x²; verified by
    // composing back to the identity mod λ³.
    EquivalenceTransform t2 = id_plus_dx(2);
    EquivalenceTransform s2 = t2.inverse();
    Monomial ddx{2};
    CHECK(s2.at(1) == -t2.at(1));
    CHECK(s2.at(2) == LinDiffOp::derivative(1, ddx, Polynomial::one(1)));
    CHECK(t2.compose(s2) == EquivalenceTransform::identity(1, 2));
    CHECK(s2.compose(t2) == EquivalenceTransform::identity(1, 2));
}

TEST_CASE("inverse composes to identity on random inputs") {
    Rng rng(77);
    for (int rep = 0; rep < 10; ++rep) {
        EquivalenceTransform t(2, 3);
        for (unsigned r = 1; r <= 3; ++r) {
            LinDiffOp op(2);
            for (int term = 0; term < 2; ++term) {
                Monomial m(2);
                unsigned deg = 1 + static_cast<unsigned>(rng.below(2));
                for (unsigned k = 0; k < deg; ++k) ++m.e[rng.below(2)];
                op.add_term(m, rng.polynomial(2, 2, 2));
            }
            t.set(r, op);
        }
        EquivalenceTransform s = t.inverse();
        CHECK(t.compose(s) == EquivalenceTransform::identity(2, 3));
        CHECK(s.compose(t) == EquivalenceTransform::identity(2, 3));
        for (int rep2 = 0; rep2 < 3; ++rep2) {
            TruncatedSeries<Polynomial> f(3, Polynomial(2));
            for (unsigned k = 0; k <= 3; ++k) f[k] = rng.polynomial(2, 3);
            CHECK(t.apply(s.apply(f)) == f);
            CHECK(s.apply(t.apply(f)) == f);
        }
    }
}

TEST_CASE("diff op composition matches pointwise application") {
    Rng rng(11);
    for (int rep = 0; rep < 20; ++rep) {
        LinDiffOp a(2), b(2);
        for (int term = 0; term < 2; ++term) {
            Monomial m(2), n(2);
            for (unsigned k = 0; k < rng.below(3); ++k) ++m.e[rng.below(2)];
            for (unsigned k = 0; k < rng.below(3); ++k) ++n.e[rng.below(2)];
            a.add_term(m, rng.polynomial(2, 2, 2));
            b.add_term(n, rng.polynomial(2, 2, 2));
        }
        Polynomial f = rng.polynomial(2, 4);
        CHECK(a.compose(b).apply(f) == a.apply(b.apply(f)));
    }
}
