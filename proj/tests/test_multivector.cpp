#include <catch2/catch_amalgamated.hpp>

#include "starq/formal_gauge.hpp"
#include "starq/forms.hpp"
#include "starq/multivector.hpp"
#include "starq/rng.hpp"

using namespace starq;

namespace {
Polynomial P(const std::string& s, unsigned dim) { return parse_polynomial(s, dim); }

Multivector biv(unsigned d, unsigned i, unsigned j, const std::string& c) {
    return Multivector::basis(d, {i, j}, P(c, d));
}

Multivector su2_pi() { return biv(3, 0, 1, "z") + biv(3, 1, 2, "x") + biv(3, 2, 0, "y"); }

Multivector random_mv(Rng& rng, unsigned dim, unsigned deg, unsigned maxdeg = 2) {
    Multivector m(dim, deg);
    for (int t = 0; t < 3; ++t) {
        IndexTuple idx;
        for (unsigned k = 0; k < deg; ++k) idx.push_back(static_cast<unsigned>(rng.below(dim)));
        m.add_component(idx, rng.polynomial(dim, maxdeg, 2));
    }
    return m;
}

std::vector<Polynomial> grad(const Polynomial& f) {
    std::vector<Polynomial> df(f.dim(), Polynomial(f.dim()));
    for (unsigned i = 0; i < f.dim(); ++i) df[i] = f.partial(i);
    return df;
}

int sgn(int e) { return e % 2 == 0 ? 1 : -1; }
}  // namespace

TEST_CASE("schouten examples") {
    // constant pi on R^2 is Poisson
    Multivector pc = biv(2, 0, 1, "1");
    CHECK(schouten(pc, pc).is_zero());
    // the linear su(2) bivector is Poisson (expanded coordinate formula)
    CHECK(schouten(su2_pi(), su2_pi()).is_zero());
    // anchor on functions: [d/dx, x^2] = 2x
    Multivector X = Multivector::basis(2, {0}, P("1", 2));
    CHECK(schouten(X, Multivector::function(P("x^2", 2))) == Multivector::function(P("2*x", 2)));
    CHECK_THROWS_AS(schouten(pc, su2_pi()), std::invalid_argument);
}

TEST_CASE("jacobiator oracle fixes the bracket normalization") {
    // Independent oracle: the Jacobi defect of {f,g} = pi(df,dg), computed by
    // direct nesting, must equal +1/2 [pi,pi](df,dg,dh).  The constant is
    // frozen here; a sign change in the bracket implementation would flip it.
    Multivector bad = biv(3, 0, 1, "z") + biv(3, 0, 2, "x");  // not Poisson
    Multivector br = schouten(bad, bad);
    REQUIRE(!br.is_zero());
    CHECK(br == Multivector::basis(3, {0, 1, 2}, P("2*z", 3)));
    Rng rng(1);
    for (int rep = 0; rep < 10; ++rep) {
        Polynomial f = rng.polynomial(3, 2), g = rng.polynomial(3, 2), h = rng.polynomial(3, 2);
        auto pb = [&](const Polynomial& a, const Polynomial& b) { return poisson_bracket(bad, a, b); };
        Polynomial jac = pb(f, pb(g, h)) + pb(g, pb(h, f)) + pb(h, pb(f, g));
        Polynomial half = br.evaluate({grad(f), grad(g), grad(h)}).scaled(GaussianRational(Rational(1, 2)));
        CHECK(jac == half);
    }
    // consistency on the Poisson side: both sides vanish for su(2)
    Multivector good = su2_pi();
    Polynomial f = P("x*y", 3), g = P("z^2", 3), h = P("x+z", 3);
    auto pb = [&](const Polynomial& a, const Polynomial& b) { return poisson_bracket(good, a, b); };
    CHECK((pb(f, pb(g, h)) + pb(g, pb(h, f)) + pb(h, pb(f, g))).is_zero());
}

TEST_CASE("graded antisymmetry, Jacobi and Leibniz") {
    Rng rng(7);
    std::vector<std::array<unsigned, 3>> degree_triples = {{1, 1, 1}, {1, 1, 2}, {2, 2, 1}};
    for (int rep = 0; rep < 15; ++rep) {
        for (auto [da, db, dc] : degree_triples) {
            Multivector A = random_mv(rng, 3, da), B = random_mv(rng, 3, db), C = random_mv(rng, 3, dc);
            int a = static_cast<int>(da), b = static_cast<int>(db), c = static_cast<int>(dc);

            CHECK(schouten(A, B) == schouten(B, A).scaled(GaussianRational(-sgn((a - 1) * (b - 1)))));

            Multivector j1 = schouten(A, schouten(B, C)).scaled(GaussianRational(sgn((a - 1) * (c - 1))));
            Multivector j2 = schouten(B, schouten(C, A)).scaled(GaussianRational(sgn((b - 1) * (a - 1))));
            Multivector j3 = schouten(C, schouten(A, B)).scaled(GaussianRational(sgn((c - 1) * (b - 1))));
            CHECK((j1 + j2 + j3).is_zero());

            Multivector lhs = schouten(A, B ^ C);
            Multivector rhs = (schouten(A, B) ^ C) + (B ^ schouten(A, C)).scaled(GaussianRational(sgn((a - 1) * b)));
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("d_pi examples") {
    Multivector pc = biv(2, 0, 1, "1");
    // d_pi f is the hamiltonian-type field of f, and d_pi^2 = 0
    Multivector df = d_pi(pc, Multivector::function(P("x", 2)));
    CHECK(df == hamiltonian(pc, P("x", 2)));
    CHECK(d_pi(pc, df).is_zero());
    // constant vector field against constant pi
    CHECK(d_pi(pc, Multivector::basis(2, {1}, P("1", 2))).is_zero());
    // d_pi pi = 0
    CHECK(d_pi(su2_pi(), su2_pi()).is_zero());
    // rejects non-Poisson input
    Multivector bad = biv(3, 0, 1, "z") + biv(3, 0, 2, "x");
    CHECK_THROWS_AS(d_pi(bad, bad), std::invalid_argument);
}

TEST_CASE("d_pi squared vanishes on random multivectors") {
    Rng rng(4242);
    for (const Multivector& pi : {biv(2, 0, 1, "1"), su2_pi()}) {
        for (int rep = 0; rep < 20; ++rep) {
            for (unsigned deg : {0u, 1u, 2u}) {
                Multivector A = deg == 0 ? Multivector::function(rng.polynomial(pi.dim(), 2))
                                         : random_mv(rng, pi.dim(), deg);
                CHECK(d_pi(pi, d_pi(pi, A)).is_zero());
            }
        }
    }
}

TEST_CASE("hamiltonian examples") {
    Multivector pc = biv(2, 0, 1, "1");
    // X_f = pi(., df): components X^i = pi(dx_i, df), checked via evaluation
    Multivector xf = hamiltonian(pc, P("x", 2));
    for (unsigned i = 0; i < 2; ++i) {
        std::vector<Polynomial> dxi(2, Polynomial(2));
        dxi[i] = Polynomial::one(2);
        CHECK(xf.component({i}) == pc.evaluate({dxi, grad(P("x", 2))}));
    }
    CHECK(xf.component({1}) == P("-1", 2));  // X_x(y) = pi(dy,dx) = -1
    CHECK(hamiltonian(pc, P("5", 2)).is_zero());
    // su(2), f = z: expand components of pi(., dz)
    Multivector xz = hamiltonian(su2_pi(), P("z", 3));
    CHECK(xz == Multivector::basis(3, {0}, P("-y", 3)) + Multivector::basis(3, {1}, P("x", 3)));
}

TEST_CASE("koszul examples") {
    Multivector pi = su2_pi();
    OneForm df = OneForm::d(P("x*y + z", 3));
    CHECK(koszul(pi, df, df).is_zero());

    // constant pi, alpha = dx, beta = dy: all three terms computed
    // independently via the component formula for the Lie derivative
    Multivector pc = biv(2, 0, 1, "1");
    OneForm dx = OneForm::dx(2, 0), dy = OneForm::dx(2, 1);
    auto lie_1form = [](const Multivector& x, const OneForm& b) {
        unsigned d = b.dim();
        OneForm out(d);
        for (unsigned i = 0; i < d; ++i)
            for (unsigned j = 0; j < d; ++j)
                out.comps[i] += x.component({j}) * b.comps[i].partial(j) + b.comps[j] * x.component({j}).partial(i);
        return out;
    };
    OneForm expected = OneForm(2) - lie_1form(pi_tilde(pc, dx), dy) + lie_1form(pi_tilde(pc, dy), dx);
    Polynomial pab = pairing(pc, dx, dy);
    for (unsigned i = 0; i < 2; ++i) expected.comps[i] -= pab.partial(i);
    CHECK(koszul(pc, dx, dy) == expected);
    CHECK(koszul(pc, dx, dy).is_zero());

    // -pi~ is a Lie algebra homomorphism on random polynomial one-forms
    Rng rng(15);
    for (int rep = 0; rep < 10; ++rep) {
        OneForm a(3), b(3);
        for (unsigned i = 0; i < 3; ++i) {
            a.comps[i] = rng.polynomial(3, 2, 2);
            b.comps[i] = rng.polynomial(3, 2, 2);
        }
        Multivector lhs = -pi_tilde(pi, koszul(pi, a, b));
        Multivector rhs = schouten(-pi_tilde(pi, a), -pi_tilde(pi, b));
        CHECK(lhs == rhs);
    }
}

TEST_CASE("koszul bracket of exact forms and Jacobi identity") {
    Rng rng(88);
    Multivector pi = su2_pi();
    for (int rep = 0; rep < 10; ++rep) {
        Polynomial f = rng.polynomial(3, 3), g = rng.polynomial(3, 3);
        CHECK(koszul(pi, OneForm::d(f), OneForm::d(g)) == OneForm::d(poisson_bracket(pi, f, g)));
    }
    for (int rep = 0; rep < 8; ++rep) {
        OneForm a = OneForm::d(rng.polynomial(3, 2)), b = OneForm::d(rng.polynomial(3, 2)),
                c = OneForm::d(rng.polynomial(3, 2));
        OneForm jac = koszul(pi, a, koszul(pi, b, c)) + koszul(pi, b, koszul(pi, c, a)) +
                      koszul(pi, c, koszul(pi, a, b));
        CHECK(jac.is_zero());
    }
}

TEST_CASE("pi* sends closed 2-forms to d_pi-closed bivectors") {
    Multivector pi4 = biv(4, 0, 1, "1") + biv(4, 2, 3, "1");
    Rng rng(21);
    for (int rep = 0; rep < 8; ++rep) {
        DiffForm omega(4, 1);
        for (unsigned i = 0; i < 4; ++i) omega.add_component({i}, rng.polynomial(4, 3, 2));
        DiffForm closed = exterior_d(omega);
        CHECK(exterior_d(closed).is_zero());
        Multivector img = pi_star_form(pi4, closed);
        CHECK(schouten(pi4, img).is_zero());
    }
}

TEST_CASE("check_formal_poisson examples") {
    // constant pi alone
    {
        FormalPoisson pl(2, 2);
        pl.coeffs[0] = biv(2, 0, 1, "1");
        auto rep = check_formal_poisson(pl);
        CHECK(rep.integrable);
        CHECK(rep.first_order_closed);
        CHECK(rep.failing_orders().empty());
    }
    // pi + lambda pi1, both constant on R^4
    {
        FormalPoisson pl(4, 2);
        pl.coeffs[0] = biv(4, 0, 1, "1");
        pl.coeffs[1] = biv(4, 2, 3, "1");
        CHECK(check_formal_poisson(pl).integrable);
    }
    // explicit failing pi1: d_pi pi1 != 0 shows up as the order-1 defect
    {
        Multivector pi = biv(3, 0, 1, "1");
        Multivector pi1 = biv(3, 0, 2, "x");
        REQUIRE(!schouten(pi, pi1).is_zero());
        FormalPoisson pl(3, 2);
        pl.coeffs[0] = pi;
        pl.coeffs[1] = pi1;
        auto rep = check_formal_poisson(pl);
        CHECK(!rep.integrable);
        CHECK(!rep.first_order_closed);
        REQUIRE(rep.failing_orders().size() >= 1);
        CHECK(rep.failing_orders()[0] == 1);
        // the defect is 2[pi, pi1], cross-checked against schouten directly
        CHECK(rep.defects[1] == schouten(pi, pi1).scaled(GaussianRational(2)));
    }
}

TEST_CASE("gauge_formal_poisson examples") {
    unsigned d = 2;
    Multivector pi = biv(2, 0, 1, "1");
    FormalPoisson pl(d, 2);
    pl.coeffs[0] = pi;

    // T = id acts trivially
    CHECK(gauge_formal_poisson(EquivalenceTransform::identity(d, 2), pl).coeffs == pl.coeffs);

    // T = exp(lambda L_X) with X = x d/dx: pi1 shifts by -d_pi X
    Multivector X = Multivector::basis(d, {0}, P("x", d));
    EquivalenceTransform t = exp_derivation_transform({X}, 2);
    FormalPoisson out = gauge_formal_poisson(t, pl);
    CHECK(out.coeffs[0] == pi);
    CHECK(out.coeffs[1] == pl.coeffs[1] - d_pi(pi, X));
    CHECK(check_formal_poisson(out).integrable);

    // gauges compose: gauge(T2, gauge(T1, pl)) = gauge(T1 ∘ T2, pl)
    // (operator composition acts on the function slot)
    Multivector Y = Multivector::basis(d, {1}, P("x*y", d));
    EquivalenceTransform t2 = exp_derivation_transform({Y}, 2);
    FormalPoisson lhs = gauge_formal_poisson(t2, gauge_formal_poisson(t, pl));
    FormalPoisson rhs = gauge_formal_poisson(t.compose(t2), pl);
    CHECK(lhs.coeffs == rhs.coeffs);

    // non-derivation input is rejected
    EquivalenceTransform badt(d, 2);
    badt.set(1, LinDiffOp::derivative(d, Monomial{2, 0}, Polynomial::one(d)));
    CHECK_THROWS_AS(gauge_formal_poisson(badt, pl), std::invalid_argument);
}

TEST_CASE("lemma-level gauge shift on both scenario Poisson structures") {
    Rng rng(2718);
    for (const Multivector& pi : {biv(2, 0, 1, "1"), su2_pi()}) {
        unsigned d = pi.dim();
        for (int rep = 0; rep < 5; ++rep) {
            Multivector X = random_mv(rng, d, 1, 2);
            FormalPoisson pl(d, 2);
            pl.coeffs[0] = pi;
            FormalPoisson out = gauge_formal_poisson(exp_derivation_transform({X}, 2), pl);
            CHECK(out.coeffs[1] == -d_pi(pi, X));
        }
    }
}
