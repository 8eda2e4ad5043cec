#pragma once

#include "starq/diffop.hpp"
#include "starq/multivector.hpp"

namespace starq {

namespace detail {
/// Lambda-graded composition of operator lists indexed 1..N (order 0 = 0).
inline std::vector<LinDiffOp> graded_compose(const std::vector<LinDiffOp>& a,
                                             const std::vector<LinDiffOp>& b, unsigned dim) {
    unsigned n = static_cast<unsigned>(a.size());
    std::vector<LinDiffOp> out(n, LinDiffOp(dim));
    for (unsigned k = 1; k <= n; ++k)
        for (unsigned r = 1; r < k; ++r) out[k - 1] += a[r - 1].compose(b[k - r - 1]);
    return out;
}
}  // namespace detail

/// log(T) of a formal transformation, as the list of operators at
/// lambda^1..lambda^N.
inline std::vector<LinDiffOp> transform_log(const EquivalenceTransform& t) {
    unsigned n = t.order(), dim = t.dim();
    std::vector<LinDiffOp> u(n, LinDiffOp(dim));
    for (unsigned r = 1; r <= n; ++r) u[r - 1] = t.at(r);
    std::vector<LinDiffOp> power = u, out = u;
    for (unsigned k = 2; k <= n; ++k) {
        power = detail::graded_compose(power, u, dim);
        GaussianRational c(Rational(k % 2 == 0 ? -1 : 1, k));
        for (unsigned r = 1; r <= n; ++r) out[r - 1] += power[r - 1].scaled(c);
    }
    return out;
}

/// exp of derivation generators X_1..X_N (given as vector fields) as an
/// EquivalenceTransform: id + sum_r (L_X)_r lambda^r + higher compositions.
inline EquivalenceTransform exp_derivation_transform(const std::vector<Multivector>& gens,
                                                     unsigned order) {
    if (gens.empty()) throw std::invalid_argument("exp_derivation_transform: no generators");
    unsigned dim = gens[0].dim();
    std::vector<LinDiffOp> d(order, LinDiffOp(dim));
    for (unsigned r = 1; r <= order && r <= gens.size(); ++r) {
        const Multivector& x = gens[r - 1];
        if (x.degree() != 1) throw std::invalid_argument("exp_derivation_transform: generator is not a vector field");
        LinDiffOp op(dim);
        for (unsigned i = 0; i < dim; ++i) {
            Monomial m(dim);
            m.e[i] = 1;
            op.add_term(m, x.component({i}));
        }
        d[r - 1] = op;
    }
    EquivalenceTransform t(dim, order);
    std::vector<LinDiffOp> power = d;
    Rational fact(1);
    for (unsigned r = 1; r <= order; ++r) t.set(r, d[r - 1]);
    for (unsigned k = 2; k <= order; ++k) {
        power = detail::graded_compose(power, d, dim);
        fact *= k;
        for (unsigned r = k; r <= order; ++r)
            t.set(r, t.at(r) + power[r - 1].scaled(GaussianRational(Rational(1) / fact)));
    }
    return t;
}

/// Gauge action of the derivation-generated group on formal Poisson
/// structures: pi' (df, dg) = T^{-1}( pi_l(d(Tf), d(Tg)) ).  Computed as the
/// graded pushforward exp(-L_{X_l}) pi_l for the generator field
/// X_l = sum X_r lambda^r with L_{X_l} = log T.  Rejects transforms whose
/// logarithm has non-derivation coefficients.
inline FormalPoisson gauge_formal_poisson(const EquivalenceTransform& t, const FormalPoisson& pl) {
    if (t.dim() != pl.dim()) throw std::invalid_argument("gauge_formal_poisson: dimension mismatch");
    unsigned n = pl.order(), dim = pl.dim();
    if (t.order() != n) throw std::invalid_argument("gauge_formal_poisson: order mismatch");
    std::vector<LinDiffOp> logs = transform_log(t);
    std::vector<Multivector> gen;
    for (unsigned r = 1; r <= n; ++r) {
        const LinDiffOp& op = logs[r - 1];
        if (!op.is_derivation())
            throw std::invalid_argument("gauge_formal_poisson: transform is not derivation-generated");
        Multivector x(dim, 1);
        for (const auto& [m, c] : op.terms()) {
            for (unsigned i = 0; i < dim; ++i)
                if (m.e[i] == 1) x.add_component({i}, c);
        }
        gen.push_back(std::move(x));
    }

    auto ad = [&](const TruncatedSeries<Multivector>& a) {
        TruncatedSeries<Multivector> out(n, Multivector(dim, 2));
        for (unsigned k = 1; k <= n; ++k)
            for (unsigned r = 1; r <= k; ++r) out[k] += schouten(gen[r - 1], a[k - r]);
        return out;
    };

    TruncatedSeries<Multivector> acc = pl.coeffs, term = pl.coeffs;
    Rational fact(1);
    for (unsigned m = 1; m <= n; ++m) {
        term = ad(term);
        fact *= m;
        GaussianRational c(Rational(m % 2 == 0 ? 1 : -1) / fact);
        for (unsigned k = 0; k <= n; ++k) acc[k] += term[k].scaled(c);
    }
    return FormalPoisson(acc);
}

}  // namespace starq
