#pragma once

#include <optional>

#include "starq/bidiff.hpp"
#include "starq/linalg.hpp"
#include "starq/multivector.hpp"
#include "starq/series.hpp"

namespace starq {

/// Star product truncated at order N: bidifferential operators C_0..C_N with
/// C_0 the pointwise product, plus the bivector its commutator is claimed to
/// induce at first order.
class StarProduct {
  public:
    StarProduct(std::vector<BidiffOp> ops, Multivector claimed_pi)
        : ops_(std::move(ops)), pi_(std::move(claimed_pi)) {
        if (ops_.empty()) throw std::invalid_argument("StarProduct: no operators");
    }

    unsigned dim() const { return pi_.dim(); }
    unsigned order() const { return static_cast<unsigned>(ops_.size()) - 1; }
    const BidiffOp& op(unsigned r) const { return ops_.at(r); }
    const std::vector<BidiffOp>& ops() const { return ops_; }
    const Multivector& claimed_pi() const { return pi_; }

    /// f * g on truncated series, extended lambda-bilinearly.
    TruncatedSeries<Polynomial> mul(const TruncatedSeries<Polynomial>& f,
                                    const TruncatedSeries<Polynomial>& g) const {
        if (f.order() != order() || g.order() != order())
            throw std::invalid_argument("StarProduct::mul: order mismatch");
        TruncatedSeries<Polynomial> out(order(), Polynomial(dim()));
        for (unsigned k = 0; k <= order(); ++k)
            for (unsigned r = 0; r <= k; ++r)
                for (unsigned p = 0; p + r <= k; ++p) out[k] += ops_[r].apply(f[p], g[k - r - p]);
        return out;
    }

    TruncatedSeries<Polynomial> mul(const Polynomial& f, const Polynomial& g) const {
        return mul(constant_series(f), constant_series(g));
    }

    TruncatedSeries<Polynomial> constant_series(const Polynomial& f) const {
        return TruncatedSeries<Polynomial>::constant(order(), f, Polynomial(dim()));
    }

    /// 1 * f = f * 1 = f at the operator level: C_r(1,.) = C_r(.,1) = 0 for
    /// r >= 1.
    bool unit_ok() const {
        for (unsigned r = 1; r <= order(); ++r)
            if (!ops_[r].unit_slice_left().is_zero() || !ops_[r].unit_slice_right().is_zero()) return false;
        return true;
    }

    friend bool operator==(const StarProduct& a, const StarProduct& b) {
        return a.ops_ == b.ops_ && a.pi_ == b.pi_;
    }

  private:
    std::vector<BidiffOp> ops_;
    Multivector pi_;
};

/// Associativity defect, one tridifferential operator per lambda order:
/// D_k = sum_{r+s=k} [ C_r(C_s(f,g),h) - C_r(f,C_s(g,h)) ].  Zero operators
/// mean associativity holds identically, independent of any sampling.
inline std::vector<TridiffOp> assoc_defect(const StarProduct& s) {
    std::vector<TridiffOp> out;
    for (unsigned k = 0; k <= s.order(); ++k) {
        TridiffOp d(s.dim());
        for (unsigned r = 0; r <= k; ++r) {
            d += compose_first(s.op(r), s.op(k - r));
            d -= compose_second(s.op(r), s.op(k - r));
        }
        out.push_back(std::move(d));
    }
    return out;
}

inline bool is_associative(const StarProduct& s) {
    for (const auto& d : assoc_defect(s))
        if (!d.is_zero()) return false;
    return true;
}

/// Moyal-type quantization of a constant bivector:
/// C_r(f,g) = (1/r!) (1/2)^r pi^{i1 j1}...pi^{ir jr} d_{i1..ir} f d_{j1..jr} g.
inline StarProduct moyal(const Multivector& pi, unsigned order) {
    if (!pi.has_constant_components()) throw std::invalid_argument("moyal: bivector must be constant");
    if (!is_poisson(pi)) throw std::invalid_argument("moyal: bivector is not Poisson");
    unsigned d = pi.dim();
    std::vector<BidiffOp> ops;
    ops.push_back(BidiffOp::multiplication(d));
    // iterate r-fold contractions
    for (unsigned r = 1; r <= order; ++r) {
        BidiffOp c(d);
        Rational scale = Rational(1);
        for (unsigned j = 1; j <= r; ++j) scale /= Rational(2 * j);  // 1/r! * (1/2)^r
        std::vector<std::pair<unsigned, unsigned>> pairs(r);
        std::function<void(unsigned, GaussianRational, Monomial, Monomial)> rec =
            [&](unsigned level, GaussianRational coef, Monomial a, Monomial b) {
                if (coef.is_zero()) return;
                if (level == r) {
                    c.add_term(a, b, Polynomial::constant(d, coef * GaussianRational(scale)));
                    return;
                }
                for (unsigned i = 0; i < d; ++i)
                    for (unsigned j = 0; j < d; ++j) {
                        if (i == j) continue;
                        Polynomial pij = bivector_entry(pi, i, j);
                        if (pij.is_zero()) continue;
                        Monomial a2 = a, b2 = b;
                        ++a2.e[i];
                        ++b2.e[j];
                        rec(level + 1, coef * pij.constant_value(), a2, b2);
                    }
            };
        rec(0, GaussianRational(1), Monomial(d), Monomial(d));
        ops.push_back(std::move(c));
    }
    return StarProduct(std::move(ops), pi);
}

/// Moyal formula fed with a formal bivector pi + lambda pi_1 + ...
/// (constant coefficients), expanded lambda-linearly: the r-fold contraction
/// at lambda-weight r + (sum of coefficient weights).
inline StarProduct moyal_formal(const TruncatedSeries<Multivector>& pi_series, unsigned order) {
    unsigned d = pi_series[0].dim();
    for (unsigned k = 0; k <= pi_series.order(); ++k)
        if (!pi_series[k].has_constant_components())
            throw std::invalid_argument("moyal_formal: bivector coefficients must be constant");
    std::vector<BidiffOp> ops(order + 1, BidiffOp(d));
    ops[0] = BidiffOp::multiplication(d);
    for (unsigned r = 1; r <= order; ++r) {
        Rational scale = Rational(1);
        for (unsigned j = 1; j <= r; ++j) scale /= Rational(2 * j);
        // choose a lambda-weight w_t for each of the r factors
        std::function<void(unsigned, unsigned, GaussianRational, Monomial, Monomial)> rec =
            [&](unsigned level, unsigned weight, GaussianRational coef, Monomial a, Monomial b) {
                if (coef.is_zero() || r + weight > order) return;
                if (level == r) {
                    ops[r + weight].add_term(a, b, Polynomial::constant(d, coef * GaussianRational(scale)));
                    return;
                }
                for (unsigned w = 0; w + weight + r <= order && w <= pi_series.order(); ++w) {
                    for (unsigned i = 0; i < d; ++i)
                        for (unsigned j = 0; j < d; ++j) {
                            if (i == j) continue;
                            Polynomial pij = bivector_entry(pi_series[w], i, j);
                            if (pij.is_zero()) continue;
                            Monomial a2 = a, b2 = b;
                            ++a2.e[i];
                            ++b2.e[j];
                            rec(level + 1, weight + w, coef * pij.constant_value(), a2, b2);
                        }
                }
            };
        rec(0, 0, GaussianRational(1), Monomial(d), Monomial(d));
    }
    return StarProduct(std::move(ops), pi_series[0]);
}

/// The Poisson bivector induced by a star product:
/// (df,dg) -> C_1(f,g) - C_1(g,f), read off the operator C_1.  Fails if the
/// skew part is not first order in each slot.
inline Multivector bracket_of(const StarProduct& s) {
    unsigned d = s.dim();
    Multivector out(d, 2);
    if (s.order() < 1) return out;
    BidiffOp skew = s.op(1).skew_part();
    for (const auto& [k, c] : skew.terms()) {
        if (k.first.degree() != 1 || k.second.degree() != 1)
            throw std::domain_error("bracket_of: skew part of C_1 is not a bivector");
        unsigned i = 0, j = 0;
        for (unsigned t = 0; t < d; ++t) {
            if (k.first.e[t]) i = t;
            if (k.second.e[t]) j = t;
        }
        // each unordered pair is picked up once from its (i<j) slot; the
        // (j,i) slot carries the opposite coefficient by skewness
        if (i < j) out.add_component({i, j}, c);
    }
    return out;
}

/// Equivalence action: (T . s) with  f *' g = T^{-1}( T f * T g ).
inline StarProduct apply_equivalence(const EquivalenceTransform& t, const StarProduct& s) {
    if (t.order() != s.order()) throw std::invalid_argument("apply_equivalence: order mismatch");
    unsigned n = s.order(), d = s.dim();
    EquivalenceTransform tinv = t.inverse();
    std::vector<BidiffOp> ops(n + 1, BidiffOp(d));
    for (unsigned k = 0; k <= n; ++k) {
        for (unsigned r = 0; r <= k; ++r) {
            // S_r applied after sum_{s+p+q = k-r} C_s(T_p ., T_q .)
            BidiffOp inner(d);
            for (unsigned si = 0; si + r <= k; ++si)
                for (unsigned p = 0; si + p + r <= k; ++p) {
                    unsigned q = k - r - si - p;
                    inner += s.op(si).pre_compose(t.at(p), t.at(q));
                }
            ops[k] += inner.post_compose(tinv.at(r));
        }
    }
    return StarProduct(std::move(ops), s.claimed_pi());
}

/// The relative bivector of two star products with the same C_1:
/// (df,dg) -> (C_2 - C_2')(f,g) - (C_2 - C_2')(g,f).  d_pi-closed.
inline Multivector tau(const StarProduct& s, const StarProduct& s2) {
    if (s.op(1) != s2.op(1)) throw std::invalid_argument("tau: the two star products must share C_1");
    if (s.order() < 2 || s2.order() < 2) throw std::invalid_argument("tau: order must be at least 2");
    unsigned d = s.dim();
    BidiffOp diff = s.op(2) - s2.op(2);
    BidiffOp skew = diff.skew_part();
    Multivector out(d, 2);
    for (const auto& [k, c] : skew.terms()) {
        if (k.first.degree() != 1 || k.second.degree() != 1)
            throw std::domain_error("tau: skew part of C_2 - C_2' is not a bivector");
        unsigned i = 0, j = 0;
        for (unsigned t = 0; t < d; ++t) {
            if (k.first.e[t]) i = t;
            if (k.second.e[t]) j = t;
        }
        if (i < j) out.add_component({i, j}, c);
    }
    return out;
}

namespace detail {
/// Hochschild-type contribution of a candidate C_2 shape to the lambda^2
/// associativity defect: S(f,g)h - f S(g,h) + S(fg,h) - S(f,gh).
inline TridiffOp order2_defect_shape(const BidiffOp& s) {
    unsigned d = s.dim();
    TridiffOp out(d);
    Monomial zero(d);
    for (const auto& [k, c] : s.terms()) {
        out.add_term(k.first, k.second, zero, c);
        out.add_term(zero, k.first, k.second, -c);
        for_each_subindex(k.first, [&](const Monomial& a1, const Monomial& a2) {
            Rational b = multi_binomial(k.first, a1);
            out.add_term(a1, a2, k.second, b == 1 ? c : c.scaled(GaussianRational(b)));
        });
        for_each_subindex(k.second, [&](const Monomial& b1, const Monomial& b2) {
            Rational b = multi_binomial(k.second, b1);
            Polynomial coef = b == 1 ? c : c.scaled(GaussianRational(b));
            out.add_term(k.first, b1, b2, -coef);
        });
    }
    return out;
}
}  // namespace detail

/// Second-order star product for a polynomial Poisson bivector.
///
/// C_1 = (1/2) pi(df,dg); C_2 is an ansatz over the second-order shapes
///   S1 = pi^{ij} pi^{kl} d_{ik} ⊗ d_{jl},
///   S2 = (d_l pi^{ij}) pi^{kl} d_{ik} ⊗ d_j,
///   S3 = (d_l pi^{ij}) pi^{kl} d_i ⊗ d_{jk},
/// with rational weights solved exactly from the lambda^2 associativity
/// constraint.  Free directions are zeroed (minimal-support gauge), so the
/// result reduces termwise to the Moyal product on constant bivectors.
inline StarProduct kontsevich2(const Multivector& pi) {
    if (!is_poisson(pi)) throw std::invalid_argument("kontsevich2: bivector is not Poisson");
    unsigned d = pi.dim();
    BidiffOp c1 = BidiffOp::from_bivector(pi, GaussianRational(Rational(1, 2)));

    std::vector<BidiffOp> shapes(3, BidiffOp(d));
    for (unsigned i = 0; i < d; ++i)
        for (unsigned j = 0; j < d; ++j) {
            if (i == j) continue;
            Polynomial pij = bivector_entry(pi, i, j);
            if (pij.is_zero()) continue;
            for (unsigned k = 0; k < d; ++k)
                for (unsigned l = 0; l < d; ++l) {
                    if (k == l) continue;
                    Polynomial pkl = bivector_entry(pi, k, l);
                    if (pkl.is_zero()) continue;
                    Monomial ei(d), ej(d), ek(d), el(d);
                    ei.e[i] = 1;
                    ej.e[j] = 1;
                    ek.e[k] = 1;
                    el.e[l] = 1;
                    shapes[0].add_term(ei * ek, ej * el, pij * pkl);
                    Polynomial dl_pij_pkl = pij.partial(l) * pkl;
                    if (dl_pij_pkl.is_zero()) continue;
                    shapes[1].add_term(ei * ek, ej, dl_pij_pkl);
                    shapes[2].add_term(ei, ej * ek, dl_pij_pkl);
                }
        }

    TridiffOp base = compose_first(c1, c1);
    base -= compose_second(c1, c1);
    std::vector<TridiffOp> contributions;
    for (const auto& s : shapes) contributions.push_back(detail::order2_defect_shape(s));

    // one equation per (derivative triple, monomial) slot
    std::map<std::pair<TridiffOp::Key, Monomial>, std::pair<ScalarVector, GaussianRational>> eqs;
    auto slot = [&](const TridiffOp::Key& k, const Monomial& m) -> std::pair<ScalarVector, GaussianRational>& {
        auto [it, ins] = eqs.try_emplace({k, m},
                                         std::pair<ScalarVector, GaussianRational>{
                                             ScalarVector(shapes.size(), GaussianRational(0)), GaussianRational(0)});
        (void)ins;
        return it->second;
    };
    for (const auto& [k, c] : base.terms())
        for (const auto& [m, v] : c.terms()) slot(k, m).second = -v;
    for (std::size_t w = 0; w < contributions.size(); ++w)
        for (const auto& [k, c] : contributions[w].terms())
            for (const auto& [m, v] : c.terms()) slot(k, m).first[w] = v;

    ScalarMatrix mat;
    ScalarVector rhs;
    for (const auto& [key, row] : eqs) {
        mat.push_back(row.first);
        rhs.push_back(row.second);
    }
    auto weights = solve_linear_system(std::move(mat), std::move(rhs));
    if (!weights) throw std::domain_error("kontsevich2: order-2 ansatz constraint is unsolvable");

    BidiffOp c2(d);
    for (std::size_t w = 0; w < shapes.size(); ++w) c2 += shapes[w].scaled((*weights)[w]);
    StarProduct out({BidiffOp::multiplication(d), c1, c2}, pi);
    if (!is_associative(out)) throw std::domain_error("kontsevich2: solved product failed verification");
    return out;
}

/// Normalized form with C_1 = (1/2){.,.}: the unit is corrected by the
/// multiplication-by-unit equivalence, then the symmetric part of C_1 is
/// removed by a second-order transformation.  Returns the normalized product
/// and the composite transform T with  normalized = T^{-1}(T . * T .).
inline std::pair<StarProduct, EquivalenceTransform> normalize_c1(const StarProduct& s) {
    unsigned n = s.order(), d = s.dim();
    // unit of the deformed algebra, order by order from u*f = f at f = 1
    std::vector<Polynomial> u(n + 1, Polynomial(d));
    u[0] = Polynomial::one(d);
    for (unsigned k = 1; k <= n; ++k) {
        Polynomial uk(d);
        for (unsigned r = 1; r <= k; ++r) uk -= s.op(r).apply(u[k - r], Polynomial::one(d));
        u[k] = std::move(uk);
    }
    // verify u is a genuine two-sided unit, as an operator identity
    for (unsigned k = 1; k <= n; ++k) {
        LinDiffOp left(d), right(d);
        for (unsigned r = 0; r <= k; ++r) {
            left += s.op(r).freeze_left(u[k - r]);
            right += s.op(r).freeze_right(u[k - r]);
        }
        if (!left.is_zero() || !right.is_zero())
            throw std::domain_error("normalize_c1: deformation has no compatible unit");
    }
    EquivalenceTransform t_unit(d, n);
    for (unsigned r = 1; r <= n; ++r) t_unit.set(r, LinDiffOp::multiplication(u[r]));
    StarProduct stage = apply_equivalence(t_unit, s);

    BidiffOp target = BidiffOp::from_bivector(s.claimed_pi(), GaussianRational(Rational(1, 2)));
    BidiffOp delta = stage.op(1) - target;
    if (delta != delta.transpose())
        throw std::domain_error("normalize_c1: C_1 skew part does not match the claimed bivector");
    LinDiffOp t1(d);
    for (const auto& [k, c] : delta.terms()) {
        if (k.first.degree() != 1 || k.second.degree() != 1)
            throw std::domain_error("normalize_c1: C_1 deviation is not first order");
        t1.add_term(k.first * k.second, c.scaled(GaussianRational(Rational(1, 2))));
    }
    EquivalenceTransform t_sym = EquivalenceTransform::identity(d, n);
    if (!t1.is_zero()) t_sym.set(1, t1);
    StarProduct out = apply_equivalence(t_sym, stage);
    if (out.op(1) != target) throw std::domain_error("normalize_c1: normalization failed");
    return {out, t_unit.compose(t_sym)};
}

/// tau as a 2-form through the nondegenerate constant bivector:
/// tau~ = (pi^{-1})^T tau pi^{-1} componentwise, so tau~(X_f, X_g) = tau(df,dg).
inline std::vector<std::vector<Polynomial>> tau_tilde(const StarProduct& s, const StarProduct& s2,
                                                      const Multivector& pi) {
    if (!pi.has_constant_components()) throw std::invalid_argument("tau_tilde: pi must be constant");
    unsigned d = pi.dim();
    ScalarMatrix pmat(d, ScalarVector(d, GaussianRational(0)));
    for (unsigned i = 0; i < d; ++i)
        for (unsigned j = 0; j < d; ++j)
            if (i != j) pmat[i][j] = bivector_entry(pi, i, j).constant_value();
    ScalarMatrix pinv = invert_matrix(pmat);  // throws on degenerate pi
    Multivector t = tau(s, s2);
    std::vector<std::vector<Polynomial>> out(d, std::vector<Polynomial>(d, Polynomial(d)));
    for (unsigned k = 0; k < d; ++k)
        for (unsigned l = 0; l < d; ++l) {
            Polynomial acc(d);
            for (unsigned a = 0; a < d; ++a)
                for (unsigned b = 0; b < d; ++b) {
                    if (a == b) continue;
                    // (pinv^T)_{k a} tau^{ab} pinv_{b l}
                    GaussianRational c = pinv[a][k] * pinv[b][l];
                    if (c.is_zero()) continue;
                    acc += bivector_entry(t, a, b).scaled(c);
                }
            out[k][l] = acc;
        }
    return out;
}

}  // namespace starq
