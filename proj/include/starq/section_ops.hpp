#pragma once

#include "starq/matrix.hpp"

namespace starq {

/// Linear differential operator with matrix coefficients:
/// f |-> sum A * d^m f.
class MatLinOp {
  public:
    using TermMap = std::map<Monomial, MatPoly>;

    MatLinOp() = default;
    MatLinOp(unsigned rows, unsigned cols, unsigned dim) : rows_(rows), cols_(cols), dim_(dim) {}

    static MatLinOp from_matrix(const MatPoly& a) {
        MatLinOp op(a.rows(), a.cols(), a.dim());
        op.add_term(Monomial(a.dim()), a);
        return op;
    }

    unsigned dim() const { return dim_; }
    bool is_zero() const { return terms_.empty(); }
    const TermMap& terms() const { return terms_; }

    void add_term(const Monomial& m, const MatPoly& a) {
        if (a.is_zero()) return;
        auto [it, inserted] = terms_.try_emplace(m, a);
        if (!inserted) {
            it->second += a;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    MatLinOp& operator+=(const MatLinOp& o) {
        for (const auto& [m, a] : o.terms_) add_term(m, a);
        return *this;
    }
    MatLinOp& operator-=(const MatLinOp& o) {
        for (const auto& [m, a] : o.terms_) add_term(m, -a);
        return *this;
    }

    MatPoly apply(const Polynomial& f) const {
        MatPoly out(rows_, cols_, dim_);
        for (const auto& [m, a] : terms_) out += a.scaled(f.partial(m));
        return out;
    }

    friend bool operator==(const MatLinOp& a, const MatLinOp& b) { return a.terms_ == b.terms_; }

  private:
    unsigned rows_ = 0, cols_ = 0, dim_ = 0;
    TermMap terms_;
};

/// Bilinear operator with matrix coefficients and two derivative slots:
/// (u,v) |-> sum K * d^a u * d^b v.  Slot semantics (scalar function or
/// section column) are fixed by the functions that build and apply it.
class MatBiOp {
  public:
    using Key = std::pair<Monomial, Monomial>;
    using TermMap = std::map<Key, MatPoly>;

    MatBiOp() = default;
    MatBiOp(unsigned rows, unsigned cols, unsigned dim) : rows_(rows), cols_(cols), dim_(dim) {}

    unsigned dim() const { return dim_; }
    unsigned rows() const { return rows_; }
    unsigned cols() const { return cols_; }
    bool is_zero() const { return terms_.empty(); }
    const TermMap& terms() const { return terms_; }

    void add_term(const Monomial& a, const Monomial& b, const MatPoly& k) {
        if (k.is_zero()) return;
        Key key{a, b};
        auto [it, inserted] = terms_.try_emplace(key, k);
        if (!inserted) {
            it->second += k;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    MatBiOp& operator+=(const MatBiOp& o) {
        for (const auto& [k, c] : o.terms_) add_term(k.first, k.second, c);
        return *this;
    }
    MatBiOp& operator-=(const MatBiOp& o) {
        for (const auto& [k, c] : o.terms_) add_term(k.first, k.second, -c);
        return *this;
    }
    friend MatBiOp operator+(MatBiOp a, const MatBiOp& b) { return a += b; }
    friend MatBiOp operator-(MatBiOp a, const MatBiOp& b) { return a -= b; }

    /// Both slots scalar functions.
    MatPoly apply(const Polynomial& f, const Polynomial& g) const {
        MatPoly out(rows_, cols_, dim_);
        for (const auto& [k, c] : terms_) out += c.scaled(f.partial(k.first) * g.partial(k.second));
        return out;
    }

    /// First slot a section column, second a scalar function.
    MatPoly apply_section(const MatPoly& s, const Polynomial& f) const {
        MatPoly out(rows_, 1, dim_);
        for (const auto& [k, c] : terms_) out += (c * s.partial(k.first)).scaled(f.partial(k.second));
        return out;
    }

    MatBiOp swap_slots() const {
        MatBiOp out(rows_, cols_, dim_);
        for (const auto& [k, c] : terms_) out.add_term(k.second, k.first, c);
        return out;
    }

    MatBiOp left_mul(const MatPoly& m) const {
        MatBiOp out(m.rows(), cols_, dim_);
        for (const auto& [k, c] : terms_) out.add_term(k.first, k.second, m * c);
        return out;
    }
    MatBiOp right_mul(const MatPoly& m) const {
        MatBiOp out(rows_, m.cols(), dim_);
        for (const auto& [k, c] : terms_) out.add_term(k.first, k.second, c * m);
        return out;
    }

    /// Precompose the first slot with a fixed matrix: u := P x, expanding
    /// d^a (P x) by the Leibniz rule.  Used to restrict section-slot
    /// operators to the image of an idempotent.
    MatBiOp precompose_slot1(const MatPoly& p) const {
        MatBiOp out(rows_, cols_, dim_);
        for (const auto& [k, c] : terms_) {
            detail::for_each_subindex(k.first, [&](const Monomial& a1, const Monomial& a2) {
                Rational b = detail::multi_binomial(k.first, a1);
                MatPoly coef = c * p.partial(a1);
                if (b != 1) coef = coef.scaled(GaussianRational(b));
                out.add_term(a2, k.second, coef);
            });
        }
        return out;
    }

    friend bool operator==(const MatBiOp& a, const MatBiOp& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const MatBiOp& a, const MatBiOp& b) { return !(a == b); }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [k, c] : terms_) {
            if (!first) os << " + ";
            first = false;
            os << c.str() << " d" << BidiffOp::idx_str(k.first) << " (x) d" << BidiffOp::idx_str(k.second);
        }
        return os.str();
    }

  private:
    unsigned rows_ = 0, cols_ = 0, dim_ = 0;
    TermMap terms_;
};

/// Trilinear operator with matrix coefficients (section slot plus two
/// function slots, or three function slots).
class MatTriOp {
  public:
    using Key = std::tuple<Monomial, Monomial, Monomial>;
    using TermMap = std::map<Key, MatPoly>;

    MatTriOp() = default;
    MatTriOp(unsigned rows, unsigned cols, unsigned dim) : rows_(rows), cols_(cols), dim_(dim) {}

    unsigned dim() const { return dim_; }
    bool is_zero() const { return terms_.empty(); }
    const TermMap& terms() const { return terms_; }

    void add_term(const Monomial& a, const Monomial& b, const Monomial& c, const MatPoly& k) {
        if (k.is_zero()) return;
        Key key{a, b, c};
        auto [it, inserted] = terms_.try_emplace(key, k);
        if (!inserted) {
            it->second += k;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    MatTriOp& operator+=(const MatTriOp& o) {
        for (const auto& [k, c] : o.terms_) add_term(std::get<0>(k), std::get<1>(k), std::get<2>(k), c);
        return *this;
    }
    MatTriOp& operator-=(const MatTriOp& o) {
        for (const auto& [k, c] : o.terms_) add_term(std::get<0>(k), std::get<1>(k), std::get<2>(k), -c);
        return *this;
    }

    MatTriOp swap23() const {
        MatTriOp out(rows_, cols_, dim_);
        for (const auto& [k, c] : terms_) out.add_term(std::get<0>(k), std::get<2>(k), std::get<1>(k), c);
        return out;
    }

    MatTriOp precompose_slot1(const MatPoly& p) const {
        MatTriOp out(rows_, cols_, dim_);
        for (const auto& [k, c] : terms_) {
            detail::for_each_subindex(std::get<0>(k), [&](const Monomial& a1, const Monomial& a2) {
                Rational b = detail::multi_binomial(std::get<0>(k), a1);
                MatPoly coef = c * p.partial(a1);
                if (b != 1) coef = coef.scaled(GaussianRational(b));
                out.add_term(a2, std::get<1>(k), std::get<2>(k), coef);
            });
        }
        return out;
    }

    MatPoly apply_section(const MatPoly& s, const Polynomial& f, const Polynomial& g) const {
        MatPoly out(rows_, 1, dim_);
        for (const auto& [k, c] : terms_)
            out += (c * s.partial(std::get<0>(k))).scaled(f.partial(std::get<1>(k)) * g.partial(std::get<2>(k)));
        return out;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [k, c] : terms_) {
            if (!first) os << " + ";
            first = false;
            os << c.str() << " d" << BidiffOp::idx_str(std::get<0>(k)) << " (x) d"
               << BidiffOp::idx_str(std::get<1>(k)) << " (x) d" << BidiffOp::idx_str(std::get<2>(k));
        }
        return os.str();
    }

  private:
    unsigned rows_ = 0, cols_ = 0, dim_ = 0;
    TermMap terms_;
};

// ---- symbolic compositions with a scalar bidifferential operator ----

/// C(M, W(.)): fixed matrix in the left slot, operator in the right.
inline MatLinOp bidiff_mat_linop(const BidiffOp& c, const MatPoly& m, const MatLinOp& w,
                                 unsigned out_cols) {
    MatLinOp out(m.rows(), out_cols, m.dim());
    for (const auto& [k, coef] : c.terms()) {
        MatPoly ma = m.partial(k.first);
        if (ma.is_zero()) continue;
        for (const auto& [wm, wa] : w.terms()) {
            detail::for_each_subindex(k.second, [&](const Monomial& b1, const Monomial& b2) {
                Rational bc = detail::multi_binomial(k.second, b1);
                MatPoly t = (ma * wa.partial(b1)).scaled(coef);
                if (bc != 1) t = t.scaled(GaussianRational(bc));
                out.add_term(wm * b2, t);
            });
        }
    }
    return out;
}

/// C(W(.), M).
inline MatLinOp bidiff_linop_mat(const BidiffOp& c, const MatLinOp& w, const MatPoly& m) {
    MatLinOp out(0, 0, m.dim());
    bool init = false;
    for (const auto& [k, coef] : c.terms()) {
        MatPoly mb = m.partial(k.second);
        if (mb.is_zero()) continue;
        for (const auto& [wm, wa] : w.terms()) {
            detail::for_each_subindex(k.first, [&](const Monomial& a1, const Monomial& a2) {
                Rational bc = detail::multi_binomial(k.first, a1);
                MatPoly t = (wa.partial(a1) * mb).scaled(coef);
                if (bc != 1) t = t.scaled(GaussianRational(bc));
                if (!init) {
                    out = MatLinOp(t.rows(), t.cols(), t.dim());
                    init = true;
                }
                out.add_term(wm * a2, t);
            });
        }
    }
    return out;
}

/// C(W(u), V(v)): slot1 from W's argument, slot2 from V's; coefficient
/// order is (W matrix) * (V matrix).
inline MatBiOp bidiff_linop_linop(const BidiffOp& c, const MatLinOp& w, const MatLinOp& v,
                                  unsigned rows, unsigned cols) {
    MatBiOp out(rows, cols, c.dim());
    for (const auto& [k, coef] : c.terms()) {
        for (const auto& [wm, wa] : w.terms()) {
            detail::for_each_subindex(k.first, [&](const Monomial& a1, const Monomial& a2) {
                Rational ba = detail::multi_binomial(k.first, a1);
                MatPoly left = wa.partial(a1).scaled(coef);
                if (ba != 1) left = left.scaled(GaussianRational(ba));
                if (left.is_zero()) return;
                for (const auto& [vm, va] : v.terms()) {
                    detail::for_each_subindex(k.second, [&](const Monomial& b1, const Monomial& b2) {
                        Rational bb = detail::multi_binomial(k.second, b1);
                        MatPoly t = left * va.partial(b1);
                        if (bb != 1) t = t.scaled(GaussianRational(bb));
                        out.add_term(wm * a2, vm * b2, t);
                    });
                }
            });
        }
    }
    return out;
}

/// C(M, U(u,v)): sandwich a bilinear operator from the left.
inline MatBiOp bidiff_mat_biop(const BidiffOp& c, const MatPoly& m, const MatBiOp& u) {
    MatBiOp out(m.rows(), u.cols(), m.dim());
    for (const auto& [k, coef] : c.terms()) {
        MatPoly ma = m.partial(k.first);
        if (ma.is_zero()) continue;
        for (const auto& [uk, ucoef] : u.terms()) {
            // d^{k.second}(K d^a u d^b v): 3-way Leibniz
            detail::for_each_subindex(k.second, [&](const Monomial& b1, const Monomial& rest) {
                Rational c1 = detail::multi_binomial(k.second, b1);
                MatPoly t0 = (ma * ucoef.partial(b1)).scaled(coef);
                if (c1 != 1) t0 = t0.scaled(GaussianRational(c1));
                if (t0.is_zero()) return;
                detail::for_each_subindex(rest, [&](const Monomial& b2, const Monomial& b3) {
                    Rational c2 = detail::multi_binomial(rest, b2);
                    MatPoly t = c2 == 1 ? t0 : t0.scaled(GaussianRational(c2));
                    out.add_term(uk.first * b2, uk.second * b3, t);
                });
            });
        }
    }
    return out;
}

/// C(U(u,v), M): sandwich from the right.
inline MatBiOp bidiff_biop_mat(const BidiffOp& c, const MatBiOp& u, const MatPoly& m) {
    MatBiOp out(u.rows(), m.cols(), m.dim());
    for (const auto& [k, coef] : c.terms()) {
        MatPoly mb = m.partial(k.second);
        if (mb.is_zero()) continue;
        for (const auto& [uk, ucoef] : u.terms()) {
            detail::for_each_subindex(k.first, [&](const Monomial& a1, const Monomial& rest) {
                Rational c1 = detail::multi_binomial(k.first, a1);
                MatPoly t0 = (ucoef.partial(a1) * mb).scaled(coef);
                if (c1 != 1) t0 = t0.scaled(GaussianRational(c1));
                if (t0.is_zero()) return;
                detail::for_each_subindex(rest, [&](const Monomial& a2, const Monomial& a3) {
                    Rational c2 = detail::multi_binomial(rest, a2);
                    MatPoly t = c2 == 1 ? t0 : t0.scaled(GaussianRational(c2));
                    out.add_term(uk.first * a2, uk.second * a3, t);
                });
            });
        }
    }
    return out;
}

/// C(W(u), v) with a fresh scalar slot v: slots (u, v).
inline MatBiOp bidiff_linop_fun(const BidiffOp& c, const MatLinOp& w, unsigned rows, unsigned cols) {
    MatBiOp out(rows, cols, c.dim());
    for (const auto& [k, coef] : c.terms()) {
        for (const auto& [wm, wa] : w.terms()) {
            detail::for_each_subindex(k.first, [&](const Monomial& a1, const Monomial& a2) {
                Rational b = detail::multi_binomial(k.first, a1);
                MatPoly t = wa.partial(a1).scaled(coef);
                if (b != 1) t = t.scaled(GaussianRational(b));
                out.add_term(wm * a2, k.second, t);
            });
        }
    }
    return out;
}

/// W ∘ t on the function argument: f |-> W(t(f)).
inline MatLinOp matlinop_compose_lindiff(const MatLinOp& w, const LinDiffOp& t, unsigned rows,
                                         unsigned cols, unsigned dim) {
    MatLinOp out(rows, cols, dim);
    for (const auto& [wm, wa] : w.terms()) {
        for (const auto& [tm, tc] : t.terms()) {
            // A d^{wm}(tc d^{tm} f)
            detail::for_each_subindex(wm, [&](const Monomial& m1, const Monomial& m2) {
                Rational b = detail::multi_binomial(wm, m1);
                MatPoly a = wa.scaled(tc.partial(m1));
                if (b != 1) a = a.scaled(GaussianRational(b));
                out.add_term(m2 * tm, a);
            });
        }
    }
    return out;
}

/// Substitute a scalar bidifferential operator into the second slot:
/// outer(s, inner(f,g)) as a trilinear operator (s, f, g).
inline MatTriOp subst_slot2(const MatBiOp& outer, const BidiffOp& inner) {
    MatTriOp out(outer.rows(), outer.cols(), outer.dim());
    for (const auto& [ok, oc] : outer.terms()) {
        for (const auto& [ik, ic] : inner.terms()) {
            detail::for_each_subindex(ok.second, [&](const Monomial& b1, const Monomial& rest) {
                Rational c1 = detail::multi_binomial(ok.second, b1);
                MatPoly t0 = oc.scaled(ic.partial(b1));
                if (c1 != 1) t0 = t0.scaled(GaussianRational(c1));
                if (t0.is_zero()) return;
                detail::for_each_subindex(rest, [&](const Monomial& b2, const Monomial& b3) {
                    Rational c2 = detail::multi_binomial(rest, b2);
                    MatPoly t = c2 == 1 ? t0 : t0.scaled(GaussianRational(c2));
                    out.add_term(ok.first, ik.first * b2, ik.second * b3, t);
                });
            });
        }
    }
    return out;
}

/// Substitute a section-valued bilinear operator into the first slot:
/// outer(inner(s, v), u) as a trilinear operator (s, u, v).
inline MatTriOp subst_slot1(const MatBiOp& outer, const MatBiOp& inner) {
    MatTriOp out(outer.rows(), outer.cols(), outer.dim());
    for (const auto& [ok, oc] : outer.terms()) {
        for (const auto& [ik, ic] : inner.terms()) {
            // d^{ok.first}(K' d^{ik.first} s d^{ik.second} v): 3-way Leibniz
            detail::for_each_subindex(ok.first, [&](const Monomial& a1, const Monomial& rest) {
                Rational c1 = detail::multi_binomial(ok.first, a1);
                MatPoly t0 = oc * ic.partial(a1);
                if (c1 != 1) t0 = t0.scaled(GaussianRational(c1));
                if (t0.is_zero()) return;
                detail::for_each_subindex(rest, [&](const Monomial& a2, const Monomial& a3) {
                    Rational c2 = detail::multi_binomial(rest, a2);
                    MatPoly t = c2 == 1 ? t0 : t0.scaled(GaussianRational(c2));
                    out.add_term(ik.first * a2, ok.second, ik.second * a3, t);
                });
            });
        }
    }
    return out;
}

}  // namespace starq
