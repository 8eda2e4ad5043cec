#pragma once

#include <map>
#include <sstream>
#include <tuple>

#include "starq/diffop.hpp"
#include "starq/multivector.hpp"
#include "starq/polynomial.hpp"

namespace starq {

inline bool operator<(const Monomial& a, const Monomial& b) { return GrlexLess{}(a, b); }

/// Bidifferential operator (f,g) |-> sum coef * (d^a f)(d^b g), canonical
/// term map keyed by the derivative pair.
class BidiffOp {
  public:
    using Key = std::pair<Monomial, Monomial>;
    using TermMap = std::map<Key, Polynomial>;

    BidiffOp() = default;
    explicit BidiffOp(unsigned dim) : dim_(dim) {}

    /// Pointwise multiplication (f,g) -> fg.
    static BidiffOp multiplication(unsigned dim) {
        BidiffOp op(dim);
        op.add_term(Monomial(dim), Monomial(dim), Polynomial::one(dim));
        return op;
    }

    /// Half the bivector as a bidifferential operator: (f,g) -> c * pi(df,dg).
    static BidiffOp from_bivector(const Multivector& pi, const GaussianRational& scale) {
        BidiffOp op(pi.dim());
        unsigned d = pi.dim();
        for (unsigned i = 0; i < d; ++i)
            for (unsigned j = 0; j < d; ++j) {
                if (i == j) continue;
                Polynomial c = bivector_entry(pi, i, j).scaled(scale);
                if (c.is_zero()) continue;
                Monomial a(d), b(d);
                a.e[i] = 1;
                b.e[j] = 1;
                op.add_term(a, b, c);
            }
        return op;
    }

    unsigned dim() const { return dim_; }
    bool is_zero() const { return terms_.empty(); }
    const TermMap& terms() const { return terms_; }

    void add_term(const Monomial& a, const Monomial& b, const Polynomial& coef) {
        if (coef.is_zero()) return;
        Key k{a, b};
        auto [it, inserted] = terms_.try_emplace(k, coef);
        if (!inserted) {
            it->second += coef;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    BidiffOp& operator+=(const BidiffOp& o) {
        for (const auto& [k, c] : o.terms_) add_term(k.first, k.second, c);
        return *this;
    }
    BidiffOp& operator-=(const BidiffOp& o) {
        for (const auto& [k, c] : o.terms_) add_term(k.first, k.second, -c);
        return *this;
    }
    friend BidiffOp operator+(BidiffOp a, const BidiffOp& b) { return a += b; }
    friend BidiffOp operator-(BidiffOp a, const BidiffOp& b) { return a -= b; }
    BidiffOp operator-() const {
        BidiffOp op(dim_);
        for (const auto& [k, c] : terms_) op.terms_[k] = -c;
        return op;
    }
    BidiffOp scaled(const GaussianRational& s) const {
        BidiffOp op(dim_);
        if (s.is_zero()) return op;
        for (const auto& [k, c] : terms_) op.terms_[k] = c.scaled(s);
        return op;
    }

    /// (f,g) -> op(g,f).
    BidiffOp transpose() const {
        BidiffOp op(dim_);
        for (const auto& [k, c] : terms_) op.add_term(k.second, k.first, c);
        return op;
    }
    BidiffOp skew_part() const { return *this - transpose(); }

    Polynomial apply(const Polynomial& f, const Polynomial& g) const {
        Polynomial out(dim_);
        for (const auto& [k, c] : terms_) out += c * f.partial(k.first) * g.partial(k.second);
        return out;
    }

    /// Left slot frozen to a fixed polynomial: g -> op(f0, g).
    LinDiffOp freeze_left(const Polynomial& f0) const {
        LinDiffOp out(dim_);
        for (const auto& [k, c] : terms_) out.add_term(k.second, c * f0.partial(k.first));
        return out;
    }
    LinDiffOp freeze_right(const Polynomial& g0) const {
        LinDiffOp out(dim_);
        for (const auto& [k, c] : terms_) out.add_term(k.first, c * g0.partial(k.second));
        return out;
    }

    /// The operator restricted to a constant in one slot: op(1, .) and
    /// op(., 1); nonzero values witness a unit-axiom failure.
    LinDiffOp unit_slice_left() const { return freeze_left(Polynomial::one(dim_)); }
    LinDiffOp unit_slice_right() const { return freeze_right(Polynomial::one(dim_)); }

    /// Post-compose with a linear operator: (f,g) -> t(op(f,g)).
    BidiffOp post_compose(const LinDiffOp& t) const {
        BidiffOp out(dim_);
        for (const auto& [tm, tc] : t.terms()) {
            for (const auto& [k, c] : terms_) {
                // tc * d^tm (c * d^a f * d^b g), 3-way Leibniz
                detail::for_each_subindex(tm, [&](const Monomial& m1, const Monomial& rest1) {
                    Rational b1 = detail::multi_binomial(tm, m1);
                    Polynomial coef = tc * c.partial(m1);
                    if (coef.is_zero()) return;
                    if (b1 != 1) coef = coef.scaled(GaussianRational(b1));
                    detail::for_each_subindex(rest1, [&](const Monomial& m2, const Monomial& m3) {
                        Rational b2 = detail::multi_binomial(rest1, m2);
                        Polynomial c2 = b2 == 1 ? coef : coef.scaled(GaussianRational(b2));
                        out.add_term(k.first * m2, k.second * m3, c2);
                    });
                });
            }
        }
        return out;
    }

    /// Pre-compose the slots with linear operators: (f,g) -> op(t(f), s(g)).
    BidiffOp pre_compose(const LinDiffOp& t, const LinDiffOp& s) const {
        BidiffOp out(dim_);
        for (const auto& [k, c] : terms_) {
            // d^a (tc * d^tm f) = sum binom (d^{a1} tc) d^{tm+a2} f
            BidiffOp partial_left(dim_);
            for (const auto& [tm, tc] : t.terms()) {
                detail::for_each_subindex(k.first, [&](const Monomial& a1, const Monomial& a2) {
                    Rational b = detail::multi_binomial(k.first, a1);
                    Polynomial coef = c * tc.partial(a1);
                    if (coef.is_zero()) return;
                    if (b != 1) coef = coef.scaled(GaussianRational(b));
                    partial_left.add_term(tm * a2, k.second, coef);
                });
            }
            for (const auto& [k2, c2] : partial_left.terms_) {
                for (const auto& [sm, sc] : s.terms()) {
                    detail::for_each_subindex(k2.second, [&](const Monomial& b1, const Monomial& b2) {
                        Rational b = detail::multi_binomial(k2.second, b1);
                        Polynomial coef = c2 * sc.partial(b1);
                        if (coef.is_zero()) return;
                        if (b != 1) coef = coef.scaled(GaussianRational(b));
                        out.add_term(k2.first, sm * b2, coef);
                    });
                }
            }
        }
        return out;
    }

    friend bool operator==(const BidiffOp& a, const BidiffOp& b) {
        return a.dim_ == b.dim_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const BidiffOp& a, const BidiffOp& b) { return !(a == b); }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [k, c] : terms_) {
            if (!first) os << " + ";
            first = false;
            os << '(' << c.str() << ") d" << idx_str(k.first) << " (x) d" << idx_str(k.second);
        }
        return os.str();
    }

    static std::string idx_str(const Monomial& m) {
        std::ostringstream os;
        os << '[';
        for (unsigned i = 0; i < m.dim(); ++i) {
            if (i) os << ',';
            os << m.e[i];
        }
        os << ']';
        return os.str();
    }

  private:
    unsigned dim_ = 0;
    TermMap terms_;
};

/// Tridifferential operator (f,g,h) |-> sum coef (d^a f)(d^b g)(d^c h);
/// carries associativity defects in exact, canonical form.
class TridiffOp {
  public:
    using Key = std::tuple<Monomial, Monomial, Monomial>;
    using TermMap = std::map<Key, Polynomial>;

    TridiffOp() = default;
    explicit TridiffOp(unsigned dim) : dim_(dim) {}

    unsigned dim() const { return dim_; }
    bool is_zero() const { return terms_.empty(); }
    const TermMap& terms() const { return terms_; }

    void add_term(const Monomial& a, const Monomial& b, const Monomial& c, const Polynomial& coef) {
        if (coef.is_zero()) return;
        Key k{a, b, c};
        auto [it, inserted] = terms_.try_emplace(k, coef);
        if (!inserted) {
            it->second += coef;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    TridiffOp& operator+=(const TridiffOp& o) {
        for (const auto& [k, c] : o.terms_) add_term(std::get<0>(k), std::get<1>(k), std::get<2>(k), c);
        return *this;
    }
    TridiffOp& operator-=(const TridiffOp& o) {
        for (const auto& [k, c] : o.terms_) add_term(std::get<0>(k), std::get<1>(k), std::get<2>(k), -c);
        return *this;
    }

    Polynomial apply(const Polynomial& f, const Polynomial& g, const Polynomial& h) const {
        Polynomial out(dim_);
        for (const auto& [k, c] : terms_)
            out += c * f.partial(std::get<0>(k)) * g.partial(std::get<1>(k)) * h.partial(std::get<2>(k));
        return out;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [k, c] : terms_) {
            if (!first) os << " + ";
            first = false;
            os << '(' << c.str() << ") d" << BidiffOp::idx_str(std::get<0>(k)) << " (x) d"
               << BidiffOp::idx_str(std::get<1>(k)) << " (x) d" << BidiffOp::idx_str(std::get<2>(k));
        }
        return os.str();
    }

  private:
    unsigned dim_ = 0;
    TermMap terms_;
};

/// C(D(f,g), h) expanded symbolically by the three-slot Leibniz rule.
inline TridiffOp compose_first(const BidiffOp& outer, const BidiffOp& inner) {
    TridiffOp out(outer.dim());
    for (const auto& [ko, co] : outer.terms()) {
        for (const auto& [ki, ci] : inner.terms()) {
            // co * d^{ko.first}(ci * d^{ki.first} f * d^{ki.second} g) * d^{ko.second} h
            detail::for_each_subindex(ko.first, [&](const Monomial& p1, const Monomial& rest) {
                Rational b1 = detail::multi_binomial(ko.first, p1);
                Polynomial coef = co * ci.partial(p1);
                if (coef.is_zero()) return;
                if (b1 != 1) coef = coef.scaled(GaussianRational(b1));
                detail::for_each_subindex(rest, [&](const Monomial& p2, const Monomial& p3) {
                    Rational b2 = detail::multi_binomial(rest, p2);
                    Polynomial c2 = b2 == 1 ? coef : coef.scaled(GaussianRational(b2));
                    out.add_term(ki.first * p2, ki.second * p3, ko.second, c2);
                });
            });
        }
    }
    return out;
}

/// C(f, D(g,h)) expanded symbolically.
inline TridiffOp compose_second(const BidiffOp& outer, const BidiffOp& inner) {
    TridiffOp out(outer.dim());
    for (const auto& [ko, co] : outer.terms()) {
        for (const auto& [ki, ci] : inner.terms()) {
            detail::for_each_subindex(ko.second, [&](const Monomial& p1, const Monomial& rest) {
                Rational b1 = detail::multi_binomial(ko.second, p1);
                Polynomial coef = co * ci.partial(p1);
                if (coef.is_zero()) return;
                if (b1 != 1) coef = coef.scaled(GaussianRational(b1));
                detail::for_each_subindex(rest, [&](const Monomial& p2, const Monomial& p3) {
                    Rational b2 = detail::multi_binomial(rest, p2);
                    Polynomial c2 = b2 == 1 ? coef : coef.scaled(GaussianRational(b2));
                    out.add_term(ko.first, ki.first * p2, ki.second * p3, c2);
                });
            });
        }
    }
    return out;
}

}  // namespace starq
