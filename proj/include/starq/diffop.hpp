#pragma once

#include <map>
#include <vector>

#include "starq/polynomial.hpp"
#include "starq/series.hpp"

namespace starq {

namespace detail {
/// Multinomial expansion helpers for the symbolic Leibniz rule.
inline Rational binomial(unsigned n, unsigned k) {
    Rational r(1);
    for (unsigned j = 0; j < k; ++j) r = r * Rational(n - j) / Rational(j + 1);
    return r;
}

/// binom(m, s) over multi-indices, componentwise product.
inline Rational multi_binomial(const Monomial& m, const Monomial& s) {
    Rational r(1);
    for (unsigned i = 0; i < m.dim(); ++i) r *= binomial(m.e[i], s.e[i]);
    return r;
}

/// All splittings s <= m of a multi-index (s ranges over the sub-indices).
inline void for_each_subindex(const Monomial& m, const std::function<void(const Monomial&, const Monomial&)>& fn) {
    Monomial s(m.dim());
    std::function<void(unsigned)> rec = [&](unsigned i) {
        if (i == m.dim()) {
            Monomial rest = m;
            for (unsigned j = 0; j < m.dim(); ++j) rest.e[j] -= s.e[j];
            fn(s, rest);
            return;
        }
        for (unsigned v = 0; v <= m.e[i]; ++v) {
            s.e[i] = v;
            rec(i + 1);
        }
        s.e[i] = 0;
    };
    rec(0);
}
}  // namespace detail

/// Linear differential operator with polynomial coefficients,
/// f |-> sum coef * d^m f, stored as a canonical term map.
class LinDiffOp {
  public:
    using TermMap = std::map<Monomial, Polynomial, GrlexLess>;

    LinDiffOp() = default;
    explicit LinDiffOp(unsigned dim) : dim_(dim) {}

    static LinDiffOp identity(unsigned dim) {
        LinDiffOp op(dim);
        op.add_term(Monomial(dim), Polynomial::one(dim));
        return op;
    }

    /// Single derivative term coef * d^m.
    static LinDiffOp derivative(unsigned dim, const Monomial& m, const Polynomial& coef) {
        LinDiffOp op(dim);
        op.add_term(m, coef);
        return op;
    }

    /// Multiplication operator by a fixed polynomial.
    static LinDiffOp multiplication(const Polynomial& p) {
        LinDiffOp op(p.dim());
        op.add_term(Monomial(p.dim()), p);
        return op;
    }

    unsigned dim() const { return dim_; }
    bool is_zero() const { return terms_.empty(); }
    const TermMap& terms() const { return terms_; }

    void add_term(const Monomial& m, const Polynomial& coef) {
        if (coef.is_zero()) return;
        auto [it, inserted] = terms_.try_emplace(m, coef);
        if (!inserted) {
            it->second += coef;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    LinDiffOp& operator+=(const LinDiffOp& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    friend LinDiffOp operator+(LinDiffOp a, const LinDiffOp& b) { return a += b; }

    LinDiffOp operator-() const {
        LinDiffOp op(dim_);
        for (const auto& [m, c] : terms_) op.terms_[m] = -c;
        return op;
    }
    LinDiffOp& operator-=(const LinDiffOp& o) { return *this += -o; }
    friend LinDiffOp operator-(LinDiffOp a, const LinDiffOp& b) { return a -= b; }

    LinDiffOp scaled(const GaussianRational& c) const {
        LinDiffOp op(dim_);
        if (c.is_zero()) return op;
        for (const auto& [m, k] : terms_) op.terms_[m] = k.scaled(c);
        return op;
    }

    Polynomial apply(const Polynomial& f) const {
        Polynomial out(dim_);
        for (const auto& [m, c] : terms_) out += c * f.partial(m);
        return out;
    }

    /// Symbolic composition (this after other), expanded by the Leibniz rule:
    /// c*d^m (e*d^n f) = c * sum_{s<=m} binom(m,s) (d^s e) d^{m-s+n} f.
    LinDiffOp compose(const LinDiffOp& other) const {
        LinDiffOp out(dim_);
        for (const auto& [m, c] : terms_) {
            for (const auto& [n, e] : other.terms_) {
                detail::for_each_subindex(m, [&](const Monomial& s, const Monomial& rest) {
                    Rational b = detail::multi_binomial(m, s);
                    Polynomial coef = c * e.partial(s);
                    if (b != 1) coef = coef.scaled(GaussianRational(b));
                    out.add_term(rest * n, coef);
                });
            }
        }
        return out;
    }

    /// A derivation is a pure first-order operator (kills constants).
    bool is_derivation() const {
        for (const auto& [m, c] : terms_)
            if (m.degree() != 1) return false;
        return true;
    }

    friend bool operator==(const LinDiffOp& a, const LinDiffOp& b) {
        return a.dim_ == b.dim_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const LinDiffOp& a, const LinDiffOp& b) { return !(a == b); }

  private:
    unsigned dim_ = 0;
    TermMap terms_;
};

/// Formal transformation T = id + T_1 λ + ... + T_N λ^N with linear
/// differential operators T_r; invertible order by order.
class EquivalenceTransform {
  public:
    EquivalenceTransform(unsigned dim, unsigned order) : dim_(dim), maps_(order, LinDiffOp(dim)) {}

    static EquivalenceTransform identity(unsigned dim, unsigned order) {
        return EquivalenceTransform(dim, order);
    }

    unsigned dim() const { return dim_; }
    unsigned order() const { return static_cast<unsigned>(maps_.size()); }

    /// The operator at lambda^r; r = 0 is the implicit identity.
    LinDiffOp at(unsigned r) const {
        if (r == 0) return LinDiffOp::identity(dim_);
        return maps_.at(r - 1);
    }
    void set(unsigned r, LinDiffOp op) {
        if (r == 0 || r > order()) throw std::out_of_range("EquivalenceTransform::set");
        maps_[r - 1] = std::move(op);
    }

    /// T^{-1}, computed order by order:
    /// S_k = -T_k - sum_{r=1}^{k-1} T_r ∘ S_{k-r}.
    EquivalenceTransform inverse() const {
        EquivalenceTransform inv(dim_, order());
        for (unsigned k = 1; k <= order(); ++k) {
            LinDiffOp s = -at(k);
            for (unsigned r = 1; r < k; ++r) s -= at(r).compose(inv.at(k - r));
            inv.set(k, s);
        }
        return inv;
    }

    /// Composition (this ∘ other) as formal series, truncated at the order.
    EquivalenceTransform compose(const EquivalenceTransform& other) const {
        if (order() != other.order()) throw std::invalid_argument("EquivalenceTransform: order mismatch");
        EquivalenceTransform out(dim_, order());
        for (unsigned k = 1; k <= order(); ++k) {
            LinDiffOp s(dim_);
            for (unsigned r = 0; r <= k; ++r) s += at(r).compose(other.at(k - r));
            out.set(k, s);
        }
        return out;
    }

    /// Apply to a truncated series of polynomials: (T F)_k = sum T_r(F_{k-r}).
    TruncatedSeries<Polynomial> apply(const TruncatedSeries<Polynomial>& f) const {
        TruncatedSeries<Polynomial> out(f.order(), Polynomial(dim_));
        for (unsigned k = 0; k <= f.order(); ++k)
            for (unsigned r = 0; r <= std::min(k, order()); ++r) out[k] += at(r).apply(f[k - r]);
        return out;
    }

    bool all_derivations() const {
        for (const auto& op : maps_)
            if (!op.is_derivation()) return false;
        return true;
    }

    friend bool operator==(const EquivalenceTransform& a, const EquivalenceTransform& b) {
        return a.dim_ == b.dim_ && a.maps_ == b.maps_;
    }

  private:
    unsigned dim_;
    std::vector<LinDiffOp> maps_;  // T_1 .. T_N
};

inline EquivalenceTransform invert_transform(const EquivalenceTransform& t) { return t.inverse(); }

}  // namespace starq
