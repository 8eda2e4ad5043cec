#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "starq/parse_util.hpp"
#include "starq/rational.hpp"

namespace starq {

/// Exponent multi-index of a monomial x1^e1 * ... * xd^ed.
struct Monomial {
    std::vector<unsigned> e;

    Monomial() = default;
    explicit Monomial(unsigned dim) : e(dim, 0) {}
    Monomial(std::initializer_list<unsigned> list) : e(list) {}

    unsigned dim() const { return static_cast<unsigned>(e.size()); }
    unsigned degree() const { return std::accumulate(e.begin(), e.end(), 0u); }
    bool is_constant() const { return degree() == 0; }

    Monomial operator*(const Monomial& o) const {
        Monomial m = *this;
        for (unsigned i = 0; i < e.size(); ++i) m.e[i] += o.e[i];
        return m;
    }

    friend bool operator==(const Monomial& a, const Monomial& b) { return a.e == b.e; }
};

/// Graded lexicographic order: total degree first, then lexicographic on
/// exponents.  Canonical term order for storage and printing.
struct GrlexLess {
    bool operator()(const Monomial& a, const Monomial& b) const {
        unsigned da = a.degree(), db = b.degree();
        if (da != db) return da < db;
        return a.e < b.e;
    }
};

/// Multivariate polynomial over Gaussian rationals; the coefficient algebra
/// standing in for complex-valued functions on an affine chart.
/// Invariant: no stored zero coefficients.
class Polynomial {
  public:
    using TermMap = std::map<Monomial, GaussianRational, GrlexLess>;

    Polynomial() = default;
    explicit Polynomial(unsigned dim) : dim_(dim) {}
    Polynomial(unsigned dim, const GaussianRational& c) : dim_(dim) {
        if (!c.is_zero()) terms_[Monomial(dim)] = c;
    }

    static Polynomial variable(unsigned dim, unsigned index) {
        if (index >= dim) throw std::out_of_range("Polynomial::variable: index out of range");
        Polynomial p(dim);
        Monomial m(dim);
        m.e[index] = 1;
        p.terms_[m] = GaussianRational(1);
        return p;
    }

    static Polynomial constant(unsigned dim, const GaussianRational& c) { return Polynomial(dim, c); }
    static Polynomial one(unsigned dim) { return Polynomial(dim, GaussianRational(1)); }

    unsigned dim() const { return dim_; }
    bool is_zero() const { return terms_.empty(); }
    const TermMap& terms() const { return terms_; }

    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_constant());
    }
    GaussianRational constant_value() const {
        if (terms_.empty()) return GaussianRational(0);
        auto it = terms_.find(Monomial(dim_));
        return it == terms_.end() ? GaussianRational(0) : it->second;
    }

    unsigned total_degree() const {
        unsigned d = 0;
        for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
        return d;
    }

    void add_term(const Monomial& m, const GaussianRational& c) {
        if (c.is_zero()) return;
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    Polynomial& operator+=(const Polynomial& o) {
        check_dim(o);
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    Polynomial& operator-=(const Polynomial& o) {
        check_dim(o);
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    Polynomial operator-() const {
        Polynomial p(dim_);
        for (const auto& [m, c] : terms_) p.terms_[m] = -c;
        return p;
    }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        a.check_dim(b);
        Polynomial p(a.dim_);
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) p.add_term(ma * mb, ca * cb);
        return p;
    }
    Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

    Polynomial scaled(const GaussianRational& c) const {
        Polynomial p(dim_);
        if (c.is_zero()) return p;
        for (const auto& [m, k] : terms_) p.terms_[m] = k * c;
        return p;
    }

    /// Exact partial derivative with respect to variable `index` (0-based).
    Polynomial partial(unsigned index) const {
        if (index >= dim_) throw std::out_of_range("Polynomial::partial: index out of range");
        Polynomial p(dim_);
        for (const auto& [m, c] : terms_) {
            if (m.e[index] == 0) continue;
            Monomial n = m;
            --n.e[index];
            p.add_term(n, c * GaussianRational(Rational(m.e[index])));
        }
        return p;
    }

    /// Iterated partial derivative by a whole multi-index.
    Polynomial partial(const Monomial& idx) const {
        Polynomial p = *this;
        for (unsigned i = 0; i < idx.dim(); ++i)
            for (unsigned k = 0; k < idx.e[i]; ++k) p = p.partial(i);
        return p;
    }

    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        return a.dim_ == b.dim_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

    /// Deterministic printing, highest grlex term first.  Round-trips through
    /// parse_polynomial.
    std::string str(const std::vector<std::string>* names = nullptr) const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            const auto& [m, c] = *it;
            GaussianRational coeff = c;
            if (first) {
                if (coeff.is_real() && coeff.re < 0) {
                    os << '-';
                    coeff = -coeff;
                }
            } else {
                if (coeff.is_real() && coeff.re < 0) {
                    os << " - ";
                    coeff = -coeff;
                } else {
                    os << " + ";
                }
            }
            bool printed_coeff = false;
            if (!coeff.is_one() || m.is_constant()) {
                os << coeff.str();
                printed_coeff = true;
            }
            bool first_var = true;
            for (unsigned i = 0; i < m.dim(); ++i) {
                if (m.e[i] == 0) continue;
                if (printed_coeff || !first_var) os << '*';
                os << var_name(i, names);
                if (m.e[i] > 1) os << '^' << m.e[i];
                first_var = false;
                printed_coeff = true;
            }
            first = false;
        }
        return os.str();
    }

    friend std::ostream& operator<<(std::ostream& os, const Polynomial& p) { return os << p.str(); }

    static std::string var_name(unsigned i, const std::vector<std::string>* names = nullptr) {
        if (names && i < names->size()) return (*names)[i];
        return "x" + std::to_string(i + 1);
    }

  private:
    void check_dim(const Polynomial& o) const {
        if (dim_ != o.dim_) throw std::invalid_argument("Polynomial: dimension mismatch");
    }

    unsigned dim_ = 0;
    TermMap terms_;
};

inline Polynomial poly_add(const Polynomial& p, const Polynomial& q) { return p + q; }
inline Polynomial poly_mul(const Polynomial& p, const Polynomial& q) { return p * q; }
inline Polynomial partial(const Polynomial& p, unsigned index) { return p.partial(index); }

namespace detail {

inline Rational parse_rational(TextCursor& cur) {
    cur.skip_ws();
    std::string digits;
    bool neg = false;
    if (cur.peek() == '-') {
        neg = true;
        cur.get();
        cur.skip_ws();
    }
    if (!std::isdigit(static_cast<unsigned char>(cur.peek()))) cur.fail("expected a number");
    while (std::isdigit(static_cast<unsigned char>(cur.peek()))) digits += cur.get();
    Rational num{BigInt(digits)};
    if (cur.peek() == '/') {
        cur.get();
        std::string den;
        while (std::isdigit(static_cast<unsigned char>(cur.peek()))) den += cur.get();
        if (den.empty()) cur.fail("expected a denominator");
        BigInt d(den);
        if (d == 0) cur.fail("zero denominator");
        num /= d;
    }
    return neg ? -num : num;
}

/// `(a,b)` for a+bi, or a plain rational.
inline GaussianRational parse_scalar(TextCursor& cur) {
    cur.skip_ws();
    if (cur.peek() == '(') {
        cur.get();
        Rational re = parse_rational(cur);
        cur.expect(',', "in complex literal (a,b)");
        Rational im = parse_rational(cur);
        cur.expect(')', "closing complex literal");
        return {re, im};
    }
    return GaussianRational(parse_rational(cur));
}

/// Variable name -> 0-based index.  Accepts x1..xd and the aliases
/// x,y,z,w for the first four coordinates.
inline int lookup_var(const std::string& name, unsigned dim) {
    static const std::string aliases[] = {"x", "y", "z", "w"};
    for (unsigned i = 0; i < 4 && i < dim; ++i)
        if (name == aliases[i]) return static_cast<int>(i);
    if (name.size() >= 2 && name[0] == 'x') {
        bool digits = true;
        for (std::size_t i = 1; i < name.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(name[i]))) digits = false;
        if (digits) {
            int k = std::stoi(name.substr(1));
            if (k >= 1 && static_cast<unsigned>(k) <= dim) return k - 1;
        }
    }
    return -1;
}

inline Polynomial parse_poly_factor(TextCursor& cur, unsigned dim) {
    cur.skip_ws();
    char c = cur.peek();
    if (c == '(' || std::isdigit(static_cast<unsigned char>(c))) {
        return Polynomial::constant(dim, parse_scalar(cur));
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
        std::string name;
        while (std::isalnum(static_cast<unsigned char>(cur.peek()))) name += cur.get();
        int idx = lookup_var(name, dim);
        if (idx < 0) cur.fail("unknown variable '" + name + "'");
        Polynomial p = Polynomial::variable(dim, static_cast<unsigned>(idx));
        cur.skip_ws();
        if (cur.peek() == '^') {
            cur.get();
            cur.skip_ws();
            std::string digits;
            while (std::isdigit(static_cast<unsigned char>(cur.peek()))) digits += cur.get();
            if (digits.empty()) cur.fail("expected an exponent");
            int k = std::stoi(digits);
            Polynomial q = Polynomial::one(dim);
            for (int i = 0; i < k; ++i) q *= p;
            return q;
        }
        return p;
    }
    cur.fail("expected a coefficient or variable");
}

inline Polynomial parse_poly_term(TextCursor& cur, unsigned dim) {
    Polynomial p = parse_poly_factor(cur, dim);
    while (true) {
        cur.skip_ws();
        if (cur.peek() == '*') {
            cur.get();
            p *= parse_poly_factor(cur, dim);
        } else if (std::isalpha(static_cast<unsigned char>(cur.peek()))) {
            // implicit product, e.g. "2x"
            p *= parse_poly_factor(cur, dim);
        } else {
            break;
        }
    }
    return p;
}

inline Polynomial parse_poly_expr(TextCursor& cur, unsigned dim) {
    cur.skip_ws();
    bool neg = false;
    if (cur.peek() == '-') {
        neg = true;
        cur.get();
    } else if (cur.peek() == '+') {
        cur.get();
    }
    Polynomial p = parse_poly_term(cur, dim);
    if (neg) p = -p;
    while (true) {
        cur.skip_ws();
        char c = cur.peek();
        if (c == '+') {
            cur.get();
            p += parse_poly_term(cur, dim);
        } else if (c == '-') {
            cur.get();
            p -= parse_poly_term(cur, dim);
        } else {
            break;
        }
    }
    return p;
}

}  // namespace detail

/// Parses the polynomial literal syntax, e.g. `3/2*x1^2*x2 + (0,1)*x3`.
inline Polynomial parse_polynomial(const std::string& text, unsigned dim, int line = 1, int column = 1) {
    TextCursor cur(text, line, column);
    Polynomial p = detail::parse_poly_expr(cur, dim);
    cur.skip_ws();
    if (!cur.eof()) cur.fail("trailing input in polynomial literal");
    return p;
}

}  // namespace starq
