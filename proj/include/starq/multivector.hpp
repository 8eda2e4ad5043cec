#pragma once

#include <algorithm>
#include <map>
#include <sstream>
#include <vector>

#include "starq/polynomial.hpp"
#include "starq/series.hpp"

namespace starq {

/// Strictly increasing index tuple (i1 < ... < ik) keying a multivector
/// component.
using IndexTuple = std::vector<unsigned>;

namespace detail {
/// Sorts a tuple, returning the permutation sign; 0 on repeated indices.
inline int sort_tuple(IndexTuple& t) {
    int sign = 1;
    for (std::size_t i = 1; i < t.size(); ++i) {
        std::size_t j = i;
        while (j > 0 && t[j - 1] > t[j]) {
            std::swap(t[j - 1], t[j]);
            sign = -sign;
            --j;
        }
    }
    for (std::size_t i = 1; i < t.size(); ++i)
        if (t[i - 1] == t[i]) return 0;
    return sign;
}
}  // namespace detail

/// Antisymmetric contravariant tensor field with polynomial components.
/// Degree 0 is a plain function, degree 1 a vector field.  Only canonical
/// (sorted) index tuples are stored; antisymmetry is enforced at insertion
/// by sign normalization.
class Multivector {
  public:
    using CompMap = std::map<IndexTuple, Polynomial>;

    Multivector() = default;
    Multivector(unsigned dim, unsigned degree) : dim_(dim), degree_(degree) {}

    static Multivector function(const Polynomial& f) {
        Multivector m(f.dim(), 0);
        m.add_component({}, f);
        return m;
    }

    /// Wedge of coordinate directions with a polynomial coefficient.
    static Multivector basis(unsigned dim, IndexTuple idx, const Polynomial& coef) {
        Multivector m(dim, static_cast<unsigned>(idx.size()));
        m.add_component(std::move(idx), coef);
        return m;
    }

    unsigned dim() const { return dim_; }
    unsigned degree() const { return degree_; }
    bool is_zero() const { return components_.empty(); }
    const CompMap& components() const { return components_; }

    void add_component(IndexTuple idx, const Polynomial& coef) {
        if (idx.size() != degree_) throw std::invalid_argument("Multivector: tuple size != degree");
        if (coef.is_zero()) return;
        int sign = detail::sort_tuple(idx);
        if (sign == 0) return;
        for (unsigned i : idx)
            if (i >= dim_) throw std::out_of_range("Multivector: index out of range");
        Polynomial c = sign == 1 ? coef : -coef;
        auto [it, inserted] = components_.try_emplace(std::move(idx), c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) components_.erase(it);
        }
    }

    /// Signed component for an arbitrary (not necessarily sorted) tuple.
    Polynomial component(IndexTuple idx) const {
        int sign = detail::sort_tuple(idx);
        if (sign == 0) return Polynomial(dim_);
        auto it = components_.find(idx);
        if (it == components_.end()) return Polynomial(dim_);
        return sign == 1 ? it->second : -it->second;
    }

    Multivector& operator+=(const Multivector& o) {
        check_compat(o);
        for (const auto& [idx, c] : o.components_) add_component(idx, c);
        return *this;
    }
    Multivector& operator-=(const Multivector& o) {
        check_compat(o);
        for (const auto& [idx, c] : o.components_) add_component(idx, -c);
        return *this;
    }
    friend Multivector operator+(Multivector a, const Multivector& b) { return a += b; }
    friend Multivector operator-(Multivector a, const Multivector& b) { return a -= b; }
    Multivector operator-() const {
        Multivector m(dim_, degree_);
        for (const auto& [idx, c] : components_) m.components_[idx] = -c;
        return m;
    }
    Multivector scaled(const GaussianRational& c) const {
        Multivector m(dim_, degree_);
        if (c.is_zero()) return m;
        for (const auto& [idx, k] : components_) m.components_[idx] = k.scaled(c);
        return m;
    }
    Multivector scaled(const Polynomial& p) const {
        Multivector m(dim_, degree_);
        for (const auto& [idx, k] : components_) m.add_component(idx, k * p);
        return m;
    }

    friend bool operator==(const Multivector& a, const Multivector& b) {
        return a.dim_ == b.dim_ && a.degree_ == b.degree_ && a.components_ == b.components_;
    }
    friend bool operator!=(const Multivector& a, const Multivector& b) { return !(a == b); }

    bool has_constant_components() const {
        for (const auto& [idx, c] : components_)
            if (!c.is_constant()) return false;
        return true;
    }

    /// Wedge product.
    friend Multivector operator^(const Multivector& a, const Multivector& b) {
        if (a.dim_ != b.dim_) throw std::invalid_argument("Multivector: dimension mismatch");
        Multivector out(a.dim_, a.degree_ + b.degree_);
        if (out.degree_ > a.dim_) return out;
        for (const auto& [ia, ca] : a.components_) {
            for (const auto& [ib, cb] : b.components_) {
                IndexTuple idx = ia;
                idx.insert(idx.end(), ib.begin(), ib.end());
                out.add_component(std::move(idx), ca * cb);
            }
        }
        return out;
    }

    /// Left odd derivative in the theta representation: removes index i with
    /// the sign (-1)^position.
    Multivector theta_derivative(unsigned i) const {
        Multivector out(dim_, degree_ == 0 ? 0 : degree_ - 1);
        if (degree_ == 0) return out;
        for (const auto& [idx, c] : components_) {
            auto it = std::find(idx.begin(), idx.end(), i);
            if (it == idx.end()) continue;
            auto pos = static_cast<unsigned>(it - idx.begin());
            IndexTuple rest;
            rest.reserve(idx.size() - 1);
            for (unsigned j : idx)
                if (j != i) rest.push_back(j);
            out.add_component(std::move(rest), pos % 2 == 0 ? c : -c);
        }
        return out;
    }

    /// Componentwise coordinate derivative.
    Multivector x_derivative(unsigned i) const {
        Multivector out(dim_, degree_);
        for (const auto& [idx, c] : components_) out.add_component(idx, c.partial(i));
        return out;
    }

    /// Evaluation on exact covectors: A(a1,...,ak) via minor determinants.
    Polynomial evaluate(const std::vector<std::vector<Polynomial>>& covectors) const {
        if (covectors.size() != degree_) throw std::invalid_argument("Multivector::evaluate: arity mismatch");
        Polynomial out(dim_);
        for (const auto& [idx, c] : components_) {
            out += c * minor_det(covectors, idx);
        }
        return out;
    }

    std::string str(const std::vector<std::string>* names = nullptr) const {
        if (components_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [idx, c] : components_) {
            if (!first) os << " + ";
            first = false;
            os << '(' << c.str(names) << ')';
            for (std::size_t k = 0; k < idx.size(); ++k) {
                os << (k == 0 ? " * " : "^");
                os << 'd' << Polynomial::var_name(idx[k], names);
            }
        }
        return os.str();
    }

  private:
    Polynomial minor_det(const std::vector<std::vector<Polynomial>>& cov, const IndexTuple& idx) const {
        // det( cov[r][idx[c]] ), expanded by the first row.
        unsigned k = static_cast<unsigned>(idx.size());
        if (k == 0) return Polynomial::one(dim_);
        std::vector<unsigned> rows(k);
        for (unsigned r = 0; r < k; ++r) rows[r] = r;
        return minor_det_rec(cov, idx, rows);
    }
    Polynomial minor_det_rec(const std::vector<std::vector<Polynomial>>& cov, IndexTuple cols,
                             std::vector<unsigned> rows) const {
        if (cols.size() == 1) return cov[rows[0]][cols[0]];
        Polynomial out(dim_);
        for (std::size_t c = 0; c < cols.size(); ++c) {
            IndexTuple subcols;
            for (std::size_t j = 0; j < cols.size(); ++j)
                if (j != c) subcols.push_back(cols[j]);
            std::vector<unsigned> subrows(rows.begin() + 1, rows.end());
            Polynomial cofactor = cov[rows[0]][cols[c]] * minor_det_rec(cov, subcols, subrows);
            if (c % 2 == 0)
                out += cofactor;
            else
                out -= cofactor;
        }
        return out;
    }

    void check_compat(const Multivector& o) const {
        if (dim_ != o.dim_ || degree_ != o.degree_)
            throw std::invalid_argument("Multivector: dimension/degree mismatch");
    }

    unsigned dim_ = 0;
    unsigned degree_ = 0;
    CompMap components_;
};

/// Divergence operator of the flat volume in the odd-coordinate
/// representation of multivectors.  It generates the Schouten bracket.
inline Multivector bv_laplacian(const Multivector& a) {
    Multivector out(a.dim(), a.degree() == 0 ? 0 : a.degree() - 1);
    for (unsigned i = 0; i < a.dim(); ++i) out += a.theta_derivative(i).x_derivative(i);
    return out;
}

/// Schouten bracket of multivector fields.
///
/// Convention: with Δ the flat divergence above and |A| = a,
///   [A, B] = (-1)^{a+1} ( Δ(A∧B) − ΔA∧B − (-1)^a A∧ΔB ),
/// which extends the Lie bracket of vector fields, satisfies [X, f] = X(f),
/// graded antisymmetry [A,B] = -(-1)^{(a-1)(b-1)}[B,A], the graded Leibniz
/// rule, and graded Jacobi.  [π,π] = 0 characterizes Poisson bivectors.
inline Multivector schouten(const Multivector& a, const Multivector& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("schouten: dimension mismatch");
    unsigned deg_a = a.degree(), deg_b = b.degree();
    unsigned out_deg = deg_a + deg_b == 0 ? 0 : deg_a + deg_b - 1;
    Multivector out(a.dim(), out_deg);
    if (a.is_zero() || b.is_zero()) return out;
    // Empty intermediates can carry an off-by-one nominal degree (Δ of a
    // function); accumulate only nonzero pieces.
    auto acc = [&out](const Multivector& m, bool negate) {
        if (m.is_zero()) return;
        if (negate)
            out -= m;
        else
            out += m;
    };
    bool a_even = deg_a % 2 == 0;
    acc(bv_laplacian(a ^ b), false);
    acc(bv_laplacian(a) ^ b, true);
    acc(a ^ bv_laplacian(b), a_even);
    if (a_even) out = -out;  // overall (-1)^{a+1}
    return out;
}

/// Full antisymmetric component pi^{ij} of a bivector (signed, any order).
inline Polynomial bivector_entry(const Multivector& pi, unsigned i, unsigned j) {
    return pi.component({i, j});
}

/// Bundle map alpha -> pi(., alpha) on one-form component vectors:
/// X^i = sum_j pi^{ij} alpha_j.
inline std::vector<Polynomial> pi_tilde_components(const Multivector& pi,
                                                   const std::vector<Polynomial>& alpha) {
    unsigned d = pi.dim();
    std::vector<Polynomial> x(d, Polynomial(d));
    for (unsigned i = 0; i < d; ++i)
        for (unsigned j = 0; j < d; ++j) {
            if (i == j) continue;
            x[i] += bivector_entry(pi, i, j) * alpha[j];
        }
    return x;
}

/// Hamiltonian-type vector field of f: pi~(df) = pi(., df).
inline Multivector hamiltonian(const Multivector& pi, const Polynomial& f) {
    unsigned d = pi.dim();
    std::vector<Polynomial> df(d, Polynomial(d));
    for (unsigned i = 0; i < d; ++i) df[i] = f.partial(i);
    auto x = pi_tilde_components(pi, df);
    Multivector out(d, 1);
    for (unsigned i = 0; i < d; ++i) out.add_component({i}, x[i]);
    return out;
}

/// Poisson bracket {f, g} = pi(df, dg).
inline Polynomial poisson_bracket(const Multivector& pi, const Polynomial& f, const Polynomial& g) {
    unsigned d = pi.dim();
    std::vector<Polynomial> df(d, Polynomial(d)), dg(d, Polynomial(d));
    for (unsigned i = 0; i < d; ++i) {
        df[i] = f.partial(i);
        dg[i] = g.partial(i);
    }
    return pi.evaluate({df, dg});
}

inline bool is_poisson(const Multivector& pi) {
    if (pi.degree() != 2) return false;
    return schouten(pi, pi).is_zero();
}

/// Poisson differential.
///
/// Sign convention: d_pi A := [A, pi], which equals [pi, A] up to the sign
/// (-1)^{deg A}.  With this choice d_pi f is the hamiltonian-type field of f,
/// d_pi ∘ d_pi = 0, the first-order gauge shift of a formal Poisson structure
/// is pi1 - d_pi X1, and the relative bivector of two star products
/// gauge-shifts by -d_pi X.  Requires [pi, pi] = 0.
inline Multivector d_pi(const Multivector& pi, const Multivector& a) {
    if (!is_poisson(pi)) throw std::invalid_argument("d_pi: bivector is not Poisson");
    return schouten(a, pi);
}

/// Formal Poisson structure pi_lambda = pi + lambda pi_1 + ...: a truncated
/// series of bivector fields.
struct FormalPoisson {
    TruncatedSeries<Multivector> coeffs;

    explicit FormalPoisson(TruncatedSeries<Multivector> c) : coeffs(std::move(c)) {}
    FormalPoisson(unsigned dim, unsigned order) : coeffs(order, Multivector(dim, 2)) {}

    unsigned dim() const { return coeffs[0].dim(); }
    unsigned order() const { return coeffs.order(); }
};

/// Integrability diagnostic: the lambda-order defects of [pi_l, pi_l],
/// together with the order-1 consequence d_pi pi_1 = 0 reported separately.
struct FormalPoissonReport {
    std::vector<Multivector> defects;  // trivector defect at each lambda order
    bool integrable = true;
    bool first_order_closed = true;  // [pi_1, pi] = 0

    std::vector<unsigned> failing_orders() const {
        std::vector<unsigned> out;
        for (unsigned k = 0; k < defects.size(); ++k)
            if (!defects[k].is_zero()) out.push_back(k);
        return out;
    }
};

inline FormalPoissonReport check_formal_poisson(const FormalPoisson& pl) {
    FormalPoissonReport rep;
    unsigned n = pl.order();
    for (unsigned k = 0; k <= n; ++k) {
        Multivector defect(pl.dim(), 3);
        for (unsigned r = 0; r <= k; ++r) defect += schouten(pl.coeffs[r], pl.coeffs[k - r]);
        if (!defect.is_zero()) rep.integrable = false;
        rep.defects.push_back(std::move(defect));
    }
    if (n >= 1) rep.first_order_closed = schouten(pl.coeffs[1], pl.coeffs[0]).is_zero();
    return rep;
}

}  // namespace starq
