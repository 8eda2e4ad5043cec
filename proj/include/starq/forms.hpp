#pragma once

#include "starq/multivector.hpp"

namespace starq {

/// Differential k-form with polynomial components on sorted index tuples;
/// shares the storage discipline of Multivector.
class DiffForm {
  public:
    using CompMap = std::map<IndexTuple, Polynomial>;

    DiffForm() = default;
    DiffForm(unsigned dim, unsigned degree) : dim_(dim), degree_(degree) {}

    static DiffForm function(const Polynomial& f) {
        DiffForm w(f.dim(), 0);
        w.add_component({}, f);
        return w;
    }
    static DiffForm basis(unsigned dim, IndexTuple idx, const Polynomial& coef) {
        DiffForm w(dim, static_cast<unsigned>(idx.size()));
        w.add_component(std::move(idx), coef);
        return w;
    }

    unsigned dim() const { return dim_; }
    unsigned degree() const { return degree_; }
    bool is_zero() const { return components_.empty(); }
    const CompMap& components() const { return components_; }

    void add_component(IndexTuple idx, const Polynomial& coef) {
        if (idx.size() != degree_) throw std::invalid_argument("DiffForm: tuple size != degree");
        if (coef.is_zero()) return;
        int sign = detail::sort_tuple(idx);
        if (sign == 0) return;
        Polynomial c = sign == 1 ? coef : -coef;
        auto [it, inserted] = components_.try_emplace(std::move(idx), c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) components_.erase(it);
        }
    }

    Polynomial component(IndexTuple idx) const {
        int sign = detail::sort_tuple(idx);
        if (sign == 0) return Polynomial(dim_);
        auto it = components_.find(idx);
        if (it == components_.end()) return Polynomial(dim_);
        return sign == 1 ? it->second : -it->second;
    }

    DiffForm& operator+=(const DiffForm& o) {
        if (dim_ != o.dim_ || degree_ != o.degree_) throw std::invalid_argument("DiffForm: mismatch");
        for (const auto& [idx, c] : o.components_) add_component(idx, c);
        return *this;
    }
    DiffForm& operator-=(const DiffForm& o) {
        if (dim_ != o.dim_ || degree_ != o.degree_) throw std::invalid_argument("DiffForm: mismatch");
        for (const auto& [idx, c] : o.components_) add_component(idx, -c);
        return *this;
    }
    friend DiffForm operator+(DiffForm a, const DiffForm& b) { return a += b; }
    friend DiffForm operator-(DiffForm a, const DiffForm& b) { return a -= b; }
    DiffForm operator-() const {
        DiffForm w(dim_, degree_);
        for (const auto& [idx, c] : components_) w.components_[idx] = -c;
        return w;
    }

    friend bool operator==(const DiffForm& a, const DiffForm& b) {
        return a.dim_ == b.dim_ && a.degree_ == b.degree_ && a.components_ == b.components_;
    }
    friend bool operator!=(const DiffForm& a, const DiffForm& b) { return !(a == b); }

  private:
    unsigned dim_ = 0;
    unsigned degree_ = 0;
    CompMap components_;
};

/// Exterior derivative: (dw)_{j, I} picks up d(w_I)/dx_j with the usual
/// insertion signs (handled by tuple sorting).
inline DiffForm exterior_d(const DiffForm& w) {
    DiffForm out(w.dim(), w.degree() + 1);
    if (w.degree() + 1 > w.dim()) return out;
    for (const auto& [idx, c] : w.components()) {
        for (unsigned j = 0; j < w.dim(); ++j) {
            IndexTuple nidx;
            nidx.push_back(j);
            nidx.insert(nidx.end(), idx.begin(), idx.end());
            out.add_component(std::move(nidx), c.partial(j));
        }
    }
    return out;
}

/// Interior product with a vector field: (i_X w)(Y1..) = w(X, Y1..).
inline DiffForm interior(const Multivector& x, const DiffForm& w) {
    if (x.degree() != 1) throw std::invalid_argument("interior: first argument must be a vector field");
    DiffForm out(w.dim(), w.degree() == 0 ? 0 : w.degree() - 1);
    if (w.degree() == 0) return out;
    for (const auto& [idx, c] : w.components()) {
        for (std::size_t pos = 0; pos < idx.size(); ++pos) {
            IndexTuple rest;
            for (std::size_t j = 0; j < idx.size(); ++j)
                if (j != pos) rest.push_back(idx[j]);
            Polynomial xi = x.component({idx[pos]});
            Polynomial term = xi * c;
            out.add_component(std::move(rest), pos % 2 == 0 ? term : -term);
        }
    }
    return out;
}

/// Lie derivative on forms via Cartan's rule L_X = d ∘ i_X + i_X ∘ d.
inline DiffForm lie_derivative(const Multivector& x, const DiffForm& w) {
    DiffForm a = exterior_d(interior(x, w));
    DiffForm b = interior(x, exterior_d(w));
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    return a + b;
}

/// One-form with a plain component list (coefficients of dx_i).
struct OneForm {
    std::vector<Polynomial> comps;

    OneForm() = default;
    explicit OneForm(unsigned dim) : comps(dim, Polynomial(dim)) {}
    explicit OneForm(std::vector<Polynomial> c) : comps(std::move(c)) {}

    unsigned dim() const { return static_cast<unsigned>(comps.size()); }

    static OneForm d(const Polynomial& f) {
        OneForm a(f.dim());
        for (unsigned i = 0; i < f.dim(); ++i) a.comps[i] = f.partial(i);
        return a;
    }
    static OneForm dx(unsigned dim, unsigned i) {
        OneForm a(dim);
        a.comps[i] = Polynomial::one(dim);
        return a;
    }

    DiffForm as_form() const {
        DiffForm w(dim(), 1);
        for (unsigned i = 0; i < dim(); ++i) w.add_component({i}, comps[i]);
        return w;
    }
    static OneForm from_form(const DiffForm& w) {
        if (w.degree() != 1) throw std::invalid_argument("OneForm: degree must be 1");
        OneForm a(w.dim());
        for (unsigned i = 0; i < w.dim(); ++i) a.comps[i] = w.component({i});
        return a;
    }

    OneForm& operator+=(const OneForm& o) {
        for (unsigned i = 0; i < dim(); ++i) comps[i] += o.comps[i];
        return *this;
    }
    OneForm& operator-=(const OneForm& o) {
        for (unsigned i = 0; i < dim(); ++i) comps[i] -= o.comps[i];
        return *this;
    }
    friend OneForm operator+(OneForm a, const OneForm& b) { return a += b; }
    friend OneForm operator-(OneForm a, const OneForm& b) { return a -= b; }

    OneForm scaled(const Polynomial& f) const {
        OneForm a(dim());
        for (unsigned i = 0; i < dim(); ++i) a.comps[i] = comps[i] * f;
        return a;
    }

    bool is_zero() const {
        for (const auto& c : comps)
            if (!c.is_zero()) return false;
        return true;
    }

    friend bool operator==(const OneForm& a, const OneForm& b) { return a.comps == b.comps; }
    friend bool operator!=(const OneForm& a, const OneForm& b) { return !(a == b); }
};

inline Multivector pi_tilde(const Multivector& pi, const OneForm& alpha) {
    auto x = pi_tilde_components(pi, alpha.comps);
    Multivector out(pi.dim(), 1);
    for (unsigned i = 0; i < pi.dim(); ++i) out.add_component({i}, x[i]);
    return out;
}

inline Polynomial pairing(const Multivector& pi, const OneForm& a, const OneForm& b) {
    return pi.evaluate({a.comps, b.comps});
}

/// Koszul bracket of one-forms:
///   [a, b] = -L_{pi~(a)} b + L_{pi~(b)} a - d(pi(a, b)).
/// Restricts to [df, dg] = d{f, g}; -pi~ intertwines it with the Lie bracket
/// of vector fields when pi is Poisson.
inline OneForm koszul(const Multivector& pi, const OneForm& alpha, const OneForm& beta) {
    Multivector xa = pi_tilde(pi, alpha);
    Multivector xb = pi_tilde(pi, beta);
    DiffForm out = -lie_derivative(xa, beta.as_form()) + lie_derivative(xb, alpha.as_form());
    Polynomial pab = pairing(pi, alpha, beta);
    out -= exterior_d(DiffForm::function(pab));
    return OneForm::from_form(out);
}

/// The induced map on higher forms, Λ^k(pi~): on a 2-form sum w_{ij}
/// dx_i∧dx_j it returns sum w_{ij} pi~(dx_i)∧pi~(dx_j).
inline Multivector pi_star_form(const Multivector& pi, const DiffForm& w) {
    unsigned d = pi.dim();
    Multivector out(d, w.degree());
    std::vector<Multivector> images;
    for (unsigned i = 0; i < d; ++i) images.push_back(pi_tilde(pi, OneForm::dx(d, i)));
    for (const auto& [idx, c] : w.components()) {
        Multivector wedge = Multivector::function(Polynomial::one(d));
        for (unsigned i : idx) wedge = wedge ^ images[i];
        out += wedge.scaled(c);
    }
    return out;
}

}  // namespace starq
