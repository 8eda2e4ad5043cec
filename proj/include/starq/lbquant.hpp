#pragma once

#include "starq/forms.hpp"
#include "starq/matdef.hpp"

namespace starq {

/// Contravariant connection on the line bundle cut out by a rank-1
/// idempotent, stored as the bilinear operator (s, f) |-> D(s, f); the
/// section slot is already restricted to the image of P0 and the function
/// slot is first order.
struct ContravariantConnection {
    MatBiOp op;  // slots (section, function)
    MatPoly p0;

    MatPoly apply(const MatPoly& s, const Polynomial& f) const { return op.apply_section(s, f); }

    /// D_alpha s, substituting the one-form for df.
    MatPoly apply_form(const MatPoly& s, const OneForm& alpha) const {
        unsigned d = p0.dim();
        MatPoly out(p0.rows(), 1, d);
        for (const auto& [k, c] : op.terms()) {
            unsigned j = d;
            for (unsigned t = 0; t < d; ++t)
                if (k.second.e[t]) j = t;
            out += (c * s.partial(k.first)).scaled(alpha.comps[j]);
        }
        return out;
    }
};

/// Curvature of a contravariant connection:
/// Theta(a, b) s = D_a D_b s - D_b D_a s + D_{[a,b]} s, with the Koszul
/// bracket of one-forms downstairs.
inline MatPoly curvature(const ContravariantConnection& d, const Multivector& pi, const OneForm& alpha,
                         const OneForm& beta, const MatPoly& s) {
    MatPoly t1 = d.apply_form(d.apply_form(s, beta), alpha);
    MatPoly t2 = d.apply_form(d.apply_form(s, alpha), beta);
    MatPoly t3 = d.apply_form(s, koszul(pi, alpha, beta));
    return t1 - t2 + t3;
}

/// The adapted connection D(s,f) = P0 {s,f} = ∇_{X_f} s with ∇ = P0 d.
inline ContravariantConnection adapted_connection(const MatPoly& p0, const Multivector& pi) {
    Polynomial tr = p0.trace();
    if (!(tr.is_constant() && tr.constant_value() == GaussianRational(1)))
        throw std::invalid_argument("adapted_connection: projection must have trace 1");
    unsigned d = pi.dim();
    MatBiOp op(p0.rows(), p0.cols(), d);
    for (unsigned i = 0; i < d; ++i)
        for (unsigned j = 0; j < d; ++j) {
            if (i == j) continue;
            Polynomial pij = bivector_entry(pi, i, j);
            if (pij.is_zero()) continue;
            Monomial ei(d), ej(d);
            ei.e[i] = 1;
            ej.e[j] = 1;
            op.add_term(ei, ej, p0.scaled(pij));
        }
    return {op.precompose_slot1(p0), p0};
}

/// Bimodule quantization of the line bundle P0 A^n: the right and left
/// module actions
///   s • f  = J^{-1}( J(s) * f ),      J(s) = qP * s,
///   f •' s = J^{-1}( I(T f P0) * J(s) ),
/// held as series of bilinear operators with slots (section, function).
/// T is the equivalence normalizing the induced corner star product so that
/// C_1' = C_1.
class QuantizedLineBundle {
  public:
    QuantizedLineBundle(const LiftedIdempotent& lifted, const StarProduct& base)
        : lifted_(lifted),
          base_(base),
          corner_(normalize_center(lifted, base)),
          right_(base.order() + 1, MatBiOp(lifted.n(), 1, base.dim())),
          left_(base.order() + 1, MatBiOp(lifted.n(), 1, base.dim())) {
        unsigned n = base.order(), sz = lifted.n(), d = base.dim();
        MatPoly id = MatPoly::identity(sz, d);

        // J_k as operators on the section slot
        std::vector<MatLinOp> j(n + 1, MatLinOp(sz, sz, d));
        MatLinOp idlin = MatLinOp::from_matrix(id);
        for (unsigned k = 0; k <= n; ++k)
            for (unsigned r = 0; r <= k; ++r) j[k] += bidiff_mat_linop(base.op(r), lifted.qp[k - r], idlin, sz);

        // right action: J^{-1}( J(s) * f )
        std::vector<MatBiOp> y(n + 1, MatBiOp(sz, 1, d));
        for (unsigned k = 0; k <= n; ++k)
            for (unsigned r = 0; r <= k; ++r) y[k] += bidiff_linop_fun(base.op(r), j[k - r], sz, 1);
        right_ = j_inverse_ops(y);

        // I∘Psi∘T on the function slot
        std::vector<MatLinOp> w(n + 1, MatLinOp(sz, sz, d));
        w[0] = MatLinOp::from_matrix(lifted.p0);
        std::vector<MatLinOp> u(n + 1, MatLinOp(sz, sz, d));
        for (unsigned k = 0; k <= n; ++k)
            for (unsigned r = 0; r <= k; ++r)
                for (unsigned a = 0; a + r <= k; ++a) u[k] += bidiff_mat_linop(base.op(r), lifted.qp[a], w[k - r - a], sz);
        std::vector<MatLinOp> ipsi(n + 1, MatLinOp(sz, sz, d));
        for (unsigned k = 0; k <= n; ++k)
            for (unsigned r = 0; r <= k; ++r)
                for (unsigned a = 0; a + r <= k; ++a) ipsi[k] += bidiff_linop_mat(base.op(r), u[a], lifted.qp[k - r - a]);
        std::vector<MatLinOp> ipsit(n + 1, MatLinOp(sz, sz, d));
        for (unsigned k = 0; k <= n; ++k)
            for (unsigned r = 0; r <= k; ++r)
                ipsit[k] += matlinop_compose_lindiff(ipsi[r], corner_transform_.at(k - r), sz, sz, d);

        // left action: J^{-1}( IPsiT(f) * J(s) ), stored with slots (s, f)
        std::vector<MatBiOp> z(n + 1, MatBiOp(sz, 1, d));
        for (unsigned k = 0; k <= n; ++k) {
            for (unsigned r = 0; r <= k; ++r)
                for (unsigned a = 0; a + r <= k; ++a) {
                    MatBiOp fs = bidiff_linop_linop(base.op(r), ipsit[a], j[k - r - a], sz, sz);
                    z[k] += fs.swap_slots();
                }
        }
        left_ = j_inverse_ops(z);

        // leading order must be the pointwise action on sections
        MatBiOp mult0(sz, 1, d);
        mult0.add_term(Monomial(d), Monomial(d), lifted.p0);
        if (right_[0].precompose_slot1(lifted.p0) != mult0 || left_[0].precompose_slot1(lifted.p0) != mult0)
            throw std::domain_error("QuantizedLineBundle: leading order is not the pointwise action");
    }

    const LiftedIdempotent& lifted() const { return lifted_; }
    const StarProduct& base_star() const { return base_; }
    const StarProduct& corner_star() const { return corner_; }
    const MatPoly& p0() const { return lifted_.p0; }
    unsigned order() const { return base_.order(); }

    /// lambda^r coefficient operators of the two actions, slots (s, f).
    const MatBiOp& right_op(unsigned r) const { return right_.at(r); }
    const MatBiOp& left_op(unsigned r) const { return left_.at(r); }

    /// s • f as a truncated series of section columns.
    MatSeries right_action(const MatPoly& s, const Polynomial& f) const {
        MatSeries out(order(), MatPoly(lifted_.n(), 1, base_.dim()));
        for (unsigned k = 0; k <= order(); ++k) out[k] = right_[k].apply_section(s, f);
        return out;
    }
    MatSeries left_action(const Polynomial& f, const MatPoly& s) const {
        MatSeries out(order(), MatPoly(lifted_.n(), 1, base_.dim()));
        for (unsigned k = 0; k <= order(); ++k) out[k] = left_[k].apply_section(s, f);
        return out;
    }

    /// Defect operators of the three bimodule relations at each order, with
    /// the section slot restricted to the image of P0.  All must vanish.
    std::vector<MatTriOp> relation_defects() const {
        unsigned n = order(), sz = lifted_.n(), d = base_.dim();
        std::vector<MatTriOp> out;
        for (unsigned k = 0; k <= n; ++k) {
            MatTriOp r1(sz, 1, d), r2(sz, 1, d), r3(sz, 1, d);
            for (unsigned r = 0; r <= k; ++r) {
                unsigned p = k - r;
                // (f *' g) •' s = f •' (g •' s)
                r1 += subst_slot2(left_[r], corner_.op(p));
                r1 -= subst_slot1(left_[r], left_[p]);
                // s • (f * g) = (s • f) • g
                r2 += subst_slot2(right_[r], base_.op(p));
                r2 -= subst_slot1(right_[r], right_[p]).swap23();
                // (f •' s) • g = f •' (s • g)
                r3 += subst_slot1(right_[r], left_[p]).swap23();
                r3 -= subst_slot1(left_[r], right_[p]);
            }
            out.push_back(r1.precompose_slot1(lifted_.p0));
            out.push_back(r2.precompose_slot1(lifted_.p0));
            out.push_back(r3.precompose_slot1(lifted_.p0));
        }
        return out;
    }

    bool relations_hold() const {
        for (const auto& d : relation_defects())
            if (!d.is_zero()) return false;
        return true;
    }

  private:
    StarProduct normalize_center(const LiftedIdempotent& lifted, const StarProduct& base) {
        auto [normalized, t] = normalize_c1(center_star(lifted, base));
        corner_transform_ = t;
        return normalized;
    }

    std::vector<MatBiOp> j_inverse_ops(const std::vector<MatBiOp>& y) const {
        unsigned n = base_.order(), sz = lifted_.n(), d = base_.dim();
        std::vector<MatBiOp> x(n + 1, MatBiOp(sz, 1, d));
        for (unsigned k = 0; k <= n; ++k) {
            MatBiOp acc = y[k];
            for (unsigned r = 0; r <= k; ++r)
                for (unsigned a = 0; a + r <= k; ++a) {
                    unsigned q = k - r - a;
                    if (q == k) continue;  // the x_k term itself
                    acc -= bidiff_mat_biop(base_.op(r), lifted_.qp[a], x[q]);
                }
            x[k] = std::move(acc);
        }
        return x;
    }

    LiftedIdempotent lifted_;
    StarProduct base_;
    EquivalenceTransform corner_transform_{0, 0};
    StarProduct corner_;
    std::vector<MatBiOp> right_;
    std::vector<MatBiOp> left_;
};

/// The semiclassical contravariant connection R(s,f) = R_1(s,f) - R_1'(f,s),
/// restricted to sections and validated against the connection axioms'
/// shape (first order in the function slot, section-valued).
inline ContravariantConnection extract_connection(const QuantizedLineBundle& q) {
    MatBiOp r = q.right_op(1) - q.left_op(1);
    MatBiOp restricted = r.precompose_slot1(q.p0());
    unsigned sz = q.p0().rows();
    MatPoly proj_out = MatPoly::identity(sz, q.p0().dim()) - q.p0();
    if (!restricted.left_mul(proj_out).is_zero())
        throw std::domain_error("extract_connection: R does not preserve sections");
    for (const auto& [k, c] : restricted.terms())
        if (k.second.degree() != 1)
            throw std::domain_error("extract_connection: R is not first order in the function slot");
    return {restricted, q.p0()};
}

struct CurvatureTheoremReport {
    bool pass = true;
    std::string detail;  // first failing term on failure
};

/// tau(f,g) s = Theta_R(df,dg) s for all coordinate pairs and the spanning
/// sections P0 e_k, with tau the relative bivector of the base and corner
/// star products.
inline CurvatureTheoremReport curvature_theorem_check(const QuantizedLineBundle& q) {
    CurvatureTheoremReport rep;
    const Multivector& pi = q.base_star().claimed_pi();
    Multivector t = tau(q.base_star(), q.corner_star());
    ContravariantConnection d = extract_connection(q);
    unsigned dim = q.base_star().dim(), n = q.p0().rows();
    for (unsigned i = 0; i < dim && rep.pass; ++i)
        for (unsigned j = i + 1; j < dim && rep.pass; ++j) {
            Polynomial tij = bivector_entry(t, i, j);
            for (unsigned k = 0; k < n && rep.pass; ++k) {
                MatPoly s = q.p0().column(k);
                MatPoly lhs = s.scaled(tij);
                MatPoly rhs = curvature(d, pi, OneForm::dx(dim, i), OneForm::dx(dim, j), s);
                if (lhs != rhs) {
                    rep.pass = false;
                    rep.detail = "pair (x" + std::to_string(i + 1) + ",x" + std::to_string(j + 1) +
                                 "), section " + std::to_string(k) + ": lhs = " + lhs.str() +
                                 ", rhs = " + rhs.str();
                }
            }
        }
    return rep;
}

/// The curvature bivector of a rank-1 bundle: Theta_D(dx_i, dx_j) acts on
/// sections as multiplication by a scalar theta_ij; returns the bivector of
/// those scalars.  Throws if the action fails to be scalar.
inline Multivector poisson_chern_representative(const ContravariantConnection& d, const Multivector& pi) {
    unsigned dim = pi.dim(), n = d.p0.rows();
    Multivector out(dim, 2);
    for (unsigned i = 0; i < dim; ++i)
        for (unsigned j = i + 1; j < dim; ++j) {
            MatPoly m(n, n, dim);
            for (unsigned k = 0; k < n; ++k) {
                MatPoly col = curvature(d, pi, OneForm::dx(dim, i), OneForm::dx(dim, j), d.p0.column(k));
                for (unsigned r = 0; r < n; ++r) m.at(r, k) = col.at(r, 0);
            }
            Polynomial theta = m.trace();
            if (m != d.p0.scaled(theta))
                throw std::domain_error("poisson_chern_representative: curvature is not scalar on sections");
            out.add_component({i, j}, theta);
        }
    return out;
}

}  // namespace starq
