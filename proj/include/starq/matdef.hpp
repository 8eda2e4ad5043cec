#pragma once

#include <cmath>

#include "starq/matrix.hpp"
#include "starq/section_ops.hpp"

namespace starq {

/// An idempotent of the deformed matrix algebra lying over a classical one:
/// qP * qP = qP mod lambda^{N+1} and qP = P0 + O(lambda).
struct LiftedIdempotent {
    MatPoly p0;
    MatSeries qp;

    unsigned n() const { return p0.rows(); }
    unsigned order() const { return qp.order(); }
};

inline MatSeries idempotent_defect(const StarProduct& s, const MatSeries& e) {
    return mat_star_mul(s, e, e) - e;
}

/// Deforms an idempotent by the quadratically convergent iteration
/// E <- 3 E*E - 2 E*E*E; ceil(log2(N+1)) steps flatten the defect mod
/// lambda^{N+1}.
inline LiftedIdempotent lift_idempotent(const MatPoly& p0, const StarProduct& s) {
    if (!p0.is_idempotent()) throw std::invalid_argument("lift_idempotent: P0 is not idempotent");
    unsigned n = s.order();
    MatSeries e = constant_mat_series(n, p0);
    unsigned steps = 0;
    while ((1u << steps) < n + 1) ++steps;
    for (unsigned i = 0; i < steps; ++i) {
        MatSeries e2 = mat_star_mul(s, e, e);
        MatSeries e3 = mat_star_mul(s, e2, e);
        MatSeries next(n, MatPoly(p0.rows(), p0.cols(), p0.dim()));
        for (unsigned k = 0; k <= n; ++k) next[k] = e2[k].scaled(GaussianRational(3)) - e3[k].scaled(GaussianRational(2));
        e = std::move(next);
    }
    MatSeries defect = idempotent_defect(s, e);
    for (unsigned k = 0; k <= n; ++k)
        if (!defect[k].is_zero()) throw std::domain_error("lift_idempotent: Newton iteration did not converge");
    return {p0, std::move(e)};
}

/// Independent order-by-order construction: writing the idempotency
/// constraint at lambda^k as P_k - P0 P_k - P_k P0 = K_k, the off-corner
/// Peirce blocks of K_k must vanish and
///   P_k = (1-P0) K_k (1-P0) - P0 K_k P0
/// is a solution.  Representatives may differ from the Newton lift; only the
/// idempotent property is canonical.
inline LiftedIdempotent lift_idempotent_linear_solve(const MatPoly& p0, const StarProduct& s) {
    if (!p0.is_idempotent()) throw std::invalid_argument("lift_idempotent: P0 is not idempotent");
    unsigned n = s.order();
    unsigned sz = p0.rows();
    MatPoly one = MatPoly::identity(sz, p0.dim());
    MatSeries p = constant_mat_series(n, p0);
    for (unsigned k = 1; k <= n; ++k) {
        // K_k: all terms of (P*P)_k except P0 P_k + P_k P0
        MatPoly kk(sz, sz, p0.dim());
        for (unsigned r = 0; r <= k; ++r)
            for (unsigned a = 0; a + r <= k; ++a) {
                unsigned b = k - r - a;
                if (r == 0 && (a == k || b == k)) continue;
                kk += apply_bidiff(s.op(r), p[a], p[b]);
            }
        MatPoly off1 = p0 * kk * (one - p0);
        MatPoly off2 = (one - p0) * kk * p0;
        if (!off1.is_zero() || !off2.is_zero())
            throw std::domain_error("lift_idempotent_linear_solve: inconsistent constraint (non-associative input?)");
        p[k] = (one - p0) * kk * (one - p0) - p0 * kk * p0;
    }
    MatSeries defect = idempotent_defect(s, p);
    for (unsigned k = 0; k <= n; ++k)
        if (!defect[k].is_zero()) throw std::domain_error("lift_idempotent_linear_solve: residual defect");
    return {p0, std::move(p)};
}

/// Fullness via the trace criterion: over a polynomial function ring on a
/// connected chart, an idempotent is full iff its trace is a nonzero
/// constant (pointwise rank >= 1 everywhere).
inline bool is_full(const MatPoly& p0) {
    Polynomial t = p0.trace();
    return t.is_constant() && !t.is_zero();
}

inline bool is_section(const MatPoly& p0, const MatPoly& s0) { return p0 * s0 == s0; }
inline bool is_corner(const MatPoly& p0, const MatPoly& l0) { return p0 * l0 * p0 == l0; }

/// J: P0 x -> qP * x.
inline MatSeries j_map(const LiftedIdempotent& l, const StarProduct& s, const MatPoly& s0) {
    if (!is_section(l.p0, s0)) throw std::invalid_argument("j_map: input is not a section of P0");
    return mat_star_mul(s, l.qp, constant_mat_series(s.order(), s0));
}

/// Order-by-order inverse of J on its image.
inline MatSeries j_inverse(const LiftedIdempotent& l, const StarProduct& s, const MatSeries& y) {
    unsigned n = s.order();
    MatSeries x(n, MatPoly(y[0].rows(), y[0].cols(), y[0].dim()));
    for (unsigned k = 0; k <= n; ++k) {
        // subtract all contributions of x_{<k} to (qP * x)_k
        MatPoly acc = y[k];
        for (unsigned r = 0; r <= k; ++r)
            for (unsigned a = 0; a + r <= k; ++a) {
                unsigned q = k - r - a;
                if (q == k) continue;  // the x_k term itself: C_0(P_0, x_k) = x_k
                acc -= apply_bidiff(s.op(r), l.qp[a], x[q]);
            }
        x[k] = std::move(acc);
    }
    return x;
}

/// I: P0 L P0 -> qP * L * qP.
inline MatSeries i_map(const LiftedIdempotent& l, const StarProduct& s, const MatPoly& l0) {
    if (!is_corner(l.p0, l0)) throw std::invalid_argument("i_map: input is not a corner element");
    MatSeries mid = constant_mat_series(s.order(), l0);
    return mat_star_mul(s, mat_star_mul(s, l.qp, mid), l.qp);
}

inline MatSeries i_map_series(const LiftedIdempotent& l, const StarProduct& s, const MatSeries& mid) {
    return mat_star_mul(s, mat_star_mul(s, l.qp, mid), l.qp);
}

/// Order-by-order inverse of I on its image: x_k = P0 (y_k - K_k) P0 with
/// K_k the contributions of x_{<k} to (qP * x * qP)_k.
inline MatSeries i_inverse(const LiftedIdempotent& l, const StarProduct& s, const MatSeries& y) {
    unsigned n = s.order();
    unsigned sz = l.n();
    MatSeries x(n, MatPoly(sz, sz, l.p0.dim()));
    for (unsigned k = 0; k <= n; ++k) {
        MatSeries padded = x;  // x_k is still zero here
        MatPoly kk = i_map_series(l, s, padded)[k];
        x[k] = l.p0 * (y[k] - kk) * l.p0;
    }
    return x;
}

/// The induced deformation of the corner algebra P0 M_n P0:
/// L *' S = I^{-1}( I(L) * I(S) ), evaluated operationally.
class CornerStar {
  public:
    CornerStar(LiftedIdempotent l, const StarProduct& s) : l_(std::move(l)), s_(&s) {}

    const LiftedIdempotent& lifted() const { return l_; }

    MatSeries mul(const MatPoly& l0, const MatPoly& s0) const {
        return mul_series(constant_mat_series(s_->order(), l0), constant_mat_series(s_->order(), s0));
    }

    MatSeries mul_series(const MatSeries& a, const MatSeries& b) const {
        for (unsigned k = 0; k <= a.order(); ++k)
            if (!is_corner(l_.p0, a[k]) || !is_corner(l_.p0, b[k]))
                throw std::invalid_argument("CornerStar: operand is not a corner element");
        MatSeries ia = i_map_series(l_, *s_, a);
        MatSeries ib = i_map_series(l_, *s_, b);
        return i_inverse(l_, *s_, mat_star_mul(*s_, ia, ib));
    }

    /// B_r(L0, S0): the lambda^r coefficient of L0 *' S0.
    MatPoly b(unsigned r, const MatPoly& l0, const MatPoly& s0) const { return mul(l0, s0)[r]; }

  private:
    LiftedIdempotent l_;
    const StarProduct* s_;
};

/// Matrix bracket {M,N} = C_1(M,N) - C_1(N,M).
inline MatPoly matrix_bracket(const StarProduct& s, const MatPoly& m, const MatPoly& n) {
    return apply_bidiff(s.op(1), m, n) - apply_bidiff(s.op(1), n, m);
}

/// The star product induced on the base algebra through the center of the
/// rank-1 corner: f *'' g = Psi^{-1}( I^{-1}( I(f P0) * I(g P0) ) ) with
/// Psi(f) = f P0.  Computed at the operator level, so the result is an
/// honest list of bidifferential operators; throws if some coefficient of
/// the corner product fails to be a multiple of P0 (the projection is not
/// rank one).
inline StarProduct center_star(const LiftedIdempotent& l, const StarProduct& s) {
    Polynomial tr = l.p0.trace();
    if (!(tr.is_constant() && tr.constant_value() == GaussianRational(1)))
        throw std::invalid_argument("center_star: projection must have trace 1");
    unsigned n = s.order(), sz = l.n(), d = s.dim();

    // I∘Psi as a series of matrix-coefficient linear operators in f
    std::vector<MatLinOp> w(n + 1, MatLinOp(sz, sz, d));
    w[0] = MatLinOp::from_matrix(l.p0);
    std::vector<MatLinOp> u(n + 1, MatLinOp(sz, sz, d));
    for (unsigned k = 0; k <= n; ++k)
        for (unsigned r = 0; r <= k; ++r)
            for (unsigned a = 0; a + r <= k; ++a) u[k] += bidiff_mat_linop(s.op(r), l.qp[a], w[k - r - a], sz);
    std::vector<MatLinOp> ipsi(n + 1, MatLinOp(sz, sz, d));
    for (unsigned k = 0; k <= n; ++k)
        for (unsigned r = 0; r <= k; ++r)
            for (unsigned a = 0; a + r <= k; ++a) ipsi[k] += bidiff_linop_mat(s.op(r), u[a], l.qp[k - r - a]);

    // Z = I(f P0) * I(g P0), operator-level
    std::vector<MatBiOp> z(n + 1, MatBiOp(sz, sz, d));
    for (unsigned k = 0; k <= n; ++k)
        for (unsigned r = 0; r <= k; ++r)
            for (unsigned a = 0; a + r <= k; ++a)
                z[k] += bidiff_linop_linop(s.op(r), ipsi[a], ipsi[k - r - a], sz, sz);

    // I^{-1}, order by order on operators
    std::vector<MatBiOp> corner(n + 1, MatBiOp(sz, sz, d));
    for (unsigned k = 0; k <= n; ++k) {
        // (qP * corner * qP)_k using corner_{<k} only
        MatBiOp kk(sz, sz, d);
        {
            std::vector<MatBiOp> left(k + 1, MatBiOp(sz, sz, d));
            for (unsigned m = 0; m <= k; ++m)
                for (unsigned r = 0; r <= m; ++r)
                    for (unsigned a = 0; a + r <= m; ++a) {
                        unsigned q = m - r - a;
                        if (q >= k) continue;  // corner_k not known yet; excluded by construction
                        left[m] += bidiff_mat_biop(s.op(r), l.qp[a], corner[q]);
                    }
            for (unsigned r = 0; r <= k; ++r)
                for (unsigned a = 0; a + r <= k; ++a) kk += bidiff_biop_mat(s.op(r), left[a], l.qp[k - r - a]);
        }
        MatBiOp delta = z[k] - kk;
        corner[k] = delta.left_mul(l.p0).right_mul(l.p0);
    }

    // scalar extraction: each coefficient must be (scalar) * P0
    std::vector<BidiffOp> ops;
    for (unsigned k = 0; k <= n; ++k) {
        BidiffOp ck(d);
        for (const auto& [key, coef] : corner[k].terms()) {
            Polynomial c = coef.trace();
            if (coef != l.p0.scaled(c))
                throw std::domain_error("center_star: corner product is not central (rank != 1?)");
            ck.add_term(key.first, key.second, c);
        }
        ops.push_back(std::move(ck));
    }
    return StarProduct(std::move(ops), s.claimed_pi());
}

}  // namespace starq
