#pragma once

#include "starq/polynomial.hpp"
#include "starq/series.hpp"
#include "starq/star.hpp"

namespace starq {

/// Matrix with polynomial entries (row-major).  Columns double as section
/// representatives of projective modules.
class MatPoly {
  public:
    MatPoly() = default;
    MatPoly(unsigned rows, unsigned cols, unsigned dim)
        : rows_(rows), cols_(cols), dim_(dim), entries_(rows * cols, Polynomial(dim)) {}

    static MatPoly identity(unsigned n, unsigned dim) {
        MatPoly m(n, n, dim);
        for (unsigned i = 0; i < n; ++i) m.at(i, i) = Polynomial::one(dim);
        return m;
    }

    unsigned rows() const { return rows_; }
    unsigned cols() const { return cols_; }
    unsigned dim() const { return dim_; }

    Polynomial& at(unsigned i, unsigned j) { return entries_[i * cols_ + j]; }
    const Polynomial& at(unsigned i, unsigned j) const { return entries_[i * cols_ + j]; }

    bool is_zero() const {
        for (const auto& e : entries_)
            if (!e.is_zero()) return false;
        return true;
    }

    MatPoly& operator+=(const MatPoly& o) {
        check_shape(o);
        for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += o.entries_[i];
        return *this;
    }
    MatPoly& operator-=(const MatPoly& o) {
        check_shape(o);
        for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= o.entries_[i];
        return *this;
    }
    friend MatPoly operator+(MatPoly a, const MatPoly& b) { return a += b; }
    friend MatPoly operator-(MatPoly a, const MatPoly& b) { return a -= b; }
    MatPoly operator-() const {
        MatPoly m = *this;
        for (auto& e : m.entries_) e = -e;
        return m;
    }

    friend MatPoly operator*(const MatPoly& a, const MatPoly& b) {
        if (a.cols_ != b.rows_ || a.dim_ != b.dim_) throw std::invalid_argument("MatPoly: shape mismatch");
        MatPoly out(a.rows_, b.cols_, a.dim_);
        for (unsigned i = 0; i < a.rows_; ++i)
            for (unsigned k = 0; k < a.cols_; ++k) {
                if (a.at(i, k).is_zero()) continue;
                for (unsigned j = 0; j < b.cols_; ++j) out.at(i, j) += a.at(i, k) * b.at(k, j);
            }
        return out;
    }

    MatPoly scaled(const Polynomial& f) const {
        MatPoly m = *this;
        for (auto& e : m.entries_) e = e * f;
        return m;
    }
    MatPoly scaled(const GaussianRational& c) const {
        MatPoly m = *this;
        for (auto& e : m.entries_) e = e.scaled(c);
        return m;
    }

    MatPoly partial(unsigned i) const {
        MatPoly m = *this;
        for (auto& e : m.entries_) e = e.partial(i);
        return m;
    }
    MatPoly partial(const Monomial& idx) const {
        MatPoly m = *this;
        for (auto& e : m.entries_) e = e.partial(idx);
        return m;
    }

    Polynomial trace() const {
        if (rows_ != cols_) throw std::invalid_argument("MatPoly::trace: not square");
        Polynomial t(dim_);
        for (unsigned i = 0; i < rows_; ++i) t += at(i, i);
        return t;
    }

    MatPoly transpose() const {
        MatPoly m(cols_, rows_, dim_);
        for (unsigned i = 0; i < rows_; ++i)
            for (unsigned j = 0; j < cols_; ++j) m.at(j, i) = at(i, j);
        return m;
    }

    MatPoly column(unsigned j) const {
        MatPoly c(rows_, 1, dim_);
        for (unsigned i = 0; i < rows_; ++i) c.at(i, 0) = at(i, j);
        return c;
    }

    bool is_idempotent() const { return rows_ == cols_ && (*this) * (*this) == *this; }

    friend bool operator==(const MatPoly& a, const MatPoly& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
    }
    friend bool operator!=(const MatPoly& a, const MatPoly& b) { return !(a == b); }

    std::string str(const std::vector<std::string>* names = nullptr) const {
        std::ostringstream os;
        os << '[';
        for (unsigned i = 0; i < rows_; ++i) {
            if (i) os << ", ";
            os << '[';
            for (unsigned j = 0; j < cols_; ++j) {
                if (j) os << ", ";
                os << at(i, j).str(names);
            }
            os << ']';
        }
        os << ']';
        return os.str();
    }

  private:
    void check_shape(const MatPoly& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_ || dim_ != o.dim_)
            throw std::invalid_argument("MatPoly: shape mismatch");
    }

    unsigned rows_ = 0, cols_ = 0, dim_ = 0;
    std::vector<Polynomial> entries_;
};

using MatSeries = TruncatedSeries<MatPoly>;

/// Bidifferential operator on matrices: entrywise derivatives combined by
/// matrix multiplication, [C(M,N)]_{ij} = sum_k C(M_{ik}, N_{kj}).
inline MatPoly apply_bidiff(const BidiffOp& c, const MatPoly& m, const MatPoly& n) {
    MatPoly out(m.rows(), n.cols(), m.dim());
    for (const auto& [k, coef] : c.terms()) out += (m.partial(k.first) * n.partial(k.second)).scaled(coef);
    return out;
}

/// Star product of matrix series: (A*B)_k = sum_{r+p+q=k} C_r(A_p, B_q).
inline MatSeries mat_star_mul(const StarProduct& s, const MatSeries& a, const MatSeries& b) {
    if (a.order() != s.order() || b.order() != s.order())
        throw std::invalid_argument("mat_star_mul: order mismatch");
    MatSeries out(s.order(), MatPoly(a[0].rows(), b[0].cols(), s.dim()));
    for (unsigned k = 0; k <= s.order(); ++k)
        for (unsigned r = 0; r <= k; ++r)
            for (unsigned p = 0; p + r <= k; ++p) out[k] += apply_bidiff(s.op(r), a[p], b[k - r - p]);
    return out;
}

inline MatSeries constant_mat_series(unsigned order, const MatPoly& m) {
    return MatSeries::constant(order, m, MatPoly(m.rows(), m.cols(), m.dim()));
}

}  // namespace starq
