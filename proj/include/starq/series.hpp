#pragma once

#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace starq {

/// Truncated formal power series in the deformation parameter: coefficients
/// c0..cN over any coefficient algebra T.  Arithmetic is exact modulo
/// lambda^{N+1}.
template <class T>
class TruncatedSeries {
  public:
    TruncatedSeries() = default;
    TruncatedSeries(unsigned order, T zero) : coeffs_(order + 1, zero) {}
    explicit TruncatedSeries(std::vector<T> coeffs) : coeffs_(std::move(coeffs)) {
        if (coeffs_.empty()) throw std::invalid_argument("TruncatedSeries: empty coefficient list");
    }

    static TruncatedSeries constant(unsigned order, T c0, T zero) {
        TruncatedSeries s(order, std::move(zero));
        s.coeffs_[0] = std::move(c0);
        return s;
    }

    unsigned order() const { return static_cast<unsigned>(coeffs_.size()) - 1; }
    const T& operator[](unsigned k) const { return coeffs_.at(k); }
    T& operator[](unsigned k) { return coeffs_.at(k); }
    const std::vector<T>& coeffs() const { return coeffs_; }

    TruncatedSeries& operator+=(const TruncatedSeries& o) {
        check_order(o);
        for (unsigned k = 0; k <= order(); ++k) coeffs_[k] += o.coeffs_[k];
        return *this;
    }
    TruncatedSeries& operator-=(const TruncatedSeries& o) {
        check_order(o);
        for (unsigned k = 0; k <= order(); ++k) coeffs_[k] -= o.coeffs_[k];
        return *this;
    }
    friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) { return a += b; }
    friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) { return a -= b; }

    friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) {
        return a.coeffs_ == b.coeffs_;
    }
    friend bool operator!=(const TruncatedSeries& a, const TruncatedSeries& b) { return !(a == b); }

    /// Multiply by lambda^k (shift up), dropping overflowing coefficients.
    TruncatedSeries shifted(unsigned k, const T& zero) const {
        TruncatedSeries s(order(), zero);
        for (unsigned j = 0; j + k <= order(); ++j) s.coeffs_[j + k] = coeffs_[j];
        return s;
    }

    bool all_of(const std::function<bool(const T&)>& pred) const {
        for (const auto& c : coeffs_)
            if (!pred(c)) return false;
        return true;
    }

    /// Print format: `c0 + λ*(c1) + λ^2*(c2)`.
    std::string str(const std::function<std::string(const T&)>& show) const {
        std::ostringstream os;
        for (unsigned k = 0; k <= order(); ++k) {
            if (k == 0) {
                os << show(coeffs_[0]);
            } else if (k == 1) {
                os << " + \xce\xbb*(" << show(coeffs_[k]) << ")";
            } else {
                os << " + \xce\xbb^" << k << "*(" << show(coeffs_[k]) << ")";
            }
        }
        return os.str();
    }

  private:
    void check_order(const TruncatedSeries& o) const {
        if (order() != o.order()) throw std::invalid_argument("TruncatedSeries: order mismatch");
    }

    std::vector<T> coeffs_;
};

/// Cauchy product truncated at order N, for any bilinear coefficient product.
template <class T, class Mul>
TruncatedSeries<T> series_mul(const TruncatedSeries<T>& a, const TruncatedSeries<T>& b, Mul&& mul,
                              const T& zero) {
    if (a.order() != b.order()) throw std::invalid_argument("series_mul: order mismatch");
    TruncatedSeries<T> out(a.order(), zero);
    for (unsigned k = 0; k <= a.order(); ++k)
        for (unsigned r = 0; r <= k; ++r) out[k] += mul(a[r], b[k - r]);
    return out;
}

}  // namespace starq
