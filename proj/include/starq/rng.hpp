#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "starq/polynomial.hpp"

namespace starq {

/// Seeded generator for random algebra elements.  mt19937_64 plus explicit
/// modulo reduction, so streams are identical across platforms; reports
/// record the seed and must be reproducible byte for byte.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t raw() { return eng_(); }

    /// Uniform-ish integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return eng_() % n; }

    long int_in(long lo, long hi) { return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo + 1))); }

    GaussianRational small_scalar(bool complex_part = false) {
        Rational re(int_in(-3, 3), int_in(1, 3));
        if (!complex_part) return GaussianRational(re);
        Rational im(int_in(-2, 2), 1);
        return {re, im};
    }

    /// Random polynomial of total degree <= maxdeg with small rational
    /// coefficients; roughly `nterms` monomials.
    Polynomial polynomial(unsigned dim, unsigned maxdeg, unsigned nterms = 4, bool complex_coeffs = false) {
        Polynomial p(dim);
        for (unsigned t = 0; t < nterms; ++t) {
            Monomial m(dim);
            unsigned deg = static_cast<unsigned>(below(maxdeg + 1));
            for (unsigned k = 0; k < deg; ++k) ++m.e[below(dim)];
            p.add_term(m, small_scalar(complex_coeffs));
        }
        return p;
    }

  private:
    std::mt19937_64 eng_;
};

}  // namespace starq
