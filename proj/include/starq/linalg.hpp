#pragma once

#include <optional>
#include <vector>

#include "starq/rational.hpp"

namespace starq {

using ScalarMatrix = std::vector<std::vector<GaussianRational>>;
using ScalarVector = std::vector<GaussianRational>;

/// Solves M w = rhs exactly by Gauss-Jordan elimination.  Returns the
/// solution with all free variables set to zero (the lexicographically first
/// minimal-support representative), or nullopt if inconsistent.
inline std::optional<ScalarVector> solve_linear_system(ScalarMatrix m, ScalarVector rhs) {
    std::size_t rows = m.size();
    std::size_t cols = rows == 0 ? 0 : m[0].size();
    std::vector<int> pivot_of_col(cols, -1);
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t pivot = r;
        while (pivot < rows && m[pivot][c].is_zero()) ++pivot;
        if (pivot == rows) continue;
        std::swap(m[pivot], m[r]);
        std::swap(rhs[pivot], rhs[r]);
        GaussianRational inv = m[r][c].inverse();
        for (std::size_t j = c; j < cols; ++j) m[r][j] *= inv;
        rhs[r] *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][c].is_zero()) continue;
            GaussianRational f = m[i][c];
            for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
            rhs[i] -= f * rhs[r];
        }
        pivot_of_col[c] = static_cast<int>(r);
        ++r;
    }
    for (std::size_t i = r; i < rows; ++i)
        if (!rhs[i].is_zero()) return std::nullopt;
    ScalarVector w(cols, GaussianRational(0));
    for (std::size_t c = 0; c < cols; ++c)
        if (pivot_of_col[c] >= 0) w[c] = rhs[pivot_of_col[c]];
    return w;
}

/// Exact inverse of a square matrix; throws on singular input.
inline ScalarMatrix invert_matrix(ScalarMatrix m) {
    std::size_t n = m.size();
    ScalarMatrix inv(n, ScalarVector(n, GaussianRational(0)));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = GaussianRational(1);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t pivot = c;
        while (pivot < n && m[pivot][c].is_zero()) ++pivot;
        if (pivot == n) throw std::domain_error("invert_matrix: singular matrix");
        std::swap(m[pivot], m[c]);
        std::swap(inv[pivot], inv[c]);
        GaussianRational f = m[c][c].inverse();
        for (std::size_t j = 0; j < n; ++j) {
            m[c][j] *= f;
            inv[c][j] *= f;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == c || m[i][c].is_zero()) continue;
            GaussianRational g = m[i][c];
            for (std::size_t j = 0; j < n; ++j) {
                m[i][j] -= g * m[c][j];
                inv[i][j] -= g * inv[c][j];
            }
        }
    }
    return inv;
}

/// Integer linear solvability of A z = w via Smith reduction: row/column
/// operations over the integers until A is diagonal, transforming w along.
inline bool has_integer_solution(std::vector<std::vector<BigInt>> a, std::vector<BigInt> w) {
    std::size_t rows = a.size();
    std::size_t cols = rows == 0 ? 0 : a[0].size();
    std::size_t t = 0;
    while (t < rows && t < cols) {
        // find a nonzero pivot in the remaining block
        std::size_t pi = t, pj = t;
        bool found = false;
        for (std::size_t i = t; i < rows && !found; ++i)
            for (std::size_t j = t; j < cols && !found; ++j)
                if (a[i][j] != 0) {
                    pi = i;
                    pj = j;
                    found = true;
                }
        if (!found) break;
        std::swap(a[t], a[pi]);
        std::swap(w[t], w[pi]);
        for (std::size_t i = 0; i < rows; ++i) std::swap(a[i][t], a[i][pj]);
        // reduce the pivot row/column until it divides everything it meets
        bool again = true;
        while (again) {
            again = false;
            for (std::size_t i = t + 1; i < rows; ++i) {
                if (a[i][t] == 0) continue;
                BigInt q = a[i][t] / a[t][t];
                for (std::size_t j = t; j < cols; ++j) a[i][j] -= q * a[t][j];
                w[i] -= q * w[t];
                if (a[i][t] != 0) {
                    std::swap(a[t], a[i]);
                    std::swap(w[t], w[i]);
                    again = true;
                }
            }
            for (std::size_t j = t + 1; j < cols; ++j) {
                if (a[t][j] == 0) continue;
                BigInt q = a[t][j] / a[t][t];
                for (std::size_t i = t; i < rows; ++i) a[i][j] -= q * a[i][t];
                if (a[t][j] != 0) {
                    for (std::size_t i = 0; i < rows; ++i) std::swap(a[i][t], a[i][j]);
                    again = true;
                }
            }
        }
        ++t;
    }
    for (std::size_t i = 0; i < rows; ++i) {
        if (i < t && i < cols && a[i][i] != 0) {
            if (w[i] % a[i][i] != 0) return false;
        } else {
            if (w[i] != 0) return false;
        }
    }
    return true;
}

}  // namespace starq
