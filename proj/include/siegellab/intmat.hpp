// Exact integer linear algebra on small dense matrices: HNF canonical forms,
// integer kernels, saturation, rank (fraction-free), and minor vectors.
// Arithmetic is checked 64-bit: operations that would leave |x| < 2^62 proceed,
// anything larger throws instead of overflowing silently. All supported models
// stay far below that bound.
#pragma once

#include "siegellab/errors.hpp"

#include <cstdint>
#include <numeric>
#include <vector>

namespace siegellab::intmat {

using Int = std::int64_t;

inline constexpr Int kMagnitudeCap = Int(1) << 62;

inline Int checked(__int128 v) {
    if (v >= __int128(kMagnitudeCap) || v <= -__int128(kMagnitudeCap))
        throw resource_guard_error("integer magnitude exceeds 2^62; model out of supported range");
    return static_cast<Int>(v);
}

inline Int add(Int a, Int b) { return checked(__int128(a) + b); }
inline Int sub(Int a, Int b) { return checked(__int128(a) - b); }
inline Int mul(Int a, Int b) { return checked(__int128(a) * b); }

inline Int gcd(Int a, Int b) { return std::gcd(a, b); }

class IMat {
  public:
    IMat() = default;
    IMat(int rows, int cols) : rows_(rows), cols_(cols), a_(std::size_t(rows) * cols, 0) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    Int& operator()(int r, int c) { return a_[std::size_t(r) * cols_ + c]; }
    Int operator()(int r, int c) const { return a_[std::size_t(r) * cols_ + c]; }

    bool operator==(const IMat& o) const = default;

    void swap_rows(int i, int j) {
        for (int c = 0; c < cols_; ++c) std::swap((*this)(i, c), (*this)(j, c));
    }
    void negate_row(int i) {
        for (int c = 0; c < cols_; ++c) (*this)(i, c) = -(*this)(i, c);
    }
    // row i -= q * row j
    void row_axpy(int i, Int q, int j) {
        for (int c = 0; c < cols_; ++c) (*this)(i, c) = sub((*this)(i, c), mul(q, (*this)(j, c)));
    }

    std::vector<Int> row(int i) const {
        std::vector<Int> out(cols_);
        for (int c = 0; c < cols_; ++c) out[c] = (*this)(i, c);
        return out;
    }

    static IMat from_rows(const std::vector<std::vector<Int>>& rows) {
        IMat m(int(rows.size()), rows.empty() ? 0 : int(rows[0].size()));
        for (int r = 0; r < m.rows(); ++r)
            for (int c = 0; c < m.cols(); ++c) m(r, c) = rows[std::size_t(r)][std::size_t(c)];
        return m;
    }

  private:
    int rows_ = 0, cols_ = 0;
    std::vector<Int> a_;
};

// Content (gcd of entries); 0 for the zero vector.
inline Int content(const std::vector<Int>& v) {
    Int g = 0;
    for (Int x : v) g = std::gcd(g, x < 0 ? -x : x);
    return g;
}

// Row-style Hermite normal form, canonical: pivot columns strictly increase,
// pivots are positive, entries above a pivot are reduced into [0, pivot).
// Zero rows are dropped; the result is the unique representative of the row
// lattice of `m`.
inline IMat hnf(IMat m) {
    const int R = m.rows(), C = m.cols();
    int r = 0;
    for (int c = 0; c < C && r < R; ++c) {
        // Euclidean elimination in column c below row r.
        while (true) {
            int piv = -1;
            for (int i = r; i < R; ++i)
                if (m(i, c) != 0 && (piv < 0 || std::abs(m(i, c)) < std::abs(m(piv, c)))) piv = i;
            if (piv < 0) break;
            m.swap_rows(r, piv);
            if (m(r, c) < 0) m.negate_row(r);
            bool clean = true;
            for (int i = r + 1; i < R; ++i) {
                if (m(i, c) == 0) continue;
                Int q = m(i, c) / m(r, c);
                m.row_axpy(i, q, r);
                if (m(i, c) != 0) clean = false;
            }
            if (clean) break;
        }
        if (m(r, c) != 0) {
            // reduce entries above the pivot
            for (int i = 0; i < r; ++i) {
                Int q = m(i, c) / m(r, c);
                if (m(i, c) - q * m(r, c) < 0) q -= 1;
                if (q != 0) m.row_axpy(i, q, r);
            }
            ++r;
        }
    }
    IMat out(r, C);
    for (int i = 0; i < r; ++i)
        for (int c = 0; c < C; ++c) out(i, c) = m(i, c);
    return out;
}

// Rank via fraction-free (Bareiss) elimination.
inline int rank(IMat m) {
    const int R = m.rows(), C = m.cols();
    int r = 0;
    Int prev = 1;
    for (int c = 0; c < C && r < R; ++c) {
        int piv = -1;
        for (int i = r; i < R; ++i)
            if (m(i, c) != 0) { piv = i; break; }
        if (piv < 0) continue;
        m.swap_rows(r, piv);
        for (int i = r + 1; i < R; ++i) {
            for (int j = c + 1; j < C; ++j)
                m(i, j) = checked((__int128(m(r, c)) * m(i, j) - __int128(m(i, c)) * m(r, j)) / prev);
            m(i, c) = 0;
        }
        prev = m(r, c);
        ++r;
    }
    return r;
}

// Basis (rows) of the integer kernel {x : m x = 0}. The kernel of an integer
// matrix is automatically saturated. Computed by column reduction of
// [m; I] over the integers.
inline IMat kernel_basis(const IMat& m) {
    const int R = m.rows(), C = m.cols();
    // work columns: each is (m-part, identity-part)
    std::vector<std::vector<Int>> top(C, std::vector<Int>(R));
    std::vector<std::vector<Int>> bot(C, std::vector<Int>(C, 0));
    for (int c = 0; c < C; ++c) {
        for (int r = 0; r < R; ++r) top[c][std::size_t(r)] = m(r, c);
        bot[c][std::size_t(c)] = 1;
    }
    int lead = 0;
    for (int r = 0; r < R && lead < C; ++r) {
        while (true) {
            int piv = -1;
            for (int c = lead; c < C; ++c)
                if (top[c][std::size_t(r)] != 0 &&
                    (piv < 0 || std::abs(top[c][std::size_t(r)]) < std::abs(top[piv][std::size_t(r)])))
                    piv = c;
            if (piv < 0) break;
            std::swap(top[lead], top[piv]);
            std::swap(bot[lead], bot[piv]);
            bool clean = true;
            for (int c = lead + 1; c < C; ++c) {
                if (top[c][std::size_t(r)] == 0) continue;
                Int q = top[c][std::size_t(r)] / top[lead][std::size_t(r)];
                for (int i = 0; i < R; ++i) top[c][std::size_t(i)] = sub(top[c][std::size_t(i)], mul(q, top[lead][std::size_t(i)]));
                for (int i = 0; i < C; ++i) bot[c][std::size_t(i)] = sub(bot[c][std::size_t(i)], mul(q, bot[lead][std::size_t(i)]));
                if (top[c][std::size_t(r)] != 0) clean = false;
            }
            if (clean) break;
        }
        if (top[lead][std::size_t(r)] != 0) ++lead;
    }
    IMat out(C - lead, C);
    for (int c = lead; c < C; ++c)
        for (int i = 0; i < C; ++i) out(c - lead, i) = bot[std::size_t(c)][std::size_t(i)];
    return out;
}

// Saturation of the row space: (rowspace(m) cap Z^n) as a canonical HNF basis.
// Double integer kernel: sat = ker(ker(m)^T ... ), both kernels saturated.
inline IMat saturate_rowspace(const IMat& m) {
    IMat k = kernel_basis(m);       // rows orthogonal to rowspace
    IMat sat = kernel_basis(k);     // integer vectors orthogonal to those rows
    return hnf(sat);
}

// Determinant of a square matrix (Bareiss).
inline Int det(IMat m) {
    const int n = m.rows();
    if (n != m.cols()) throw validation_error("det: matrix not square");
    Int prev = 1, sign = 1;
    for (int c = 0; c < n - 1; ++c) {
        int piv = -1;
        for (int i = c; i < n; ++i)
            if (m(i, c) != 0) { piv = i; break; }
        if (piv < 0) return 0;
        if (piv != c) { m.swap_rows(c, piv); sign = -sign; }
        for (int i = c + 1; i < n; ++i) {
            for (int j = c + 1; j < n; ++j)
                m(i, j) = checked((__int128(m(c, c)) * m(i, j) - __int128(m(i, c)) * m(c, j)) / prev);
            m(i, c) = 0;
        }
        prev = m(c, c);
    }
    return mul(sign, m(n - 1, n - 1));
}

// All ell x ell minors of an ell x n matrix, in lexicographic column-subset
// order (the Pluecker coordinate order used throughout).
inline std::vector<Int> minors(const IMat& m) {
    const int ell = m.rows(), n = m.cols();
    if (ell > n) throw validation_error("minors: more rows than columns");
    std::vector<int> idx(ell);
    for (int i = 0; i < ell; ++i) idx[std::size_t(i)] = i;
    std::vector<Int> out;
    while (true) {
        IMat sub(ell, ell);
        for (int r = 0; r < ell; ++r)
            for (int c = 0; c < ell; ++c) sub(r, c) = m(r, idx[std::size_t(c)]);
        out.push_back(det(sub));
        int i = ell - 1;
        while (i >= 0 && idx[std::size_t(i)] == n - ell + i) --i;
        if (i < 0) break;
        ++idx[std::size_t(i)];
        for (int j = i + 1; j < ell; ++j) idx[std::size_t(j)] = idx[std::size_t(j - 1)] + 1;
    }
    return out;
}

} // namespace siegellab::intmat
