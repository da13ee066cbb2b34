#pragma once

#include <cassert>
#include <cstdint>
#include <optional>
#include <vector>

namespace bv {

// Dense exact matrix over a field element type K.  K must provide +,-,*,/,
// unary -, ==, is_zero(), zero_like(), one_like(), from_int().
template <class K>
struct Matrix {
    int rows = 0, cols = 0;
    std::vector<K> a; // row-major

    Matrix() = default;
    Matrix(int r, int c, const K& zero) : rows(r), cols(c), a(static_cast<size_t>(r) * c, zero) {}

    static Matrix identity(int n, const K& one) {
        Matrix m(n, n, one.zero_like());
        for (int i = 0; i < n; ++i) m.at(i, i) = one.one_like();
        return m;
    }

    K& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
    const K& at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }

    bool is_zero() const {
        for (const auto& x : a) if (!x.is_zero()) return false;
        return true;
    }

    Matrix operator*(const Matrix& o) const {
        assert(cols == o.rows);
        K z = a.empty() ? o.a[0].zero_like() : a[0].zero_like();
        Matrix r(rows, o.cols, z);
        for (int i = 0; i < rows; ++i)
            for (int k = 0; k < cols; ++k) {
                const K& x = at(i, k);
                if (x.is_zero()) continue;
                for (int j = 0; j < o.cols; ++j) {
                    if (o.at(k, j).is_zero()) continue;
                    r.at(i, j) += x * o.at(k, j);
                }
            }
        return r;
    }
    Matrix operator+(const Matrix& o) const {
        assert(rows == o.rows && cols == o.cols);
        Matrix r = *this;
        for (size_t i = 0; i < a.size(); ++i) r.a[i] += o.a[i];
        return r;
    }
    Matrix operator-(const Matrix& o) const {
        assert(rows == o.rows && cols == o.cols);
        Matrix r = *this;
        for (size_t i = 0; i < a.size(); ++i) r.a[i] -= o.a[i];
        return r;
    }
    Matrix scaled(const K& s) const {
        Matrix r = *this;
        for (auto& x : r.a) x *= s;
        return r;
    }
    Matrix transpose() const {
        K z = a.empty() ? K{} : a[0].zero_like();
        Matrix r(cols, rows, z);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) r.at(j, i) = at(i, j);
        return r;
    }
    bool operator==(const Matrix& o) const {
        return rows == o.rows && cols == o.cols && a == o.a;
    }

    std::vector<K> apply(const std::vector<K>& v) const {
        assert(static_cast<int>(v.size()) == cols);
        K z = v.empty() ? K{} : v[0].zero_like();
        std::vector<K> r(rows, z);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j)
                if (!at(i, j).is_zero() && !v[j].is_zero()) r[i] += at(i, j) * v[j];
        return r;
    }
};

template <class K>
Matrix<K> commutator(const Matrix<K>& x, const Matrix<K>& y) {
    return x * y - y * x;
}

template <class K>
Matrix<K> mat_pow(Matrix<K> m, std::int64_t e) {
    assert(m.rows == m.cols);
    Matrix<K> r = Matrix<K>::identity(m.rows, m.a[0].one_like());
    while (e > 0) {
        if (e & 1) r = r * m;
        m = m * m;
        e >>= 1;
    }
    return r;
}

// In-place reduction to reduced row echelon form; returns pivot columns.
template <class K>
std::vector<int> rref(Matrix<K>& m) {
    std::vector<int> pivots;
    int r = 0;
    for (int c = 0; c < m.cols && r < m.rows; ++c) {
        int pr = -1;
        for (int i = r; i < m.rows; ++i)
            if (!m.at(i, c).is_zero()) { pr = i; break; }
        if (pr < 0) continue;
        if (pr != r)
            for (int j = 0; j < m.cols; ++j) std::swap(m.at(pr, j), m.at(r, j));
        K inv = m.at(r, c).one_like() / m.at(r, c);
        for (int j = c; j < m.cols; ++j) m.at(r, j) *= inv;
        for (int i = 0; i < m.rows; ++i) {
            if (i == r || m.at(i, c).is_zero()) continue;
            K f = m.at(i, c);
            for (int j = c; j < m.cols; ++j) m.at(i, j) -= f * m.at(r, j);
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

template <class K>
int rank(Matrix<K> m) {
    return static_cast<int>(rref(m).size());
}

// Basis of the null space {x : m x = 0}, one column vector per basis element.
template <class K>
std::vector<std::vector<K>> kernel(Matrix<K> m) {
    K zero = m.a.empty() ? K{} : m.a[0].zero_like();
    std::vector<int> piv = rref(m);
    std::vector<bool> is_piv(m.cols, false);
    for (int c : piv) is_piv[c] = true;
    std::vector<std::vector<K>> basis;
    for (int c = 0; c < m.cols; ++c) {
        if (is_piv[c]) continue;
        std::vector<K> v(m.cols, zero);
        v[c] = zero.one_like();
        for (size_t i = 0; i < piv.size(); ++i) v[piv[i]] = -m.at(static_cast<int>(i), c);
        basis.push_back(std::move(v));
    }
    return basis;
}

// Solve m x = b exactly; nullopt when inconsistent.
template <class K>
std::optional<std::vector<K>> solve(const Matrix<K>& m, const std::vector<K>& b) {
    assert(static_cast<int>(b.size()) == m.rows);
    K zero = b.empty() ? (m.a.empty() ? K{} : m.a[0].zero_like()) : b[0].zero_like();
    Matrix<K> aug(m.rows, m.cols + 1, zero);
    for (int i = 0; i < m.rows; ++i) {
        for (int j = 0; j < m.cols; ++j) aug.at(i, j) = m.at(i, j);
        aug.at(i, m.cols) = b[i];
    }
    std::vector<int> piv = rref(aug);
    if (!piv.empty() && piv.back() == m.cols) return std::nullopt;
    std::vector<K> x(m.cols, zero);
    for (size_t i = 0; i < piv.size(); ++i) x[piv[i]] = aug.at(static_cast<int>(i), m.cols);
    return x;
}

// Row-space basis in rref form (drops zero rows).
template <class K>
Matrix<K> row_space_basis(Matrix<K> m) {
    std::vector<int> piv = rref(m);
    K zero = m.a.empty() ? K{} : m.a[0].zero_like();
    Matrix<K> r(static_cast<int>(piv.size()), m.cols, zero);
    for (int i = 0; i < r.rows; ++i)
        for (int j = 0; j < m.cols; ++j) r.at(i, j) = m.at(i, j);
    return r;
}

template <class K>
Matrix<K> from_rows(const std::vector<std::vector<K>>& rows, int cols, const K& zero) {
    Matrix<K> m(static_cast<int>(rows.size()), cols, zero);
    for (size_t i = 0; i < rows.size(); ++i) {
        assert(static_cast<int>(rows[i].size()) == cols);
        for (int j = 0; j < cols; ++j) m.at(static_cast<int>(i), j) = rows[i][j];
    }
    return m;
}

// Is v in the row space of the rref basis?
template <class K>
bool in_row_space(const Matrix<K>& basis, const std::vector<K>& v) {
    std::vector<K> w = v;
    for (int i = 0; i < basis.rows; ++i) {
        int pc = -1;
        for (int j = 0; j < basis.cols; ++j)
            if (!basis.at(i, j).is_zero()) { pc = j; break; }
        if (pc < 0) continue;
        if (w[pc].is_zero()) continue;
        K f = w[pc] / basis.at(i, pc);
        for (int j = 0; j < basis.cols; ++j) w[j] -= f * basis.at(i, j);
    }
    for (const auto& x : w) if (!x.is_zero()) return false;
    return true;
}

// Largest subspace K0 of W (rows of w_basis) with g K0 <= K0 for every generator.
// Fixed point of K0 <- {v in K0 : g v in K0 for all g}.
template <class K>
Matrix<K> largest_invariant_subspace(Matrix<K> w_basis,
                                     const std::vector<Matrix<K>>& generators) {
    if (generators.empty()) return row_space_basis(std::move(w_basis));
    int n = w_basis.cols;
    K zero = generators[0].a[0].zero_like();
    Matrix<K> cur = row_space_basis(std::move(w_basis));
    for (;;) {
        if (cur.rows == 0) return cur;
        // coordinates: v = c^T cur; constraints: (g v) reduced against cur must vanish
        // Build the linear map c -> residues of g (c^T cur) modulo rowspace(cur).
        // Complement coordinates: non-pivot columns after reducing against cur.
        std::vector<int> pivcol(cur.rows, -1);
        std::vector<bool> is_piv(n, false);
        for (int i = 0; i < cur.rows; ++i)
            for (int j = 0; j < n; ++j)
                if (!cur.at(i, j).is_zero()) { pivcol[i] = j; is_piv[j] = true; break; }
        std::vector<int> comp;
        for (int j = 0; j < n; ++j) if (!is_piv[j]) comp.push_back(j);
        if (comp.empty()) return cur; // cur is the whole space, trivially stable

        std::vector<std::vector<K>> constraint_rows;
        for (const auto& g : generators) {
            for (int c = 0; c < cur.rows; ++c) {
                // image of c-th basis vector
                std::vector<K> v(n, zero);
                for (int j = 0; j < n; ++j) v[j] = cur.at(c, j);
                std::vector<K> gv = g.apply(v);
                // reduce against cur
                for (int i = 0; i < cur.rows; ++i) {
                    int pc = pivcol[i];
                    if (pc < 0 || gv[pc].is_zero()) continue;
                    K f = gv[pc] / cur.at(i, pc);
                    for (int j = 0; j < n; ++j) gv[j] -= f * cur.at(i, j);
                }
                // residue coordinates form one column of the constraint matrix
                std::vector<K> col(comp.size(), zero);
                for (size_t k = 0; k < comp.size(); ++k) col[k] = gv[comp[k]];
                constraint_rows.push_back(std::move(col));
            }
        }
        // constraint matrix: rows = residue coords (per generator stacked), cols = cur.rows
        int nconstraints = static_cast<int>(comp.size()) * static_cast<int>(generators.size());
        Matrix<K> cm(nconstraints, cur.rows, zero);
        for (int c = 0; c < static_cast<int>(constraint_rows.size()); ++c) {
            int g = c / cur.rows, bi = c % cur.rows;
            for (size_t k = 0; k < comp.size(); ++k)
                cm.at(g * static_cast<int>(comp.size()) + static_cast<int>(k), bi) =
                    constraint_rows[c][k];
        }
        auto ker = kernel(cm);
        if (static_cast<int>(ker.size()) == cur.rows) return cur; // stable
        // new subspace = span of kernel combinations
        std::vector<std::vector<K>> next;
        for (const auto& c : ker) {
            std::vector<K> v(n, zero);
            for (int i = 0; i < cur.rows; ++i)
                for (int j = 0; j < n; ++j) v[j] += c[i] * cur.at(i, j);
            next.push_back(std::move(v));
        }
        cur = row_space_basis(from_rows(next, n, zero));
    }
}

} // namespace bv
