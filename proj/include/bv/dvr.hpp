#pragma once

#include <cassert>
#include <vector>

#include "bv/linalg.hpp"
#include "bv/ratfunc.hpp"

namespace bv {

// Outcome of solving M x = b with the constraint that x stays in the local ring
// (valuation >= 0 in every coordinate).
enum class DvrSolveStatus {
    Ok,                // solution over the local ring found
    NeedsNegativeVal,  // solvable over the fraction field only
    NoSolution,        // inconsistent even over the fraction field
};

struct DvrSolveResult {
    DvrSolveStatus status = DvrSolveStatus::NoSolution;
    std::vector<RatFunc> x; // valid when status == Ok
};

// Solve M x = b over the local ring (entries of M, b must have valuation >= 0).
// Smith-style elimination: the pivot is the entry of minimal valuation in the
// remaining block, so every row/column quotient is integral and the recorded
// column operations are invertible over the ring. Diagonal form d_i then gives
// the exact criterion: integral solution exists iff each rhs_i is divisible by
// d_i (and zero past the rank).
inline DvrSolveResult dvr_solve(const Matrix<RatFunc>& M, const std::vector<RatFunc>& b) {
    assert(static_cast<int>(b.size()) == M.rows);
    RatFunc zero;
    for (const auto& e : M.a) if (!e.is_zero()) { zero = e.zero_like(); break; }
    if (zero.prime() == 0)
        for (const auto& e : b) if (!e.is_zero()) { zero = e.zero_like(); break; }
    if (zero.prime() == 0) {
        // zero system, zero rhs
        return {DvrSolveStatus::Ok, std::vector<RatFunc>(M.cols, RatFunc())};
    }

    int nr = M.rows, nc = M.cols;
    Matrix<RatFunc> w = M;
    std::vector<RatFunc> rhs = b;
    // x = V y for the column operations accumulated in V
    Matrix<RatFunc> V = Matrix<RatFunc>::identity(nc, zero.one_like());

    int r = 0;
    while (r < nr && r < nc) {
        int bi = -1, bj = -1, bv = 0;
        for (int i = r; i < nr; ++i)
            for (int j = r; j < nc; ++j) {
                const RatFunc& e = w.at(i, j);
                if (e.is_zero()) continue;
                int v = e.valuation();
                if (bi < 0 || v < bv) { bi = i; bj = j; bv = v; }
            }
        if (bi < 0) break;
        if (bi != r) {
            for (int j = 0; j < nc; ++j) std::swap(w.at(bi, j), w.at(r, j));
            std::swap(rhs[bi], rhs[r]);
        }
        if (bj != r) {
            for (int i = 0; i < nr; ++i) std::swap(w.at(i, bj), w.at(i, r));
            for (int i = 0; i < nc; ++i) std::swap(V.at(i, bj), V.at(i, r));
        }
        // clear column r below/above (row operations, integral quotients)
        for (int i = 0; i < nr; ++i) {
            if (i == r || w.at(i, r).is_zero()) continue;
            RatFunc f = w.at(i, r) / w.at(r, r);
            assert(f.in_dvr());
            for (int j = r; j < nc; ++j) w.at(i, j) -= f * w.at(r, j);
            rhs[i] -= f * rhs[r];
        }
        // clear row r to the right (column operations, applied to V)
        for (int j = r + 1; j < nc; ++j) {
            if (w.at(r, j).is_zero()) continue;
            RatFunc f = w.at(r, j) / w.at(r, r);
            assert(f.in_dvr());
            for (int i = 0; i < nr; ++i) w.at(i, j) -= f * w.at(i, r);
            for (int i = 0; i < nc; ++i) V.at(i, j) -= f * V.at(i, r);
        }
        ++r;
    }
    int rk = r;
    for (int i = rk; i < nr; ++i)
        if (!rhs[i].is_zero()) return {DvrSolveStatus::NoSolution, {}};
    std::vector<RatFunc> y(nc, zero);
    bool integral = true;
    for (int i = 0; i < rk; ++i) {
        y[i] = rhs[i] / w.at(i, i);
        if (!y[i].in_dvr()) integral = false;
    }
    if (!integral) return {DvrSolveStatus::NeedsNegativeVal, {}};
    std::vector<RatFunc> x = V.apply(y);
    return {DvrSolveStatus::Ok, x};
}

// Basis over the local ring of (K-span of the given vectors) intersected with
// the ring points: returns vectors spanning the same K-space whose A-span is
// saturated, i.e. contains every integral vector of the K-span.
// Method: drop K-dependencies, scale each vector to minimal valuation 0, then
// repeatedly find a residue dependency at t=0; a dependency lifts to a
// combination divisible by t (with a unit coefficient somewhere), and dividing
// that combination by t strictly enlarges the lattice. No residue dependency
// means the lattice is saturated.
inline std::vector<std::vector<RatFunc>> saturate_lattice(std::vector<std::vector<RatFunc>> gens) {
    if (gens.empty()) return gens;
    size_t n = gens[0].size();
    RatFunc zero;
    for (auto& g : gens)
        for (auto& e : g)
            if (!e.is_zero()) { zero = e.zero_like(); break; }
    std::int64_t p = zero.prime();
    if (p == 0) return {}; // all generators zero

    {
        Matrix<RatFunc> m = from_rows(gens, static_cast<int>(n), zero);
        Matrix<RatFunc> rb = row_space_basis(m);
        gens.clear();
        for (int i = 0; i < rb.rows; ++i) {
            std::vector<RatFunc> v(n, zero);
            for (size_t j = 0; j < n; ++j) v[j] = rb.at(i, static_cast<int>(j));
            gens.push_back(std::move(v));
        }
    }
    auto min_val = [](const std::vector<RatFunc>& v) {
        int mv = 1 << 28;
        for (const auto& e : v)
            if (!e.is_zero()) mv = std::min(mv, e.valuation());
        return mv;
    };
    auto rescale = [&](std::vector<RatFunc>& v) {
        int mv = min_val(v);
        if (mv == (1 << 28) || mv == 0) return;
        RatFunc s = t_power(p, -mv);
        for (auto& e : v) e *= s;
    };
    for (auto& g : gens) rescale(g);

    for (;;) {
        int k = static_cast<int>(gens.size());
        // rows = residues of generators; a left-kernel vector is a dependency
        Matrix<Fp> res(k, static_cast<int>(n), Fp(0, p));
        for (int i = 0; i < k; ++i)
            for (size_t j = 0; j < n; ++j) res.at(i, static_cast<int>(j)) = gens[i][j].eval0();
        auto dep = kernel(res.transpose());
        if (dep.empty()) return gens;
        const auto& c = dep[0];
        int repl = -1;
        std::vector<RatFunc> comb(n, zero);
        for (int i = 0; i < k; ++i) {
            if (c[i].is_zero()) continue;
            repl = i; // any index with unit coefficient keeps the K-span
            RatFunc ci = RatFunc::constant(p, c[i].v);
            for (size_t j = 0; j < n; ++j) comb[j] += ci * gens[i][j];
        }
        assert(repl >= 0);
        assert(min_val(comb) >= 1); // the residue dependency forces divisibility
        rescale(comb);
        gens[repl] = std::move(comb);
    }
}

} // namespace bv
