#include "bv/chevalley.hpp"

#include <cassert>
#include <stdexcept>

#include "bv/fp.hpp"
#include "bv/linalg.hpp"

namespace bv {

namespace {

IntMat zeros(int n) { return IntMat(n, std::vector<std::int64_t>(n, 0)); }

IntMat ident(int n) {
    IntMat m = zeros(n);
    for (int i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

IntMat mul(const IntMat& a, const IntMat& b) {
    int n = static_cast<int>(a.size());
    IntMat r = zeros(n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            if (a[i][k] == 0) continue;
            for (int j = 0; j < n; ++j) r[i][j] += a[i][k] * b[k][j];
        }
    return r;
}

IntMat add(const IntMat& a, const IntMat& b) {
    IntMat r = a;
    for (size_t i = 0; i < r.size(); ++i)
        for (size_t j = 0; j < r.size(); ++j) r[i][j] += b[i][j];
    return r;
}

IntMat neg(const IntMat& a) {
    IntMat r = a;
    for (auto& row : r)
        for (auto& e : row) e = -e;
    return r;
}

IntMat lie(const IntMat& a, const IntMat& b) {
    IntMat ab = mul(a, b), ba = mul(b, a);
    for (size_t i = 0; i < ab.size(); ++i)
        for (size_t j = 0; j < ab.size(); ++j) ab[i][j] -= ba[i][j];
    return ab;
}

IntMat transpose(const IntMat& a) {
    int n = static_cast<int>(a.size());
    IntMat r = zeros(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) r[j][i] = a[i][j];
    return r;
}

bool is_zero_mat(const IntMat& a) {
    for (const auto& row : a)
        for (auto e : row)
            if (e != 0) return false;
    return true;
}

IntMat unit(int n, int i, int j) {
    IntMat m = zeros(n);
    m[i][j] = 1;
    return m;
}

IntMat diag(std::vector<std::int64_t> d) {
    int n = static_cast<int>(d.size());
    IntMat m = zeros(n);
    for (int i = 0; i < n; ++i) m[i][i] = d[i];
    return m;
}

// exact decomposition of m in the span of the basis matrices: solved modulo a
// large prime and lifted; the lift is verified exactly in integers
std::vector<std::int64_t> decompose(const std::vector<IntMat>& basis, const IntMat& m) {
    const std::int64_t P = 1000003;
    int n = static_cast<int>(m.size());
    int dim = static_cast<int>(basis.size());
    Matrix<Fp> sys(n * n, dim, Fp(0, P));
    std::vector<Fp> rhs(n * n, Fp(0, P));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            for (int a = 0; a < dim; ++a) sys.at(i * n + j, a) = Fp(basis[a][i][j], P);
            rhs[i * n + j] = Fp(m[i][j], P);
        }
    auto sol = solve(sys, rhs);
    if (!sol) throw std::logic_error("matrix not in the basis span");
    std::vector<std::int64_t> c(dim);
    IntMat check = zeros(n);
    for (int a = 0; a < dim; ++a) {
        std::int64_t v = (*sol)[a].v;
        if (v > P / 2) v -= P;
        c[a] = v;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) check[i][j] += v * basis[a][i][j];
    }
    if (!(check == m)) throw std::logic_error("decomposition lift failed");
    return c;
}

} // namespace

int ChevalleyBasis::e_index(int simple) const { return datum->simple_root_index(simple); }
int ChevalleyBasis::f_index(int simple) const {
    return datum->roots[datum->simple_root_index(simple)].negative_of;
}

std::int64_t ChevalleyBasis::structure_constant(int root_a, int root_b) const {
    for (const auto& t : bracket[root_a][root_b])
        if (t.basis < num_roots) return t.coeff;
    return 0;
}

ChevalleyBasis build_chevalley(const RootDatum& datum) {
    ChevalleyBasis cb;
    cb.datum = &datum;
    cb.num_roots = static_cast<int>(datum.roots.size());
    cb.dim = cb.num_roots + datum.rank;

    // concrete realization; root order must match datum.roots
    std::vector<IntMat> xs(cb.num_roots);
    std::vector<IntMat> hs(datum.rank);
    if (datum.type_label == "A1") {
        cb.rep_n = 2;
        xs[0] = unit(2, 0, 1);
        xs[1] = unit(2, 1, 0);
        hs[0] = diag({1, -1});
    } else if (datum.type_label == "A2") {
        cb.rep_n = 3;
        xs[0] = unit(3, 0, 1);            // alpha1
        xs[1] = unit(3, 1, 2);            // alpha2
        xs[2] = unit(3, 0, 2);            // alpha1+alpha2
        xs[3] = unit(3, 1, 0);
        xs[4] = unit(3, 2, 1);
        xs[5] = unit(3, 2, 0);
        hs[0] = diag({1, -1, 0});
        hs[1] = diag({0, 1, -1});
    } else if (datum.type_label == "B2") {
        // sp4 with the symplectic form pairing rows/cols (1,2) with (4,3)
        cb.rep_n = 4;
        xs[0] = unit(4, 1, 3);                      // alpha1 (long)
        xs[1] = add(unit(4, 0, 1), neg(unit(4, 3, 2))); // alpha2 (short)
        xs[2] = add(unit(4, 0, 3), unit(4, 1, 2));  // alpha1+alpha2
        xs[3] = unit(4, 0, 2);                      // alpha1+2 alpha2
        xs[4] = unit(4, 3, 1);
        xs[5] = add(unit(4, 1, 0), neg(unit(4, 2, 3)));
        xs[6] = add(unit(4, 3, 0), unit(4, 2, 1));
        xs[7] = unit(4, 2, 0);
        hs[0] = diag({0, 1, 0, -1});
        hs[1] = diag({1, -1, -1, 1});
    } else {
        throw std::invalid_argument("no realization for " + datum.type_label);
    }
    cb.rep = xs;
    for (auto& h : hs) cb.rep.push_back(h);

    // structure constants by exact decomposition of concrete brackets
    cb.bracket.assign(cb.dim, std::vector<std::vector<BracketTerm>>(cb.dim));
    for (int a = 0; a < cb.dim; ++a)
        for (int b = 0; b < cb.dim; ++b) {
            IntMat br = lie(cb.rep[a], cb.rep[b]);
            if (is_zero_mat(br)) continue;
            auto c = decompose(cb.rep, br);
            for (int k = 0; k < cb.dim; ++k)
                if (c[k] != 0) cb.bracket[a][b].push_back({k, c[k]});
        }

    // ---- build-time verification of the abstract structure ----
    auto expand = [&](const std::vector<std::int64_t>& u,
                      const std::vector<std::int64_t>& v) {
        std::vector<std::int64_t> r(cb.dim, 0);
        for (int a = 0; a < cb.dim; ++a) {
            if (u[a] == 0) continue;
            for (int b = 0; b < cb.dim; ++b) {
                if (v[b] == 0) continue;
                for (const auto& t : cb.bracket[a][b]) r[t.basis] += u[a] * v[b] * t.coeff;
            }
        }
        return r;
    };
    auto basis_vec = [&](int a) {
        std::vector<std::int64_t> v(cb.dim, 0);
        v[a] = 1;
        return v;
    };
    // Jacobi on all basis triples
    for (int a = 0; a < cb.dim; ++a)
        for (int b = 0; b < cb.dim; ++b)
            for (int c = 0; c < cb.dim; ++c) {
                std::vector<std::int64_t> s(cb.dim, 0);
                auto add3 = [&](int x, int y, int z) {
                    auto inner = expand(basis_vec(x), basis_vec(y));
                    auto outer = expand(inner, basis_vec(z));
                    for (int k = 0; k < cb.dim; ++k) s[k] += outer[k];
                };
                add3(a, b, c);
                add3(b, c, a);
                add3(c, a, b);
                for (int k = 0; k < cb.dim; ++k) assert(s[k] == 0);
            }
    // [x_a, x_{-a}] is the coroot; torus weights; root sums
    for (int a = 0; a < cb.num_roots; ++a) {
        int na = datum.roots[a].negative_of;
        const auto& br = cb.bracket[a][na];
        std::vector<std::int64_t> got(datum.rank, 0);
        for (const auto& t : br) {
            assert(t.basis >= cb.num_roots);
            got[t.basis - cb.num_roots] = t.coeff;
        }
        for (int i = 0; i < datum.rank; ++i) assert(got[i] == datum.roots[a].coroot[i]);
        for (int i = 0; i < datum.rank; ++i) {
            const auto& hb = cb.bracket[cb.h_index(i)][a];
            std::int64_t w = datum.roots[a].fund[i];
            if (w == 0) assert(hb.empty());
            else {
                assert(hb.size() == 1 && hb[0].basis == a && hb[0].coeff == w);
            }
        }
        for (int b = 0; b < cb.num_roots; ++b) {
            if (b == na) continue;
            std::vector<std::int64_t> sum(datum.rank);
            for (int i = 0; i < datum.rank; ++i)
                sum[i] = datum.roots[a].simple[i] + datum.roots[b].simple[i];
            int sr = datum.root_index(sum);
            const auto& br2 = cb.bracket[a][b];
            if (sr < 0) assert(br2.empty());
            else {
                assert(br2.size() <= 1);
                if (!br2.empty()) assert(br2[0].basis == sr);
            }
        }
        // restricted structure: x_beta^[p] = 0; realization is nilpotent of
        // order <= 3 < p for every root vector
        IntMat pw = cb.rep[a];
        pw = mul(pw, cb.rep[a]);
        pw = mul(pw, cb.rep[a]);
        assert(is_zero_mat(pw));
    }
    // h_i^[p] = h_i: diagonal entries all in {-1,0,1}
    for (int i = 0; i < datum.rank; ++i)
        for (int j = 0; j < cb.rep_n; ++j)
            assert(std::abs(cb.rep[cb.h_index(i)][j][j]) <= 1);
    return cb;
}

std::int64_t PCharacter::chi_root(const RootDatum& datum, int root_idx) const {
    const Root& r = datum.roots[root_idx];
    if (r.positive || r.height != -1) return 0;
    for (int i = 0; i < datum.rank; ++i)
        if (r.simple[i] == -1) return levi->in_I(i) ? 1 : 0;
    return 0;
}

TauMap build_tau(const ChevalleyBasis& cb, const LeviDatum& levi) {
    const RootDatum& d = *cb.datum;
    int n = cb.rep_n;
    // representative of w_I as a product of exp(e_i) exp(-f_i) exp(e_i)
    IntMat g = ident(n), ginv = ident(n);
    for (int i : d.weyl[levi.w_I].word) {
        IntMat e = cb.rep[cb.e_index(i)], f = cb.rep[cb.f_index(i)];
        IntMat ni = mul(mul(add(ident(n), e), add(ident(n), neg(f))), add(ident(n), e));
        IntMat ni_inv = mul(mul(add(ident(n), neg(e)), add(ident(n), f)), add(ident(n), neg(e)));
        g = mul(g, ni);
        ginv = mul(ni_inv, ginv);
    }
    assert(mul(g, ginv) == ident(n));

    auto tau0 = [&](const IntMat& x) { return mul(mul(g, neg(transpose(x))), ginv); };

    // base images, before the sign twist
    std::vector<int> img(cb.num_roots);
    std::vector<std::int64_t> sgn(cb.num_roots);
    for (int a = 0; a < cb.num_roots; ++a) {
        auto c = decompose(cb.rep, tau0(cb.rep[a]));
        int hit = -1;
        for (int k = 0; k < cb.dim; ++k)
            if (c[k] != 0) {
                assert(hit < 0 && k < cb.num_roots);
                hit = k;
                sgn[a] = c[k];
            }
        assert(hit >= 0 && std::abs(sgn[a]) == 1);
        img[a] = hit;
        // tau implements -w_I on the root system
        int expect = d.roots[d.act_on_root(levi.w_I, a)].negative_of;
        assert(hit == expect);
    }
    IntMat hm(d.rank, std::vector<std::int64_t>(d.rank, 0));
    for (int i = 0; i < d.rank; ++i) {
        auto c = decompose(cb.rep, tau0(cb.rep[cb.h_index(i)]));
        for (int k = 0; k < cb.num_roots; ++k) assert(c[k] == 0);
        for (int j = 0; j < d.rank; ++j) hm[j][i] = c[cb.num_roots + j];
    }

    PCharacter chi{&levi};
    // sign twist: multiplicative on the root lattice, trivial on h
    for (std::uint32_t mask = 0; mask < (1u << d.rank); ++mask) {
        std::vector<std::int64_t> eps(d.rank);
        for (int i = 0; i < d.rank; ++i) eps[i] = (mask >> i) & 1 ? -1 : 1;
        auto eps_of = [&](int root) {
            std::int64_t s = 1;
            for (int i = 0; i < d.rank; ++i)
                if ((d.roots[root].simple[i] % 2 + 2) % 2 == 1 && eps[i] == -1) s = -s;
            return s;
        };
        TauMap t;
        t.root_image = img;
        t.root_sign.resize(cb.num_roots);
        for (int a = 0; a < cb.num_roots; ++a) t.root_sign[a] = sgn[a] * eps_of(a);
        t.h_mat = hm;
        t.root_image_inv.resize(cb.num_roots);
        t.root_sign_inv.resize(cb.num_roots);
        for (int a = 0; a < cb.num_roots; ++a) {
            t.root_image_inv[t.root_image[a]] = a;
            t.root_sign_inv[t.root_image[a]] = t.root_sign[a]; // signs are +-1
        }
        // invert the h-block (rank <= 2, determinant +-1)
        if (d.rank == 1) {
            assert(std::abs(hm[0][0]) == 1);
            t.h_mat_inv = {{hm[0][0]}};
        } else {
            std::int64_t det = hm[0][0] * hm[1][1] - hm[0][1] * hm[1][0];
            assert(std::abs(det) == 1);
            t.h_mat_inv = {{det * hm[1][1], -det * hm[0][1]},
                           {-det * hm[1][0], det * hm[0][0]}};
        }
        // requirement: chi o tau^{-1} = -chi on every root vector
        bool ok = true;
        for (int a = 0; a < cb.num_roots && ok; ++a) {
            std::int64_t lhs = t.root_sign_inv[a] * chi.chi_root(d, t.root_image_inv[a]);
            std::int64_t rhs = -chi.chi_root(d, a);
            if (lhs != rhs) ok = false;
        }
        if (!ok) continue;
        // verify the automorphism law on all pairs of basis elements
        auto tau_of_basis = [&](int b) {
            std::vector<std::int64_t> v(cb.dim, 0);
            if (b < cb.num_roots) v[t.root_image[b]] = t.root_sign[b];
            else
                for (int j = 0; j < d.rank; ++j)
                    v[cb.num_roots + j] = t.h_mat[j][b - cb.num_roots];
            return v;
        };
        bool morph = true;
        for (int a = 0; a < cb.dim && morph; ++a)
            for (int b = 0; b < cb.dim && morph; ++b) {
                std::vector<std::int64_t> lhs(cb.dim, 0);
                auto ta = tau_of_basis(a), tb = tau_of_basis(b);
                for (int u = 0; u < cb.dim; ++u) {
                    if (ta[u] == 0) continue;
                    for (int v = 0; v < cb.dim; ++v) {
                        if (tb[v] == 0) continue;
                        for (const auto& term : cb.bracket[u][v])
                            lhs[term.basis] += ta[u] * tb[v] * term.coeff;
                    }
                }
                std::vector<std::int64_t> rhs(cb.dim, 0);
                for (const auto& term : cb.bracket[a][b]) {
                    auto tt = tau_of_basis(term.basis);
                    for (int k = 0; k < cb.dim; ++k) rhs[k] += term.coeff * tt[k];
                }
                if (lhs != rhs) morph = false;
            }
        if (morph) return t;
    }
    throw std::logic_error("no admissible sign twist for tau");
}

} // namespace bv
