#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "bv/deform.hpp"

namespace bv {

// Rank-one combinatorial category: an object assigns to every weight of a
// finite orbit a space over K = F_p(t) (a hom space out of the generic
// standard module) and to every weight a lattice over the local ring inside
// the sum of the spaces at lambda and at its raised partner.

struct KObject {
    std::vector<Weight> omega;              // weights carrying wall data
    std::map<Weight, Weight> up;            // raised partner per weight
    // basis of the space at each weight (hom matrices into the module)
    std::map<Weight, std::vector<Matrix<RatFunc>>> space;
    // lattice generators at (lambda, alpha), rows in coordinates of the
    // bases at lambda and at up(lambda) concatenated; when up(lambda) equals
    // lambda the ambient is the space at lambda alone
    std::map<Weight, Matrix<RatFunc>> wall;

    int rank_at(const Weight& w) const {
        auto it = space.find(w);
        return it == space.end() ? 0 : static_cast<int>(it->second.size());
    }
};

using KMorphism = std::map<Weight, Matrix<RatFunc>>;

namespace detail {

inline std::vector<RatFunc> flatten(const Matrix<RatFunc>& m) { return m.a; }

// coordinates of a hom matrix in a basis of hom matrices
inline std::vector<RatFunc> hom_coords(const std::vector<Matrix<RatFunc>>& basis,
                                       const Matrix<RatFunc>& T, const RatFunc& zero) {
    if (basis.empty()) {
        if (!T.is_zero()) throw std::logic_error("hom_coords: vector outside the hom space");
        return {};
    }
    std::vector<std::vector<RatFunc>> rows;
    for (const auto& B : basis) rows.push_back(flatten(B));
    auto sol = solve(from_rows(rows, static_cast<int>(rows[0].size()), zero).transpose(),
                     flatten(T));
    if (!sol) throw std::logic_error("hom_coords: vector outside the hom space");
    return *sol;
}

} // namespace detail

// The functor on a free module over the local ring: spaces by generic hom
// computation, wall lattices as images of the integral homs out of the
// projective object.
inline KObject functor_V(const RootDatum& d, const LeviDatum& levi, const ChevalleyBasis& cb,
                         const GradedModule<RatFunc>& M, const std::vector<Weight>& omega) {
    require_rank1(d, "functor_V");
    if (!is_dvr_module(M)) throw std::invalid_argument("functor_V: module not defined over the local ring");
    RatFunc zero = RatFunc::constant(d.p, 0);
    KObject V;
    V.omega = omega;
    std::sort(V.omega.begin(), V.omega.end());
    V.omega.erase(std::unique(V.omega.begin(), V.omega.end()), V.omega.end());
    std::vector<Weight> carriers = V.omega;
    for (const Weight& lam : V.omega) {
        V.up[lam] = raise_weight(d, lam);
        carriers.push_back(V.up[lam]);
    }
    std::sort(carriers.begin(), carriers.end());
    carriers.erase(std::unique(carriers.begin(), carriers.end()), carriers.end());
    for (const Weight& nu : carriers) {
        GradedModule<RatFunc> Z = build_verma(d, levi, cb, deform_pi(d.p), 0, nu, zero);
        V.space[nu] = hom_space(Z, M);
    }
    for (const Weight& lam : V.omega) {
        int n = raise_step(d, lam);
        std::vector<Matrix<RatFunc>> qhoms;
        std::vector<std::vector<RatFunc>> genrows;
        if (n == 0) {
            GradedModule<RatFunc> Q = build_deformed_verma(d, levi, cb, lam);
            for (const auto& T : hom_space(Q, M)) qhoms.push_back(T);
            std::vector<std::vector<RatFunc>> flat;
            for (const auto& T : qhoms) flat.push_back(detail::flatten(T));
            for (const auto& g : saturate_lattice(flat)) {
                Matrix<RatFunc> T(M.dim(), Q.dim(), zero);
                T.a = g;
                genrows.push_back(detail::hom_coords(V.space[lam], T, zero));
            }
            V.wall[lam] = from_rows(genrows, V.rank_at(lam), zero);
            continue;
        }
        ExtensionDatum ext = build_Y(d, levi, cb, lam, t_power(d.p, -1));
        const GradedModule<RatFunc>& Q = ext.total;
        // generic section of the projection, normalized against the quotient
        Matrix<RatFunc> s(Q.dim(), ext.quot.dim(), zero);
        {
            bool found = false;
            for (const auto& S : hom_space(ext.quot, Q)) {
                Matrix<RatFunc> c = ext.proj * S;
                // generically the composite is a scalar; pick a unit one
                RatFunc a = c.at(0, 0);
                if (a.is_zero()) continue;
                if (!(c == Matrix<RatFunc>::identity(ext.quot.dim(), zero.one_like()).scaled(a)))
                    continue;
                s = S.scaled(zero.one_like() / a);
                found = true;
                break;
            }
            if (!found) throw std::logic_error("functor_V: no generic section of the projection");
        }
        std::vector<std::vector<RatFunc>> flat;
        for (const auto& T : hom_space_general(Q, M)) flat.push_back(detail::flatten(T));
        int amb = V.rank_at(lam) + V.rank_at(V.up[lam]);
        for (const auto& g : saturate_lattice(flat)) {
            Matrix<RatFunc> T(M.dim(), Q.dim(), zero);
            T.a = g;
            std::vector<RatFunc> c1 = detail::hom_coords(V.space[lam], T * s, zero);
            std::vector<RatFunc> c2 = detail::hom_coords(V.space[V.up[lam]], T * ext.incl, zero);
            c1.insert(c1.end(), c2.begin(), c2.end());
            genrows.push_back(std::move(c1));
        }
        V.wall[lam] = from_rows(genrows, amb, zero);
    }
    return V;
}

inline std::map<Weight, int> z_filtration_multiplicities(const KObject& V) {
    std::map<Weight, int> out;
    for (const auto& [w, basis] : V.space)
        if (!basis.empty()) out[w] = static_cast<int>(basis.size());
    return out;
}

// membership of a lattice over the local ring, as a vector in the ambient
inline bool in_wall_lattice(const Matrix<RatFunc>& gens, const std::vector<RatFunc>& v) {
    bool allzero = true;
    for (const auto& e : v) allzero = allzero && e.is_zero();
    if (allzero) return true;
    if (gens.rows == 0) return false;
    return dvr_solve(gens.transpose(), v).status == DvrSolveStatus::Ok;
}

struct KHomResult {
    int dim = 0;
    std::vector<KMorphism> basis;
    std::vector<std::string> notes; // rank well-definedness counterexamples
};

// Morphisms: componentwise maps over K whose induced maps carry each wall
// lattice into the span of the target's. The rank of every nonzero component
// of a basis morphism is recorded and compared.
inline KHomResult k_hom(const KObject& A, const KObject& B) {
    if (A.omega != B.omega) throw std::invalid_argument("k_hom: different orbits");
    RatFunc zero;
    for (const auto& [w, basis] : A.space)
        for (const auto& T : basis)
            if (!T.a.empty()) { zero = T.a[0].zero_like(); break; }
    for (const auto& [w, basis] : B.space)
        for (const auto& T : basis)
            if (!T.a.empty()) { zero = T.a[0].zero_like(); break; }
    KHomResult out;
    // unknown blocks phi_nu, one per carrier weight with nonzero both sides
    std::vector<Weight> carriers;
    for (const auto& [w, basis] : A.space) carriers.push_back(w);
    std::map<Weight, int> offset;
    int U = 0;
    for (const Weight& w : carriers) {
        offset[w] = U;
        U += B.rank_at(w) * A.rank_at(w);
    }
    if (U == 0) return out;
    auto unk = [&](const Weight& w, int i, int j) {
        return offset.at(w) + i * A.rank_at(w) + j;
    };
    std::vector<std::vector<RatFunc>> rows;
    for (const Weight& lam : A.omega) {
        const Weight& mu = A.up.at(lam);
        int ra1 = A.rank_at(lam), ra2 = (mu == lam) ? 0 : A.rank_at(mu);
        int rb1 = B.rank_at(lam), rb2 = (mu == lam) ? 0 : B.rank_at(mu);
        const Matrix<RatFunc>& GA = A.wall.at(lam);
        const Matrix<RatFunc>& GB = B.wall.at(lam);
        // the image must stay in the K-span of the target lattice
        std::vector<std::vector<RatFunc>> ann;
        if (GB.rows == 0) {
            for (int i = 0; i < rb1 + rb2; ++i) {
                std::vector<RatFunc> e(rb1 + rb2, zero);
                e[i] = zero.one_like();
                ann.push_back(std::move(e));
            }
        } else {
            ann = kernel(GB);
        }
        if (ann.empty()) continue;
        for (int g = 0; g < GA.rows; ++g)
            for (const auto& c : ann) {
                std::vector<RatFunc> row(U, zero);
                bool nz = false;
                for (int i = 0; i < rb1; ++i)
                    for (int j = 0; j < ra1; ++j) {
                        RatFunc v = c[i] * GA.at(g, j);
                        if (v.is_zero()) continue;
                        row[unk(lam, i, j)] += v;
                        nz = true;
                    }
                for (int i = 0; i < rb2; ++i)
                    for (int j = 0; j < ra2; ++j) {
                        RatFunc v = c[rb1 + i] * GA.at(g, ra1 + j);
                        if (v.is_zero()) continue;
                        row[unk(mu, i, j)] += v;
                        nz = true;
                    }
                if (nz) rows.push_back(std::move(row));
            }
    }
    std::vector<std::vector<RatFunc>> sols;
    if (rows.empty()) {
        for (int t = 0; t < U; ++t) {
            std::vector<RatFunc> x(U, zero);
            x[t] = zero.one_like();
            sols.push_back(std::move(x));
        }
    } else {
        sols = kernel(from_rows(rows, U, zero));
    }
    out.dim = static_cast<int>(sols.size());
    for (const auto& x : sols) {
        KMorphism phi;
        std::vector<int> ranks;
        for (const Weight& w : carriers) {
            int rb = B.rank_at(w), ra = A.rank_at(w);
            if (rb == 0 || ra == 0) continue;
            Matrix<RatFunc> m(rb, ra, zero);
            for (int i = 0; i < rb; ++i)
                for (int j = 0; j < ra; ++j) m.at(i, j) = x[unk(w, i, j)];
            if (!m.is_zero()) ranks.push_back(rank(m));
            phi[w] = std::move(m);
        }
        for (size_t i = 1; i < ranks.size(); ++i)
            if (ranks[i] != ranks[0])
                out.notes.push_back("component ranks disagree on a basis morphism");
        out.basis.push_back(std::move(phi));
    }
    return out;
}

// rank of the hom space of the modules against rank of the hom space of their
// images; both computed independently
inline bool v_full_faithful_check(const RootDatum& d, const LeviDatum& levi,
                                  const ChevalleyBasis& cb, const GradedModule<RatFunc>& M,
                                  const GradedModule<RatFunc>& N,
                                  const std::vector<Weight>& omega) {
    int lhs = static_cast<int>(hom_space_general(M, N).size());
    KHomResult rhs = k_hom(functor_V(d, levi, cb, M, omega), functor_V(d, levi, cb, N, omega));
    return lhs == rhs.dim && rhs.notes.empty();
}

// multiplicity of the simple with highest weight lam in the standard module
// of highest weight mu over the residue field, against the wall rank of the
// image of the projective cover
inline bool main_theorem_check(const RootDatum& d, const LeviDatum& levi, const ChevalleyBasis& cb,
                               const Weight& lam, const Weight& mu) {
    require_rank1(d, "main_theorem_check");
    StructuralMap<Fp> pz{{Fp(0, d.p)}};
    AnalysisContext<Fp> ctx = make_context<Fp>(d, levi, cb, pz, Fp(0, d.p));
    SimpleLabel target = ctx.label(lam);
    auto factors = composition_factors(ctx, ctx.Z(mu));
    int lhs = factors.count(target) ? factors.at(target) : 0;
    GradedModule<RatFunc> Q = projective_Q(d, levi, cb, lam);
    KObject V = functor_V(d, levi, cb, Q, {lam, mu});
    int rhs = V.rank_at(mu);
    return lhs == rhs;
}

} // namespace bv
