#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "bv/analysis.hpp"

namespace bv {

// ---------------------------------------------------------------------------
// R_pi and the elementary combinatorics
// ---------------------------------------------------------------------------

// Roots where pi(h_beta)^p - pi(h_beta) fails to be a unit; over a field this
// is exactly {beta : pi(h_beta) lies in the prime field}.
struct PiProfile {
    std::vector<int> r_pi;     // root indices, closed under negation
    std::vector<int> r_pi_pos; // positive ones

    bool contains(int root) const {
        return std::find(r_pi.begin(), r_pi.end(), root) != r_pi.end();
    }
};

namespace detail {
inline bool scalar_is_unit(const Fp& x, bool /*dvr_mode*/) { return !x.is_zero(); }
inline bool scalar_is_unit(const RatFunc& x, bool dvr_mode) {
    if (x.is_zero()) return false;
    return dvr_mode ? x.valuation() == 0 : true;
}
} // namespace detail

// dvr_mode treats scalars as elements of k[t]_(t): non-units have positive
// valuation. Off dvr_mode the scalars form a field.
template <class K>
PiProfile compute_r_pi(const RootDatum& d, const StructuralMap<K>& pi, bool dvr_mode = false) {
    PiProfile out;
    for (size_t r = 0; r < d.roots.size(); ++r) {
        K v = pi.pi_of_root(d, static_cast<int>(r));
        K u = v;
        for (std::int64_t e = 1; e < d.p; ++e) u *= v;
        u -= v;
        if (!detail::scalar_is_unit(u, dvr_mode)) {
            out.r_pi.push_back(static_cast<int>(r));
            if (d.roots[r].positive) out.r_pi_pos.push_back(static_cast<int>(r));
        }
    }
    return out;
}

// n_beta(lambda): representative in [0,p) of <lambda+rho, beta^vee> +
// pi(h_beta); only defined when the value lies in the prime field.
template <class K>
int n_beta(const RootDatum& d, const StructuralMap<K>& pi, const Weight& lam, int beta) {
    auto res = detail::try_residue(pi.pi_of_root(d, beta));
    if (!res) throw std::invalid_argument("n_beta: value not in the prime field");
    std::int64_t v = (d.pair(w_add(lam, d.rho), beta) + *res) % d.p;
    if (v < 0) v += d.p;
    return static_cast<int>(v);
}

// alpha up lambda = lambda + n alpha where <lambda+rho, alpha^vee> +
// pi(h_alpha) = p - n (mod p), with n in [0,p).
template <class K>
Weight alpha_up(const RootDatum& d, const StructuralMap<K>& pi, const Weight& lam, int alpha) {
    std::int64_t n = (d.p - n_beta(d, pi, lam, alpha)) % d.p;
    return w_add(lam, w_scale(n, d.roots[alpha].fund));
}

// ---------------------------------------------------------------------------
// Block combinatorics
// ---------------------------------------------------------------------------

// Affine generator families of the block group: s_{alpha, mp} for alpha in
// (R_pi cap I) union (R_pi minus R_I).
inline std::vector<OrbitGen> block_generators(const RootDatum& d, const LeviDatum& levi,
                                              const PiProfile& prof) {
    std::set<int> in_RI(levi.R_I.begin(), levi.R_I.end());
    std::set<int> in_I;
    for (int i : levi.I) in_I.insert(d.simple_root_index(i));
    std::vector<OrbitGen> gens;
    for (int r : prof.r_pi_pos)
        if (in_I.count(r) || !in_RI.count(r)) gens.push_back(OrbitGen{r, true});
    return gens;
}

// Partition of the box into predicted linkage classes: orbits of the dot
// action of the block group, up to p ZI. Merged through a union-find so the
// result is a genuine partition even at the box boundary.
inline std::vector<std::vector<Weight>> predicted_blocks(const RootDatum& d,
                                                         const LeviDatum& levi,
                                                         const PiProfile& prof, const Box& box) {
    std::vector<Weight> pts = box.enumerate();
    std::sort(pts.begin(), pts.end());
    std::map<Weight, int> idx;
    for (size_t i = 0; i < pts.size(); ++i) idx[pts[i]] = static_cast<int>(i);
    std::vector<int> parent(pts.size());
    for (size_t i = 0; i < pts.size(); ++i) parent[i] = static_cast<int>(i);
    std::function<int(int)> find = [&](int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    std::vector<OrbitGen> gens = block_generators(d, levi, prof);
    for (size_t i = 0; i < pts.size(); ++i)
        for (const Weight& w : orbit_in_box(d, levi, gens, pts[i], box, true)) {
            auto it = idx.find(w);
            if (it == idx.end()) continue;
            int a = find(static_cast<int>(i)), b = find(it->second);
            if (a != b) parent[a] = b;
        }
    std::map<int, std::vector<Weight>> classes;
    for (size_t i = 0; i < pts.size(); ++i) classes[find(static_cast<int>(i))].push_back(pts[i]);
    std::vector<std::vector<Weight>> out;
    for (auto& [root, cls] : classes) out.push_back(std::move(cls));
    std::sort(out.begin(), out.end());
    return out;
}

// Dot orbit of lambda under the finite reflections s_alpha, alpha in
// R_pi cap I, with every member reduced modulo p ZI.
inline std::set<Weight> finite_orbit_reduced(const RootDatum& d, const LeviDatum& levi,
                                             const PiProfile& prof, const Weight& lam) {
    std::set<int> in_I;
    for (int i : levi.I) in_I.insert(d.simple_root_index(i));
    std::vector<int> gens;
    for (int r : prof.r_pi_pos)
        if (in_I.count(r)) gens.push_back(r);
    std::set<Weight> orbit{reduce_mod_pZI(d, levi, lam)};
    std::vector<Weight> work(orbit.begin(), orbit.end());
    while (!work.empty()) {
        Weight w = work.back();
        work.pop_back();
        for (int r : gens) {
            Weight img = reduce_mod_pZI(d, levi, affine_reflect(d, r, 0, w_add(w, d.rho)));
            img = w_sub(img, d.rho);
            img = reduce_mod_pZI(d, levi, img);
            if (orbit.insert(img).second) work.push_back(img);
        }
    }
    return orbit;
}

// lambda in W_{I,pi} . mu + p ZI, the predicted criterion for Z(lambda) and
// Z(mu) being isomorphic.
inline bool predicted_iso(const RootDatum& d, const LeviDatum& levi, const PiProfile& prof,
                          const Weight& lam, const Weight& mu) {
    auto orbit = finite_orbit_reduced(d, levi, prof, mu);
    return orbit.count(reduce_mod_pZI(d, levi, lam)) > 0;
}

// Predicted irreducibility of Z(lambda): all walls off the Levi are avoided.
template <class K>
bool predicted_irreducible(const RootDatum& d, const LeviDatum& levi, const PiProfile& prof,
                           const StructuralMap<K>& pi, const Weight& lam) {
    std::set<int> in_RI(levi.R_I.begin(), levi.R_I.end());
    for (int r : prof.r_pi_pos)
        if (!in_RI.count(r) && n_beta(d, pi, lam, r) != 0) return false;
    return true;
}

// Hypothesis regime of the pair (pi, I), used to annotate reports.
inline std::string pi_levi_regime(const RootDatum& d, const LeviDatum& levi,
                                  const PiProfile& prof) {
    std::set<int> pos_in_RI;
    std::set<int> in_RI(levi.R_I.begin(), levi.R_I.end());
    for (int r : prof.r_pi_pos)
        if (in_RI.count(r)) pos_in_RI.insert(r);
    if (pos_in_RI.empty()) return "empty";
    if (pos_in_RI.size() == static_cast<size_t>(levi.R_I_pos.size())) return "full";
    if (pos_in_RI.size() == 1) {
        int r = *pos_in_RI.begin();
        std::set<int> in_I;
        for (int i : levi.I) in_I.insert(d.simple_root_index(i));
        return in_I.count(r) ? "single wall in I" : "single wall off I";
    }
    return "other";
}

// ---------------------------------------------------------------------------
// Confrontation with computed composition factors
// ---------------------------------------------------------------------------

struct LinkageReport {
    bool ok = true;
    std::string regime;
    std::map<Weight, std::map<SimpleLabel, int>> factors;
    std::vector<std::string> violations;
};

// For every lambda in the box, every composition factor L(mu) of Z(lambda)
// must satisfy mu in W_{pi,p} . lambda + p ZI. The orbit is enumerated in an
// enlarged box wide enough to contain every factor label.
template <class K>
LinkageReport verify_linkage(AnalysisContext<K>& ctx, const PiProfile& prof, const Box& box) {
    const RootDatum& d = *ctx.d;
    const LeviDatum& l = *ctx.levi;
    LinkageReport rep;
    rep.regime = pi_levi_regime(d, l, prof);
    std::vector<OrbitGen> gens = block_generators(d, l, prof);
    Box big;
    for (int i = 0; i < d.rank; ++i) big.range.push_back({-4 * d.p, 4 * d.p});
    for (const Weight& lam : box.enumerate()) {
        auto f = composition_factors(ctx, ctx.Z(lam));
        rep.factors[lam] = f;
        std::set<Weight> orbit;
        for (const Weight& w : orbit_in_box(d, l, gens, lam, big, true))
            orbit.insert(reduce_mod_pZI(d, l, w));
        for (const auto& [lab, m] : f) {
            if (!orbit.count(reduce_mod_pZI(d, l, lab.nu))) {
                rep.ok = false;
                std::string s = "factor " + lab.str() + " outside the predicted class of (";
                for (size_t i = 0; i < lam.size(); ++i) {
                    if (i) s += ",";
                    s += std::to_string(lam[i]);
                }
                s += ")";
                rep.violations.push_back(std::move(s));
            }
        }
    }
    return rep;
}

} // namespace bv
