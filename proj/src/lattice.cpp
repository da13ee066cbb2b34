#include "bv/lattice.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

namespace bv {

Weight w_add(const Weight& a, const Weight& b) {
    assert(a.size() == b.size());
    Weight r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}
Weight w_sub(const Weight& a, const Weight& b) {
    assert(a.size() == b.size());
    Weight r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}
Weight w_scale(std::int64_t c, const Weight& a) {
    Weight r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
    return r;
}

std::int64_t RootDatum::pair(const Weight& lam, int root_idx) const {
    const auto& c = roots[root_idx].coroot;
    std::int64_t s = 0;
    for (size_t i = 0; i < c.size(); ++i) s += c[i] * lam[i];
    return s;
}

int RootDatum::root_index(const std::vector<std::int64_t>& simple_coords) const {
    for (size_t i = 0; i < roots.size(); ++i)
        if (roots[i].simple == simple_coords) return static_cast<int>(i);
    return -1;
}

int RootDatum::simple_root_index(int i) const {
    std::vector<std::int64_t> s(rank, 0);
    s[i] = 1;
    return root_index(s);
}

Weight RootDatum::act(int w, const Weight& lam) const {
    const auto& m = weyl[w].mat;
    Weight r(rank, 0);
    for (int i = 0; i < rank; ++i)
        for (int j = 0; j < rank; ++j) r[i] += m[i][j] * lam[j];
    return r;
}

namespace {

bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

std::vector<std::vector<std::int64_t>> mat_mul_i(const std::vector<std::vector<std::int64_t>>& a,
                                                 const std::vector<std::vector<std::int64_t>>& b) {
    int n = static_cast<int>(a.size());
    std::vector<std::vector<std::int64_t>> r(n, std::vector<std::int64_t>(n, 0));
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j) r[i][j] += a[i][k] * b[k][j];
    return r;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    assert(b > 0);
    std::int64_t q = a / b;
    if (a % b != 0 && a < 0) --q;
    return q;
}

} // namespace

RootDatum build_root_datum(const std::string& type_label, std::int64_t p) {
    RootDatum d;
    d.type_label = type_label;
    d.p = p;
    std::vector<std::vector<std::int64_t>> pos; // simple coords
    std::vector<std::vector<std::int64_t>> cor; // coroot functionals
    if (type_label == "A1") {
        d.rank = 1;
        d.cartan = {{2}};
        pos = {{1}};
        cor = {{1}};
    } else if (type_label == "A2") {
        d.rank = 2;
        d.cartan = {{2, -1}, {-1, 2}};
        pos = {{1, 0}, {0, 1}, {1, 1}};
        cor = {{1, 0}, {0, 1}, {1, 1}};
    } else if (type_label == "B2") {
        // alpha_1 long, alpha_2 short
        d.rank = 2;
        d.cartan = {{2, -1}, {-2, 2}};
        pos = {{1, 0}, {0, 1}, {1, 1}, {1, 2}};
        cor = {{1, 0}, {0, 1}, {2, 1}, {1, 1}};
    } else {
        throw std::invalid_argument("unknown root datum type: " + type_label);
    }
    if (p < 3 || !is_prime(p)) throw std::invalid_argument("p must be an odd prime");
    for (const auto& row : d.cartan)
        for (auto e : row)
            if (e != 0 && std::abs(e) % p == 0)
                throw std::invalid_argument("p divides a Cartan matrix entry");

    d.num_positive = static_cast<int>(pos.size());
    for (size_t k = 0; k < pos.size(); ++k) {
        Root r;
        r.simple = pos[k];
        r.coroot = cor[k];
        r.fund.assign(d.rank, 0);
        r.height = 0;
        for (int i = 0; i < d.rank; ++i) {
            r.height += static_cast<int>(pos[k][i]);
            for (int j = 0; j < d.rank; ++j) r.fund[i] += d.cartan[i][j] * pos[k][j];
        }
        r.positive = true;
        d.roots.push_back(r);
    }
    for (size_t k = 0; k < pos.size(); ++k) {
        Root r = d.roots[k];
        for (auto& e : r.simple) e = -e;
        for (auto& e : r.fund) e = -e;
        for (auto& e : r.coroot) e = -e;
        r.height = -r.height;
        r.positive = false;
        r.negative_of = static_cast<int>(k);
        d.roots.push_back(r);
        d.roots[k].negative_of = static_cast<int>(d.roots.size()) - 1;
    }
    d.rho.assign(d.rank, 1);

    // sanity: <beta, beta^vee> = 2 for every root
    for (const auto& r : d.roots) {
        std::int64_t s = 0;
        for (int i = 0; i < d.rank; ++i) s += r.coroot[i] * r.fund[i];
        assert(s == 2);
    }

    // Weyl group closure from the simple reflections
    std::vector<std::vector<std::vector<std::int64_t>>> gens;
    for (int i = 0; i < d.rank; ++i) {
        std::vector<std::vector<std::int64_t>> m(d.rank, std::vector<std::int64_t>(d.rank, 0));
        for (int j = 0; j < d.rank; ++j) m[j][j] = 1;
        for (int j = 0; j < d.rank; ++j) m[j][i] -= d.cartan[j][i];
        gens.push_back(m);
    }
    std::vector<std::vector<std::int64_t>> id(d.rank, std::vector<std::int64_t>(d.rank, 0));
    for (int j = 0; j < d.rank; ++j) id[j][j] = 1;
    std::map<std::vector<std::vector<std::int64_t>>, int> seen;
    d.weyl.push_back({id, {}, {}, -1});
    seen[id] = 0;
    for (size_t head = 0; head < d.weyl.size(); ++head) {
        for (int i = 0; i < d.rank; ++i) {
            auto m = mat_mul_i(gens[i], d.weyl[head].mat); // s_i * w
            if (seen.count(m)) continue;
            WeylElement e;
            e.mat = m;
            e.word = d.weyl[head].word;
            e.word.insert(e.word.begin(), i);
            seen[m] = static_cast<int>(d.weyl.size());
            d.weyl.push_back(e);
        }
    }
    // root permutations, inverses, longest element
    for (auto& e : d.weyl) {
        e.root_perm.resize(d.roots.size());
        for (size_t r = 0; r < d.roots.size(); ++r) {
            Weight img(d.rank, 0);
            for (int i = 0; i < d.rank; ++i)
                for (int j = 0; j < d.rank; ++j) img[i] += e.mat[i][j] * d.roots[r].fund[j];
            int found = -1;
            for (size_t s = 0; s < d.roots.size(); ++s)
                if (d.roots[s].fund == img) { found = static_cast<int>(s); break; }
            assert(found >= 0);
            e.root_perm[r] = found;
        }
    }
    for (size_t a = 0; a < d.weyl.size(); ++a) {
        for (size_t b = 0; b < d.weyl.size(); ++b)
            if (mat_mul_i(d.weyl[a].mat, d.weyl[b].mat) == id) {
                d.weyl[a].inverse = static_cast<int>(b);
                break;
            }
        assert(d.weyl[a].inverse >= 0);
    }
    size_t best = 0;
    for (size_t a = 1; a < d.weyl.size(); ++a)
        if (d.weyl[a].word.size() > d.weyl[best].word.size()) best = a;
    d.w0 = static_cast<int>(best);
    // w0 sends every positive root to a negative root
    for (int r = 0; r < d.num_positive; ++r)
        assert(!d.roots[d.weyl[d.w0].root_perm[r]].positive);
    return d;
}

bool LeviDatum::in_I(int simple_idx) const {
    return std::find(I.begin(), I.end(), simple_idx) != I.end();
}
bool LeviDatum::contains_weyl(int w) const {
    return std::find(W_I.begin(), W_I.end(), w) != W_I.end();
}

static int weyl_index_of(const RootDatum& d, const std::vector<std::vector<std::int64_t>>& m) {
    for (size_t a = 0; a < d.weyl.size(); ++a)
        if (d.weyl[a].mat == m) return static_cast<int>(a);
    return -1;
}

int weyl_compose(const RootDatum& d, int a, int b) {
    int r = weyl_index_of(d, mat_mul_i(d.weyl[a].mat, d.weyl[b].mat));
    assert(r >= 0);
    return r;
}

LeviDatum build_levi(const RootDatum& datum, const std::vector<int>& I) {
    LeviDatum l;
    l.I = I;
    std::sort(l.I.begin(), l.I.end());
    for (size_t r = 0; r < datum.roots.size(); ++r) {
        bool in = true;
        for (int j = 0; j < datum.rank; ++j)
            if (datum.roots[r].simple[j] != 0 && !l.in_I(j)) { in = false; break; }
        if (in) {
            l.R_I.push_back(static_cast<int>(r));
            if (datum.roots[r].positive) l.R_I_pos.push_back(static_cast<int>(r));
        }
    }
    // subgroup closure from {s_i : i in I}
    std::set<int> wi = {0};
    std::vector<int> frontier = {0};
    while (!frontier.empty()) {
        std::vector<int> next;
        for (int w : frontier)
            for (int i : l.I) {
                // s_i as a Weyl element
                std::vector<std::vector<std::int64_t>> m(datum.rank,
                                                         std::vector<std::int64_t>(datum.rank, 0));
                for (int j = 0; j < datum.rank; ++j) m[j][j] = 1;
                for (int j = 0; j < datum.rank; ++j) m[j][i] -= datum.cartan[j][i];
                int si = weyl_index_of(datum, m);
                int c = weyl_compose(datum, si, w);
                if (!wi.count(c)) { wi.insert(c); next.push_back(c); }
            }
        frontier = next;
    }
    l.W_I.assign(wi.begin(), wi.end());
    l.w_I = 0;
    for (int w : l.W_I)
        if (datum.weyl[w].word.size() > datum.weyl[l.w_I].word.size()) l.w_I = w;
    l.w_upper_I = weyl_compose(datum, l.w_I, datum.w0);
    for (size_t w = 0; w < datum.weyl.size(); ++w) {
        bool ok = true;
        int winv = datum.weyl[w].inverse;
        for (int i : l.I) {
            int img = datum.weyl[winv].root_perm[datum.simple_root_index(i)];
            if (!datum.roots[img].positive) { ok = false; break; }
        }
        if (ok) l.W_upper_I.push_back(static_cast<int>(w));
    }
    // w^I is the longest element of W^I
    {
        bool member = std::find(l.W_upper_I.begin(), l.W_upper_I.end(), l.w_upper_I) !=
                      l.W_upper_I.end();
        assert(member);
        for (int w : l.W_upper_I)
            assert(datum.weyl[w].word.size() <= datum.weyl[l.w_upper_I].word.size());
    }
    return l;
}

namespace {

// column-style Hermite form data for the sublattice ZI in fundamental coords
struct HnfData {
    std::vector<std::vector<std::int64_t>> cols; // reduced lattice basis columns
    std::vector<int> pivot_row;                  // per column
};

HnfData levi_hnf(const RootDatum& datum, const LeviDatum& levi) {
    int n = datum.rank;
    std::vector<std::vector<std::int64_t>> cols;
    for (int i : levi.I) {
        std::vector<std::int64_t> c(n);
        int ri = datum.simple_root_index(i);
        for (int j = 0; j < n; ++j) c[j] = datum.roots[ri].fund[j];
        cols.push_back(c);
    }
    HnfData h;
    int r = 0;
    size_t c0 = 0;
    while (r < n && c0 < cols.size()) {
        // Euclid across columns c0.. on row r
        for (;;) {
            int nz = -1;
            for (size_t j = c0; j < cols.size(); ++j)
                if (cols[j][r] != 0) { nz = static_cast<int>(j); break; }
            if (nz < 0) break;
            // move minimal |entry| to c0
            int mn = nz;
            for (size_t j = c0; j < cols.size(); ++j)
                if (cols[j][r] != 0 && std::abs(cols[j][r]) < std::abs(cols[mn][r])) mn = (int)j;
            std::swap(cols[c0], cols[(size_t)mn]);
            bool done = true;
            for (size_t j = c0 + 1; j < cols.size(); ++j) {
                if (cols[j][r] == 0) continue;
                std::int64_t q = cols[j][r] / cols[c0][r];
                for (int k = 0; k < n; ++k) cols[j][k] -= q * cols[c0][k];
                if (cols[j][r] != 0) done = false;
            }
            if (done) break;
        }
        if (cols[c0][r] != 0) {
            if (cols[c0][r] < 0)
                for (int k = 0; k < n; ++k) cols[c0][k] = -cols[c0][k];
            h.cols.push_back(cols[c0]);
            h.pivot_row.push_back(r);
            ++c0;
        }
        ++r;
    }
    return h;
}

Weight hnf_reduce(const HnfData& h, Weight v) {
    for (size_t c = 0; c < h.cols.size(); ++c) {
        int r = h.pivot_row[c];
        std::int64_t d = h.cols[c][r];
        std::int64_t q = floor_div(v[r], d);
        if (q == 0) continue;
        for (size_t k = 0; k < v.size(); ++k) v[k] -= q * h.cols[c][k];
    }
    return v;
}

} // namespace

GradeClass grade_class(const RootDatum& datum, const LeviDatum& levi, const Weight& lam) {
    HnfData h = levi_hnf(datum, levi);
    return GradeClass{hnf_reduce(h, lam)};
}

Weight reduce_mod_pZI(const RootDatum& datum, const LeviDatum& levi, const Weight& v) {
    HnfData h = levi_hnf(datum, levi);
    for (auto& c : h.cols)
        for (auto& x : c) x *= datum.p;
    return hnf_reduce(h, v);
}

bool in_ZI(const RootDatum& datum, const LeviDatum& levi, const Weight& v) {
    Weight r = grade_class(datum, levi, v).rep;
    return std::all_of(r.begin(), r.end(), [](std::int64_t x) { return x == 0; });
}

std::optional<std::vector<std::int64_t>> simple_coords_of(const RootDatum& datum,
                                                          const Weight& lam) {
    // solve C x = lam by integer Cramer (rank <= 2)
    int n = datum.rank;
    const auto& C = datum.cartan;
    if (n == 1) {
        if (lam[0] % C[0][0] != 0) return std::nullopt;
        return std::vector<std::int64_t>{lam[0] / C[0][0]};
    }
    std::int64_t det = C[0][0] * C[1][1] - C[0][1] * C[1][0];
    std::int64_t x0 = lam[0] * C[1][1] - C[0][1] * lam[1];
    std::int64_t x1 = C[0][0] * lam[1] - lam[0] * C[1][0];
    if (x0 % det != 0 || x1 % det != 0) return std::nullopt;
    return std::vector<std::int64_t>{x0 / det, x1 / det};
}

namespace {

// n_alpha >= 0 over outside roots matching target on coordinates outside I
bool cone_membership(const RootDatum& datum, const LeviDatum& levi,
                     const std::vector<int>& outside_pos,
                     const std::vector<std::int64_t>& target) {
    std::vector<int> free_coords;
    for (int j = 0; j < datum.rank; ++j)
        if (!levi.in_I(j)) free_coords.push_back(j);
    if (free_coords.empty()) return true; // everything lands in ZI
    for (int j : free_coords)
        if (target[j] < 0) return false;
    // depth-first over coefficients with nonnegative-residual pruning
    std::vector<std::int64_t> rem(target);
    std::function<bool(size_t)> rec = [&](size_t idx) -> bool {
        if (idx == outside_pos.size()) {
            for (int j : free_coords)
                if (rem[j] != 0) return false;
            return true;
        }
        const auto& sc = datum.roots[outside_pos[idx]].simple;
        std::int64_t maxn = 1 << 20;
        for (int j : free_coords)
            if (sc[j] > 0) maxn = std::min(maxn, rem[j] / sc[j]);
        for (std::int64_t nn = 0; nn <= maxn; ++nn) {
            bool ok = true;
            for (int j : free_coords)
                if (rem[j] - nn * sc[j] < 0) { ok = false; break; }
            if (!ok) break;
            for (int j : free_coords) rem[j] -= nn * sc[j];
            if (rec(idx + 1)) return true;
            for (int j : free_coords) rem[j] += nn * sc[j];
        }
        return false;
    };
    return rec(0);
}

} // namespace

bool grade_leq(const RootDatum& datum, const LeviDatum& levi, const GradeClass& c1,
               const GradeClass& c2) {
    Weight delta = w_sub(c2.rep, c1.rep);
    auto sc = simple_coords_of(datum, delta);
    if (!sc) return false; // not even in the root lattice
    std::vector<int> outside;
    for (int r = 0; r < datum.num_positive; ++r)
        if (std::find(levi.R_I.begin(), levi.R_I.end(), r) == levi.R_I.end())
            outside.push_back(r);
    return cone_membership(datum, levi, outside, *sc);
}

Weight affine_reflect(const RootDatum& datum, int root_idx, std::int64_t m, const Weight& lam) {
    std::int64_t c = datum.pair(lam, root_idx) - m * datum.p;
    return w_sub(lam, w_scale(c, datum.roots[root_idx].fund));
}

Weight dot_action(const RootDatum& datum, const std::vector<AffineLetter>& word,
                  const Weight& lam) {
    Weight v = w_add(lam, datum.rho);
    for (auto it = word.rbegin(); it != word.rend(); ++it)
        v = affine_reflect(datum, it->root, it->m, v);
    return w_sub(v, datum.rho);
}

Weight dot_action_weyl(const RootDatum& datum, int w, const Weight& lam) {
    return w_sub(datum.act(w, w_add(lam, datum.rho)), datum.rho);
}

Weight lambda_twist(const RootDatum& datum, const LeviDatum& levi, int w, const Weight& lam) {
    bool in = std::find(levi.W_upper_I.begin(), levi.W_upper_I.end(), w) != levi.W_upper_I.end();
    if (!in) throw std::invalid_argument("lambda_twist: w not in W^I");
    Weight shift = w_sub(datum.rho, datum.act(w, datum.rho));
    return w_sub(lam, w_scale(datum.p - 1, shift));
}

bool Box::contains(const Weight& w) const {
    for (size_t i = 0; i < range.size(); ++i)
        if (w[i] < range[i].first || w[i] >= range[i].second) return false;
    return true;
}

std::vector<Weight> Box::enumerate() const {
    std::vector<Weight> out;
    Weight cur(range.size());
    std::function<void(size_t)> rec = [&](size_t i) {
        if (i == range.size()) { out.push_back(cur); return; }
        for (std::int64_t v = range[i].first; v < range[i].second; ++v) {
            cur[i] = v;
            rec(i + 1);
        }
    };
    rec(0);
    return out;
}

Box fundamental_box(const RootDatum& datum) {
    Box b;
    for (int i = 0; i < datum.rank; ++i) b.range.push_back({0, datum.p});
    return b;
}
Box classification_box(const RootDatum& datum) {
    Box b;
    for (int i = 0; i < datum.rank; ++i) b.range.push_back({-datum.p, 2 * datum.p});
    return b;
}

std::vector<Weight> orbit_in_box(const RootDatum& datum, const LeviDatum& levi,
                                 const std::vector<OrbitGen>& gens, const Weight& lam,
                                 const Box& box, bool add_pZI) {
    if (box.range.empty()) throw std::invalid_argument("orbit_in_box: empty box");
    Box super;
    std::int64_t maxwidth = 0;
    for (auto [lo, hi] : box.range) {
        std::int64_t w = hi - lo;
        super.range.push_back({lo - w, hi + w});
        maxwidth = std::max(maxwidth, 3 * w);
    }
    std::set<Weight> visited;
    std::vector<Weight> queue;
    auto push = [&](const Weight& w) {
        if (!super.contains(w)) return;
        if (visited.insert(w).second) queue.push_back(w);
    };
    push(lam);
    for (size_t head = 0; head < queue.size(); ++head) {
        Weight cur = queue[head];
        for (const auto& g : gens) {
            std::int64_t c = datum.pair(w_add(cur, datum.rho), g.root);
            if (!g.all_m) {
                push(dot_action(datum, {{g.root, 0}}, cur));
                continue;
            }
            // dot reflection moves by -(c - mp) alpha; restrict to displacements
            // that can stay inside the super-box
            for (std::int64_t k = -maxwidth; k <= maxwidth; ++k) {
                if ((c - k) % datum.p != 0) continue;
                Weight img = w_sub(cur, w_scale(k, datum.roots[g.root].fund));
                push(img);
            }
        }
        if (add_pZI)
            for (int i : levi.I) {
                int ri = datum.simple_root_index(i);
                push(w_add(cur, w_scale(datum.p, datum.roots[ri].fund)));
                push(w_sub(cur, w_scale(datum.p, datum.roots[ri].fund)));
            }
    }
    std::vector<Weight> out;
    for (const auto& w : visited)
        if (box.contains(w)) out.push_back(w);
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace bv
