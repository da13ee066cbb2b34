#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace bv {

using Weight = std::vector<std::int64_t>; // fundamental-weight coordinates

Weight w_add(const Weight& a, const Weight& b);
Weight w_sub(const Weight& a, const Weight& b);
Weight w_scale(std::int64_t c, const Weight& a);

// One root: simple-root coordinates, fundamental coordinates, and the coroot
// as the integer functional lambda -> sum coroot[i]*lambda[i].
struct Root {
    std::vector<std::int64_t> simple; // coords in the simple roots
    Weight fund;                      // coords in the fundamental weights
    std::vector<std::int64_t> coroot; // <lambda, beta^vee> = coroot . lambda
    int height = 0;                   // sum of simple coords (sign included)
    bool positive = false;
    int negative_of = -1;             // index of -beta in the root list
};

struct WeylElement {
    std::vector<std::vector<std::int64_t>> mat; // action on fundamental coords
    std::vector<int> word;                      // reduced word in simple indices
    std::vector<int> root_perm;                 // image index per root
    int inverse = -1;                           // index of w^{-1}
};

struct RootDatum {
    std::string type_label;
    int rank = 0;
    std::int64_t p = 0;
    std::vector<std::vector<std::int64_t>> cartan; // cartan[i][j] = <alpha_j, alpha_i^vee>
    std::vector<Root> roots;                       // positives first, then negatives
    int num_positive = 0;
    Weight rho;                                    // (1,...,1)
    std::vector<WeylElement> weyl;
    int w0 = -1;                                   // index of the longest element

    std::int64_t pair(const Weight& lam, int root_idx) const; // <lam, beta^vee>
    int root_index(const std::vector<std::int64_t>& simple_coords) const; // -1 if absent
    int simple_root_index(int i) const; // root index of alpha_i
    // image of a root under a Weyl element, as root index
    int act_on_root(int w, int root_idx) const { return weyl[w].root_perm[root_idx]; }
    Weight act(int w, const Weight& lam) const;
};

RootDatum build_root_datum(const std::string& type_label, std::int64_t p);
int weyl_compose(const RootDatum& d, int a, int b);

struct LeviDatum {
    std::vector<int> I;          // simple indices in the Levi subset
    std::vector<int> R_I;        // root indices lying in ZI
    std::vector<int> R_I_pos;    // positive ones
    std::vector<int> W_I;        // Weyl element indices of the parabolic subgroup
    int w_I = -1;                // longest element of W_I
    int w_upper_I = -1;          // w^I = w_I w_0
    std::vector<int> W_upper_I;  // {w : w^{-1} alpha > 0 for all alpha in I}

    bool in_I(int simple_idx) const;
    bool contains_weyl(int w) const;
};

LeviDatum build_levi(const RootDatum& datum, const std::vector<int>& I);

// lambda + ZI, canonicalized by Hermite reduction against the columns alpha_i, i in I.
struct GradeClass {
    Weight rep;
    bool operator==(const GradeClass& o) const { return rep == o.rep; }
    bool operator<(const GradeClass& o) const { return rep < o.rep; }
};

GradeClass grade_class(const RootDatum& datum, const LeviDatum& levi, const Weight& lam);
bool in_ZI(const RootDatum& datum, const LeviDatum& levi, const Weight& v);

// canonical coset representative modulo the sublattice p ZI
Weight reduce_mod_pZI(const RootDatum& datum, const LeviDatum& levi, const Weight& v);
// partial order: c1 <= c2 iff rep2 - rep1 in sum of Z>=0 (R+ \ ZI) + ZI
bool grade_leq(const RootDatum& datum, const LeviDatum& levi, const GradeClass& c1,
               const GradeClass& c2);
// simple-root coordinates of a weight, when they are integral
std::optional<std::vector<std::int64_t>> simple_coords_of(const RootDatum& datum,
                                                          const Weight& lam);

// s_{alpha, m p}(lambda) = lambda - (<lambda, alpha^vee> - m p) alpha
Weight affine_reflect(const RootDatum& datum, int root_idx, std::int64_t m, const Weight& lam);

// One letter of an affine word.
struct AffineLetter {
    int root;
    std::int64_t m = 0;
};
// w . lambda = w(lambda + rho) - rho, rightmost letter applied first
Weight dot_action(const RootDatum& datum, const std::vector<AffineLetter>& word,
                  const Weight& lam);
Weight dot_action_weyl(const RootDatum& datum, int w, const Weight& lam);

// lambda^w = lambda - (p-1)(rho - w rho)
Weight lambda_twist(const RootDatum& datum, const LeviDatum& levi, int w, const Weight& lam);

struct Box {
    std::vector<std::pair<std::int64_t, std::int64_t>> range; // half-open per coordinate
    bool contains(const Weight& w) const;
    std::vector<Weight> enumerate() const;
};
Box fundamental_box(const RootDatum& datum);     // [0,p)^rank
Box classification_box(const RootDatum& datum);  // [-p,2p)^rank

struct OrbitGen {
    int root;
    bool all_m = false; // family s_{alpha, mp} over all m, else only m=0
};
// dot-action orbit of lambda under the generators (and optionally + pZI),
// explored in a super-box twice the size of `box`, returned intersected with box
std::vector<Weight> orbit_in_box(const RootDatum& datum, const LeviDatum& levi,
                                 const std::vector<OrbitGen>& gens, const Weight& lam,
                                 const Box& box, bool add_pZI);

} // namespace bv
