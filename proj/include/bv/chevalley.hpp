#pragma once

#include <cstdint>
#include <vector>

#include "bv/lattice.hpp"

namespace bv {

using IntMat = std::vector<std::vector<std::int64_t>>;

// One term of a bracket expansion in the Lie algebra basis.
struct BracketTerm {
    int basis;
    std::int64_t coeff;
};

// Basis layout: index r (0 <= r < #roots) is the root vector x_beta for
// datum.roots[r]; index #roots + i is h_i for the i-th simple coroot.
// Structure constants are extracted from a concrete faithful matrix
// realization (sl2 / sl3 / sp4) and re-verified abstractly (Jacobi, torus
// weights, [x_a, x_{-a}] = coroot) at build time.
struct ChevalleyBasis {
    const RootDatum* datum = nullptr;
    int num_roots = 0;
    int dim = 0;   // num_roots + rank
    int rep_n = 0; // size of the realization matrices
    std::vector<IntMat> rep; // concrete matrix per basis element
    std::vector<std::vector<std::vector<BracketTerm>>> bracket; // [a][b]

    int x_index(int root) const { return root; }
    int h_index(int i) const { return num_roots + i; }
    int e_index(int simple) const; // x_{alpha_i}
    int f_index(int simple) const; // x_{-alpha_i}

    const std::vector<BracketTerm>& bracket_of(int a, int b) const { return bracket[a][b]; }
    // structure constant N_{a,b} when roots a,b have a root sum; 0 otherwise
    std::int64_t structure_constant(int root_a, int root_b) const;
};

ChevalleyBasis build_chevalley(const RootDatum& datum);

// chi in standard Levi form: vanishes on b, chi(x_{-alpha_i}) = 1 iff i in I.
struct PCharacter {
    const LeviDatum* levi = nullptr;
    // 0 or 1; nonzero only on negative simple root vectors with index in I
    std::int64_t chi_root(const RootDatum& datum, int root_idx) const;
};

// pi: U^0 -> A given by its values on the simple coroots; values on all
// h_beta follow by coroot linearity.
template <class K>
struct StructuralMap {
    std::vector<K> pi_simple;

    K pi_of_root(const RootDatum& datum, int root_idx) const {
        K s = pi_simple[0].zero_like();
        const auto& c = datum.roots[root_idx].coroot;
        for (size_t i = 0; i < pi_simple.size(); ++i)
            s += pi_simple[i].from_int(c[i]) * pi_simple[i];
        return s;
    }
};

// The automorphism used by the duality functor: tau = (sign twist) o
// (conjugation by a representative of w_I) o (negative transpose). It sends
// x_beta to sign * x_{-w_I beta}, acts on the h-block by an integer matrix,
// and satisfies chi o tau^{-1} = -chi.
struct TauMap {
    std::vector<int> root_image;           // per root index
    std::vector<std::int64_t> root_sign;   // per root index
    IntMat h_mat;                          // tau(h_i) = sum_j h_mat[j][i] h_j
    std::vector<int> root_image_inv;
    std::vector<std::int64_t> root_sign_inv;
    IntMat h_mat_inv;
};

TauMap build_tau(const ChevalleyBasis& basis, const LeviDatum& levi);

} // namespace bv
