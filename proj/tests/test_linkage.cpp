#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bv/linkage.hpp"

using namespace bv;

namespace {

StructuralMap<Fp> zero_pi(const RootDatum& d) {
    StructuralMap<Fp> pi;
    for (int i = 0; i < d.rank; ++i) pi.pi_simple.push_back(Fp(0, d.p));
    return pi;
}

} // namespace

TEST_CASE("wall set from the structural map") {
    {
        RootDatum d = build_root_datum("A2", 3);
        PiProfile prof = compute_r_pi(d, zero_pi(d));
        CHECK(prof.r_pi.size() == d.roots.size());
        CHECK(prof.r_pi_pos.size() == (size_t)d.num_positive);
    }
    {
        RootDatum d = build_root_datum("A1", 3);
        RatFunc s = RatFunc::variable(3);
        StructuralMap<RatFunc> pi{{s}};
        CHECK(compute_r_pi(d, pi).r_pi.empty());
    }
    {
        RootDatum d = build_root_datum("A2", 3);
        RatFunc s = RatFunc::variable(3);
        StructuralMap<RatFunc> pi{{s.zero_like(), s}};
        PiProfile prof = compute_r_pi(d, pi);
        // only +-alpha_1 survives: every other coroot picks up the variable
        REQUIRE(prof.r_pi.size() == 2);
        int a1 = d.simple_root_index(0);
        CHECK(prof.contains(a1));
        CHECK(prof.contains(d.roots[a1].negative_of));
    }
    {
        // over the local ring the residue of any element satisfies a^p = a, so
        // v^p - v is never a unit and every root is a wall
        RootDatum d = build_root_datum("A1", 3);
        RatFunc t = RatFunc::variable(3);
        StructuralMap<RatFunc> pi{{t + t.from_int(1)}};
        CHECK(compute_r_pi(d, pi, true).r_pi.size() == 2);
        StructuralMap<RatFunc> pi2{{t}};
        CHECK(compute_r_pi(d, pi2, true).r_pi.size() == 2);
        // off dvr_mode the same values sit in a field and miss the walls
        CHECK(compute_r_pi(d, pi, false).r_pi.empty());
    }
}

TEST_CASE("wall residues and the raising operator") {
    {
        RootDatum d = build_root_datum("A2", 3);
        auto pi = zero_pi(d);
        Weight mrho{-1, -1};
        for (int r = 0; r < d.num_positive; ++r) CHECK(n_beta(d, pi, mrho, r) == 0);
    }
    {
        RootDatum d = build_root_datum("A1", 5);
        auto pi = zero_pi(d);
        CHECK(n_beta(d, pi, Weight{2}, 0) == 3);
        StructuralMap<Fp> pi2{{Fp(2, 5)}};
        CHECK(n_beta(d, pi2, Weight{1}, 0) == 4);
        CHECK(alpha_up(d, pi, Weight{1}, 0) == Weight{7});
        CHECK(alpha_up(d, pi, Weight{-1}, 0) == Weight{-1});
    }
    {
        RootDatum d = build_root_datum("A1", 3);
        CHECK(alpha_up(d, zero_pi(d), Weight{1}, 0) == Weight{3});
    }
    {
        // a value outside the prime field has no residue
        RootDatum d = build_root_datum("A1", 3);
        StructuralMap<RatFunc> pi{{RatFunc::variable(3)}};
        CHECK_THROWS_AS(n_beta(d, pi, Weight{0}, 0), std::invalid_argument);
    }
}

TEST_CASE("predicted blocks partition the box") {
    RootDatum d = build_root_datum("A1", 3);
    LeviDatum l = build_levi(d, {});
    PiProfile prof = compute_r_pi(d, zero_pi(d));
    Box box;
    box.range.push_back({-4, 5}); // [-4, 4]
    auto blocks = predicted_blocks(d, l, prof, box);
    // independent closed form: the orbit of c is {c, -c-2} + 6Z
    std::vector<std::vector<Weight>> expect = {
        {{-4}, {2}}, {{-3}, {1}, {3}}, {{-2}, {0}, {4}}, {{-1}}};
    CHECK(blocks == expect);

    // partition property over a second configuration
    RatFunc s = RatFunc::variable(3);
    StructuralMap<RatFunc> pis{{s}};
    auto blocks2 = predicted_blocks(d, l, compute_r_pi(d, pis), box);
    CHECK(blocks2.size() == 9); // no walls: everything is a singleton
    size_t total = 0;
    for (const auto& c : blocks2) total += c.size();
    CHECK(total == 9);
}

TEST_CASE("predicted blocks with a full Levi use only the inner walls") {
    RootDatum d = build_root_datum("A1", 3);
    LeviDatum l = build_levi(d, {0});
    PiProfile prof = compute_r_pi(d, zero_pi(d));
    auto gens = block_generators(d, l, prof);
    REQUIRE(gens.size() == 1);
    CHECK(gens[0].root == d.simple_root_index(0));
    Box box;
    box.range.push_back({-3, 6});
    auto blocks = predicted_blocks(d, l, prof, box);
    size_t total = 0;
    for (const auto& c : blocks) total += c.size();
    CHECK(total == 9);
    // 5 and -1 lie in one class: they differ by the reflection plus 6
    bool found = false;
    for (const auto& c : blocks)
        if (std::find(c.begin(), c.end(), Weight{-1}) != c.end()) {
            found = true;
            CHECK(std::find(c.begin(), c.end(), Weight{5}) != c.end());
        }
    CHECK(found);
}

TEST_CASE("computed composition factors stay in the predicted classes") {
    {
        RootDatum d = build_root_datum("A1", 3);
        LeviDatum l = build_levi(d, {});
        ChevalleyBasis cb = build_chevalley(d);
        auto ctx = make_context<Fp>(d, l, cb, zero_pi(d), Fp(0, 3));
        PiProfile prof = compute_r_pi(d, zero_pi(d));
        auto rep = verify_linkage(ctx, prof, classification_box(d));
        CHECK(rep.ok);
        CHECK(rep.violations.empty());
        CHECK(rep.regime == "empty");
    }
    {
        RootDatum d = build_root_datum("A1", 5);
        LeviDatum l = build_levi(d, {});
        ChevalleyBasis cb = build_chevalley(d);
        auto ctx = make_context<Fp>(d, l, cb, zero_pi(d), Fp(0, 5));
        auto rep = verify_linkage(ctx, compute_r_pi(d, zero_pi(d)), fundamental_box(d));
        CHECK(rep.ok);
    }
    {
        RootDatum d = build_root_datum("A2", 3);
        LeviDatum l = build_levi(d, {0});
        ChevalleyBasis cb = build_chevalley(d);
        auto ctx = make_context<Fp>(d, l, cb, zero_pi(d), Fp(0, 3));
        auto rep = verify_linkage(ctx, compute_r_pi(d, zero_pi(d)), fundamental_box(d));
        CHECK(rep.ok);
        CHECK(rep.regime == "full");
    }
    {
        // generic structural map: no walls and no nontrivial edges
        RootDatum d = build_root_datum("A1", 3);
        LeviDatum l = build_levi(d, {});
        ChevalleyBasis cb = build_chevalley(d);
        RatFunc s = RatFunc::variable(3);
        StructuralMap<RatFunc> pi{{s}};
        auto ctx = make_context<RatFunc>(d, l, cb, pi, s.zero_like());
        auto rep = verify_linkage(ctx, compute_r_pi(d, pi), fundamental_box(d));
        CHECK(rep.ok);
        for (const auto& [lam, f] : rep.factors) {
            CHECK(f.size() == 1);
            CHECK(f.begin()->second == 1);
            CHECK(f.begin()->first.dim == 3);
        }
    }
}

TEST_CASE("irreducibility criterion matches the computed radical") {
    {
        RootDatum d = build_root_datum("A1", 3);
        LeviDatum l = build_levi(d, {});
        ChevalleyBasis cb = build_chevalley(d);
        auto ctx = make_context<Fp>(d, l, cb, zero_pi(d), Fp(0, 3));
        PiProfile prof = compute_r_pi(d, zero_pi(d));
        for (const Weight& lam : classification_box(d).enumerate()) {
            bool predicted = predicted_irreducible(d, l, prof, ctx.pi, lam);
            bool computed = ctx.rad_rows(lam).rows == 0;
            CHECK(predicted == computed);
        }
    }
    {
        RootDatum d = build_root_datum("A2", 3);
        LeviDatum l = build_levi(d, {0});
        ChevalleyBasis cb = build_chevalley(d);
        auto ctx = make_context<Fp>(d, l, cb, zero_pi(d), Fp(0, 3));
        PiProfile prof = compute_r_pi(d, zero_pi(d));
        for (const Weight& lam : fundamental_box(d).enumerate()) {
            bool predicted = predicted_irreducible(d, l, prof, ctx.pi, lam);
            bool computed = ctx.rad_rows(lam).rows == 0;
            CHECK(predicted == computed);
        }
    }
}

TEST_CASE("iso classification against the finite orbit") {
    RootDatum d = build_root_datum("A1", 3);
    LeviDatum l = build_levi(d, {0});
    ChevalleyBasis cb = build_chevalley(d);
    auto ctx = make_context<Fp>(d, l, cb, zero_pi(d), Fp(0, 3));
    PiProfile prof = compute_r_pi(d, zero_pi(d));
    for (std::int64_t a = -3; a <= 3; ++a)
        for (std::int64_t b = -3; b <= 3; ++b) {
            bool predicted = predicted_iso(d, l, prof, Weight{a}, Weight{b});
            bool computed = iso_test(ctx.Z(Weight{a}), ctx.Z(Weight{b}));
            CHECK(predicted == computed);
        }
}
