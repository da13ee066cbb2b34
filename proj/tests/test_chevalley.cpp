#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bv/chevalley.hpp"
#include "bv/ratfunc.hpp"

using namespace bv;

TEST_CASE("sl2 relations") {
    RootDatum d = build_root_datum("A1", 5);
    ChevalleyBasis cb = build_chevalley(d);
    int e = cb.e_index(0), f = cb.f_index(0), h = cb.h_index(0);
    REQUIRE(cb.bracket_of(e, f).size() == 1);
    CHECK(cb.bracket_of(e, f)[0].basis == h);
    CHECK(cb.bracket_of(e, f)[0].coeff == 1);
    REQUIRE(cb.bracket_of(h, e).size() == 1);
    CHECK(cb.bracket_of(h, e)[0].coeff == 2);
    REQUIRE(cb.bracket_of(h, f).size() == 1);
    CHECK(cb.bracket_of(h, f)[0].coeff == -2);
}

TEST_CASE("simply laced constants are units, B2 has a 2") {
    RootDatum a2 = build_root_datum("A2", 3);
    ChevalleyBasis cb2 = build_chevalley(a2);
    std::int64_t n12 = cb2.structure_constant(0, 1);
    CHECK(std::abs(n12) == 1);

    RootDatum b2 = build_root_datum("B2", 3);
    ChevalleyBasis cbb = build_chevalley(b2);
    bool saw2 = false;
    for (int a = 0; a < cbb.num_roots; ++a)
        for (int b = 0; b < cbb.num_roots; ++b)
            if (std::abs(cbb.structure_constant(a, b)) == 2) saw2 = true;
    CHECK(saw2);
}

TEST_CASE("standard Levi form character") {
    RootDatum d = build_root_datum("A2", 3);
    LeviDatum l = build_levi(d, {0});
    PCharacter chi{&l};
    ChevalleyBasis cb = build_chevalley(d);
    CHECK(chi.chi_root(d, cb.f_index(0)) == 1);
    CHECK(chi.chi_root(d, cb.f_index(1)) == 0);
    CHECK(chi.chi_root(d, cb.e_index(0)) == 0);
    // chi vanishes on non-simple negative roots
    for (int r = 0; r < cb.num_roots; ++r)
        if (d.roots[r].height < -1) CHECK(chi.chi_root(d, r) == 0);
}

TEST_CASE("structural map is coroot-linear") {
    RootDatum d = build_root_datum("A2", 3);
    RatFunc s = RatFunc::variable(3);
    StructuralMap<RatFunc> pi{{s.zero_like(), s}};
    // pi on h_theta = pi(h_1) + pi(h_2) = s
    int theta = d.root_index({1, 1});
    CHECK(pi.pi_of_root(d, theta) == s);
    CHECK(pi.pi_of_root(d, d.roots[theta].negative_of) == -s);
    CHECK(pi.pi_of_root(d, d.root_index({1, 0})).is_zero());
}

TEST_CASE("tau realizes -w_I with the right character twist") {
    for (auto label : {"A1", "A2", "B2"}) {
        RootDatum d = build_root_datum(label, 3);
        std::vector<std::vector<int>> levis = {{}};
        for (int i = 0; i < d.rank; ++i) levis.push_back({i});
        if (d.rank == 2) levis.push_back({0, 1});
        for (const auto& I : levis) {
            LeviDatum l = build_levi(d, I);
            ChevalleyBasis cb = build_chevalley(d);
            TauMap t = build_tau(cb, l);
            PCharacter chi{&l};
            for (int a = 0; a < cb.num_roots; ++a) {
                CHECK(t.root_image[a] == d.roots[d.act_on_root(l.w_I, a)].negative_of);
                CHECK(std::abs(t.root_sign[a]) == 1);
                CHECK(t.root_sign_inv[a] * chi.chi_root(d, t.root_image_inv[a]) ==
                      -chi.chi_root(d, a));
            }
            // tau then tau-inverse is the identity on root vectors
            for (int a = 0; a < cb.num_roots; ++a) {
                int b = t.root_image[a];
                CHECK(t.root_image_inv[b] == a);
                CHECK(t.root_sign[a] * t.root_sign_inv[b] == 1);
            }
        }
    }
}
